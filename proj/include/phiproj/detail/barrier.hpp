#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phiproj/error.hpp"
#include "phiproj/measure.hpp"

namespace phiproj::detail {

/// Value, gradient and Hessian of a smooth objective at one point.
struct LocalModel
{
    double value = 0.0;
    Vector gradient;
    Matrix hessian;
};

struct BarrierSettings
{
    double mu_initial = 1.0;
    double mu_shrink = 0.1;
    double mu_final = 1e-12;
    int max_iterations = 500;
    double gradient_tol = 1e-10;
    /// Finish with undamped-barrier Newton on the bare objective.
    bool polish = true;
};

struct TracePoint
{
    int stage = 0;
    double merit = 0.0;
};

struct BarrierOutcome
{
    Vector x;
    double value = 0.0;
    Vector gradient;
    int iterations = 0;
    bool converged = false;
    std::vector<TracePoint> trace;
};

inline Vector slacks(const Matrix& lhs, const Vector& rhs, const Vector& x)
{
    return rhs - lhs * x;
}

/// Largest step along `d` keeping every slack strictly positive, times 0.99.
inline double max_feasible_step(const Matrix& lhs, const Vector& slack, const Vector& d)
{
    Vector rate = lhs * d;
    double step = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < rate.size(); ++j)
        if (rate[j] > 0.0)
            step = std::min(step, slack[j] / rate[j]);
    return 0.99 * step;
}

/// Newton direction for (H, g); steepest descent when H is not positive
/// definite.
inline Vector descent_direction(const Matrix& h, const Vector& g)
{
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() == Eigen::Success) {
        Vector d = -llt.solve(g);
        if (d.allFinite() && g.dot(d) < 0.0)
            return d;
    }
    return -g;
}

/// Minimizes `objective` over {x : lhs x < rhs} by a sequence of damped
/// Newton solves on objective(x) - mu * sum_j log(rhs_j - lhs_j x) with mu
/// shrinking geometrically, followed by an optional Newton polish on the
/// bare objective.  `objective(x)` returns std::nullopt when x is outside
/// its domain; `start` must be strictly feasible.
template <class Objective>
BarrierOutcome barrier_minimize(Objective&& objective, const Matrix& lhs,
                                const Vector& rhs, Vector start,
                                const BarrierSettings& settings)
{
    constexpr double armijo_c = 1e-4;
    constexpr double backtrack = 0.5;

    if ((slacks(lhs, rhs, start).array() <= 0.0).any())
        throw ValidationError("barrier_minimize: start point is not strictly feasible");

    BarrierOutcome out;
    Vector x = std::move(start);

    auto merit = [&](const Vector& y, double mu) -> std::optional<double> {
        Vector sl = slacks(lhs, rhs, y);
        if ((sl.array() <= 0.0).any())
            return std::nullopt;
        auto local = objective(y);
        if (!local || !std::isfinite(local->value))
            return std::nullopt;
        return local->value - mu * sl.array().log().sum();
    };

    double mu = settings.mu_initial;
    int stage = 0;
    bool budget_exhausted = false;
    while (!budget_exhausted) {
        for (;;) {
            std::optional<LocalModel> local = objective(x);
            if (!local)
                throw ValidationError("barrier_minimize: iterate left the objective domain");
            Vector sl = slacks(lhs, rhs, x);
            Vector inv = sl.cwiseInverse();
            Vector g = local->gradient + mu * lhs.transpose() * inv;
            Matrix h = local->hessian
                       + mu * lhs.transpose() * inv.cwiseAbs2().asDiagonal() * lhs;
            Vector d = descent_direction(h, g);
            double slope = g.dot(d);
            double current = local->value - mu * sl.array().log().sum();
            // squared Newton decrement small relative to the merit
            if (-slope <= 1e-15 * std::max(1.0, std::abs(current))
                || g.lpNorm<Eigen::Infinity>() < 1e-15)
                break;
            if (out.iterations >= settings.max_iterations) {
                budget_exhausted = true;
                break;
            }
            double alpha = std::min(1.0, max_feasible_step(lhs, sl, d));
            bool accepted = false;
            while (alpha > 1e-16) {
                Vector trial = x + alpha * d;
                auto value = merit(trial, mu);
                if (value && *value <= current + armijo_c * alpha * slope) {
                    x = std::move(trial);
                    out.trace.push_back({stage, *value});
                    accepted = *value < current;
                    break;
                }
                alpha *= backtrack;
            }
            ++out.iterations;
            if (!accepted)
                break;
        }
        if (mu < settings.mu_final)
            break;
        mu *= settings.mu_shrink;
        ++stage;
    }

    std::optional<LocalModel> local = objective(x);
    if (settings.polish) {
        ++stage;
        while (out.iterations < settings.max_iterations) {
            if (local->gradient.lpNorm<Eigen::Infinity>() <= settings.gradient_tol)
                break;
            Vector sl = slacks(lhs, rhs, x);
            Vector d = descent_direction(local->hessian, local->gradient);
            double slope = local->gradient.dot(d);
            double alpha = std::min(1.0, max_feasible_step(lhs, sl, d));
            bool accepted = false;
            while (alpha > 1e-16) {
                Vector trial = x + alpha * d;
                if ((slacks(lhs, rhs, trial).array() > 0.0).all()) {
                    std::optional<LocalModel> next = objective(trial);
                    // near the optimum value changes drown in rounding; accept
                    // a step that is flat in value but shrinks the gradient
                    bool flat = next && std::abs(next->value - local->value)
                                            <= 1e-14 * std::max(1.0, std::abs(local->value))
                                && next->gradient.template lpNorm<Eigen::Infinity>()
                                       < local->gradient.template lpNorm<Eigen::Infinity>();
                    if (next && std::isfinite(next->value)
                        && (next->value <= local->value + armijo_c * alpha * slope || flat)) {
                        x = std::move(trial);
                        local = std::move(next);
                        out.trace.push_back({stage, local->value});
                        accepted = true;
                        break;
                    }
                }
                alpha *= backtrack;
            }
            ++out.iterations;
            if (!accepted)
                break;
        }
    }
    out.x = x;
    out.value = local->value;
    out.gradient = local->gradient;
    out.converged = !budget_exhausted
                    && out.gradient.lpNorm<Eigen::Infinity>() <= settings.gradient_tol;
    return out;
}

/// Maximizes c.x over {x : lhs x < rhs} approximately (barrier weight
/// down to 1e-10) from a strictly feasible start.
inline Vector maximize_linear(const Vector& c, const Matrix& lhs, const Vector& rhs,
                              const Vector& start)
{
    auto linear = [&](const Vector& x) -> std::optional<LocalModel> {
        return LocalModel{-c.dot(x), -c, Matrix::Zero(c.size(), c.size())};
    };
    BarrierSettings settings;
    settings.mu_final = 1e-10;
    settings.polish = false;
    settings.max_iterations = 2000;
    return barrier_minimize(linear, lhs, rhs, start, settings).x;
}

/// Point of {x : lhs x <= rhs} maximizing the smallest slack, or nullopt when
/// the set has empty interior.
inline std::optional<Vector> find_interior_point(const Matrix& lhs, const Vector& rhs,
                                                 const Vector& hint)
{
    const Eigen::Index k = lhs.cols();
    const Eigen::Index rows = lhs.rows();
    // variables (x, tau): lhs x + tau <= rhs, tau <= 1
    Matrix big = Matrix::Zero(rows + 1, k + 1);
    big.topLeftCorner(rows, k) = lhs;
    big.col(k).head(rows).setOnes();
    big(rows, k) = 1.0;
    Vector bound(rows + 1);
    bound.head(rows) = rhs;
    bound[rows] = 1.0;

    Vector z(k + 1);
    z.head(k) = hint;
    double min_slack = (rhs - lhs * hint).minCoeff();
    z[k] = std::min(min_slack, 1.0) - 1.0;

    Vector objective = Vector::Zero(k + 1);
    objective[k] = 1.0;
    Vector best = maximize_linear(objective, big, bound, z);
    if (!(best[k] > 0.0))
        return std::nullopt;
    return Vector(best.head(k));
}

}  // namespace phiproj::detail
