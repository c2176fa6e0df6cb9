#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "phiproj/detail/barrier.hpp"
#include "phiproj/divergence.hpp"
#include "phiproj/error.hpp"
#include "phiproj/model.hpp"
#include "phiproj/objective.hpp"
#include "phiproj/rng.hpp"

namespace phiproj {

struct SolverOptions
{
    double gradient_tol = 1e-10;
    int max_iterations = 500;
    double barrier_initial = 1.0;
    double barrier_shrink = 0.1;
    int multistart_count = 5;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (!(gradient_tol > 0.0) || max_iterations <= 0 || !(barrier_initial > 0.0)
            || !(barrier_shrink > 0.0 && barrier_shrink < 1.0) || multistart_count <= 0)
            throw ValidationError("solver options must be positive (barrier_shrink in (0,1))");
    }
};

/// Distance below which a coordinate or a constraint counts as active.
inline constexpr double boundary_tolerance = 1e-7;

struct ProjectionResult
{
    Vector theta_star;
    Vector s_star;
    double objective = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool boundary_flag = false;
    bool converged = false;
    /// Minimizer reached from each start (or each bracket in one dimension).
    std::vector<Vector> local_minimizers;
    /// Merit values of accepted steps, tagged with their barrier stage.
    std::vector<detail::TracePoint> trace;

    MeasureVector s_star_measure() const { return MeasureVector(s_star); }
};

namespace detail {

inline bool lexicographically_less(const Vector& a, const Vector& b)
{
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
}

inline bool touches_boundary(const ParametricModel& model, const Vector& theta,
                             const Vector& s)
{
    return (s.array() < boundary_tolerance).any()
           || (s.array() > 1.0 - boundary_tolerance).any()
           || (model.slack(theta).array() < boundary_tolerance).any();
}

/// Largest step `alpha` with center + alpha * d still in closure(Theta).
inline double ray_extent(const ParametricModel& model, const Vector& center, const Vector& d)
{
    return max_feasible_step(model.constraint_matrix(), model.slack(center), d) / 0.99;
}

/// Start from the Euclidean projection of t onto the affine hull, pulled
/// toward the interior point until strictly feasible.
inline Vector initial_point(const ParametricModel& model, const Vector& t)
{
    const Vector& center = model.interior_point();
    if (!model.is_affine())
        return center;
    const auto& aff = model.affine_data();
    Vector ls = aff.a.colPivHouseholderQr().solve(t - aff.gamma);
    Vector d = ls - center;
    if (d.norm() == 0.0)
        return center;
    double reach = ray_extent(model, center, d);
    double lambda = std::min(1.0, 0.9 * reach);
    return center + lambda * d;
}

inline Vector random_interior_point(const ParametricModel& model, PhiloxEngine& rng)
{
    std::normal_distribution<double> normal;
    const Vector& center = model.interior_point();
    Vector d(model.k());
    for (Eigen::Index i = 0; i < d.size(); ++i)
        d[i] = normal(rng);
    double reach = ray_extent(model, center, d);
    if (!std::isfinite(reach))
        reach = 1.0;
    double fraction = 0.05 + 0.9 * rng.uniform();
    return center + fraction * reach * d;
}

inline ProjectionResult finish_result(const Divergence& div, const ParametricModel& model,
                                      const Vector& t, Vector theta, int iterations)
{
    ProjectionResult res;
    res.s_star = model.eval(theta);
    auto local = local_objective(div, model, t, theta);
    if (!local)
        throw ConvergenceError("projection ended outside the objective domain");
    res.objective = local->value;
    res.gradient_norm = local->gradient.lpNorm<Eigen::Infinity>();
    res.iterations = iterations;
    res.boundary_flag = touches_boundary(model, theta, res.s_star);
    res.theta_star = std::move(theta);
    return res;
}

/// Safeguarded Newton / bisection for a sign change of h' from - to + in [a, b].
inline double bracketed_minimum(const Divergence& div, const ParametricModel& model,
                                const Vector& t, double a, double b, int& iterations)
{
    auto deriv = [&](double x) {
        auto local = local_objective(div, model, t, Vector::Constant(1, x));
        return std::pair{local->gradient[0], local->hessian(0, 0)};
    };
    double x = 0.5 * (a + b);
    for (int it = 0; it < 400; ++it) {
        ++iterations;
        auto [g, h] = deriv(x);
        if (g == 0.0)
            return x;
        if (g < 0.0)
            a = x;
        else
            b = x;
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            break;
        double next = h > 0.0 ? x - g / h : std::numeric_limits<double>::quiet_NaN();
        // Newton only when it stays inside and shrinks the bracket well
        if (!(next > a && next < b) || std::abs(next - x) > 0.5 * (b - a))
            next = 0.5 * (a + b);
        if (next == x)
            break;
        x = next;
    }
    return x;
}

inline ProjectionResult project_one_dimensional(const Divergence& div,
                                                const ParametricModel& model,
                                                const Vector& t, const SolverOptions& opts)
{
    constexpr double eps = 1e-9;
    const Matrix& lhs = model.constraint_matrix();
    const Vector& rhs = model.constraint_bound();
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < lhs.rows(); ++j) {
        double c = lhs(j, 0);
        if (c > 0.0)
            hi = std::min(hi, rhs[j] / c);
        else if (c < 0.0)
            lo = std::max(lo, rhs[j] / c);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi - lo > 2 * eps))
        throw ValidationError("one-dimensional parameter set is empty or unbounded");
    lo += eps;
    hi -= eps;

    auto gradient_at = [&](double x) -> std::optional<double> {
        auto local = local_objective(div, model, t, Vector::Constant(1, x));
        if (!local)
            return std::nullopt;
        return local->gradient[0];
    };
    // nudge the ends inward until the objective is defined there
    auto g_lo = gradient_at(lo);
    for (int i = 0; !g_lo && i < 40; ++i)
        g_lo = gradient_at(lo += eps * std::pow(2.0, i));
    auto g_hi = gradient_at(hi);
    for (int i = 0; !g_hi && i < 40; ++i)
        g_hi = gradient_at(hi -= eps * std::pow(2.0, i));
    if (!g_lo || !g_hi)
        throw ValidationError("objective undefined on the parameter interval");

    const int cells = std::max(32, 8 * opts.multistart_count);
    std::vector<double> nodes(cells + 1);
    std::vector<double> grads(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        nodes[i] = i == cells ? hi : lo + (hi - lo) * i / cells;
        auto g = gradient_at(nodes[i]);
        if (!g)
            throw ValidationError("objective undefined inside the parameter interval");
        grads[i] = *g;
    }

    int iterations = 0;
    std::vector<Vector> candidates;
    std::vector<Vector> interior;
    for (int i = 0; i < cells; ++i) {
        if (grads[i] < 0.0 && grads[i + 1] >= 0.0) {
            double x = grads[i + 1] == 0.0
                           ? nodes[i + 1]
                           : bracketed_minimum(div, model, t, nodes[i], nodes[i + 1], iterations);
            interior.push_back(Vector::Constant(1, x));
        }
    }
    if (grads.front() >= 0.0)
        candidates.push_back(Vector::Constant(1, lo));
    if (grads.back() <= 0.0)
        candidates.push_back(Vector::Constant(1, hi));
    candidates.insert(candidates.end(), interior.begin(), interior.end());

    std::optional<ProjectionResult> best;
    for (auto& cand : candidates) {
        auto res = finish_result(div, model, t, cand, iterations);
        if (!best || res.objective < best->objective - 1e-12
            || (std::abs(res.objective - best->objective) <= 1e-12
                && lexicographically_less(res.theta_star, best->theta_star)))
            best = std::move(res);
    }
    best->local_minimizers = std::move(interior);
    best->converged = best->boundary_flag || best->gradient_norm <= opts.gradient_tol;
    return *best;
}

}  // namespace detail

/// phi-projection of t onto M = S(Theta): minimizes theta -> D_phi(S(theta) | t).
///
/// k = 1 uses bracketed Newton/bisection over a fixed partition of Theta.
/// Otherwise each of `multistart_count` starts (the first is the Euclidean
/// initial point, the rest are random interior points) runs a log-barrier
/// Newton method; the lowest objective wins, ties going to the
/// lexicographically smallest theta.
inline ProjectionResult project(const Divergence& div, const ParametricModel& model,
                                const Vector& t, const SolverOptions& opts = {})
{
    opts.validate();
    detail::require_target(model, t);
    if (model.k() == 1)
        return detail::project_one_dimensional(div, model, t, opts);

    detail::BarrierSettings settings;
    settings.mu_initial = opts.barrier_initial;
    settings.mu_shrink = opts.barrier_shrink;
    settings.max_iterations = opts.max_iterations;
    settings.gradient_tol = opts.gradient_tol;

    auto objective = [&](const Vector& theta) {
        return detail::local_objective(div, model, t, theta);
    };

    PhiloxEngine rng(opts.seed, 0x5eed);
    std::optional<ProjectionResult> best;
    std::vector<Vector> minimizers;
    for (int start = 0; start < opts.multistart_count; ++start) {
        Vector x0 = start == 0 ? detail::initial_point(model, t)
                               : detail::random_interior_point(model, rng);
        auto outcome = detail::barrier_minimize(objective, model.constraint_matrix(),
                                                model.constraint_bound(), x0, settings);
        auto res = detail::finish_result(div, model, t, outcome.x, outcome.iterations);
        res.converged = outcome.converged
                        || (res.boundary_flag && outcome.iterations < opts.max_iterations);
        res.trace = std::move(outcome.trace);
        minimizers.push_back(res.theta_star);
        if (!best || res.objective < best->objective - 1e-12
            || (std::abs(res.objective - best->objective) <= 1e-12
                && detail::lexicographically_less(res.theta_star, best->theta_star)))
            best = std::move(res);
    }
    best->local_minimizers = std::move(minimizers);
    return *best;
}

struct GridOracleResult
{
    Vector theta;
    double objective = 0.0;
    /// Grid step per coordinate.
    Vector spacing;
    long evaluated = 0;
};

/// Exhaustive search of D_phi(S(theta) | t) over a regular grid on the
/// bounding box of Theta, keeping feasible points (boundary included).
/// Uses only model evaluation and the extended kernel f.
inline GridOracleResult grid_oracle(const Divergence& div, const ParametricModel& model,
                                    const Vector& t, int points_per_dim)
{
    const int k = model.k();
    if (k > 3)
        throw ValidationError("grid_oracle supports k <= 3");
    if (points_per_dim < 10)
        throw ValidationError("grid_oracle requires at least 10 points per dimension");
    if (t.size() != model.m())
        throw ValidationError("grid_oracle: target dimension mismatch");

    Vector lower(k), upper(k);
    for (int j = 0; j < k; ++j) {
        Vector e = Vector::Unit(k, j);
        const Matrix& lhs = model.constraint_matrix();
        const Vector& rhs = model.constraint_bound();
        if (k == 1) {
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            for (Eigen::Index r = 0; r < lhs.rows(); ++r) {
                if (lhs(r, 0) > 0.0)
                    hi = std::min(hi, rhs[r] / lhs(r, 0));
                else if (lhs(r, 0) < 0.0)
                    lo = std::max(lo, rhs[r] / lhs(r, 0));
            }
            lower[0] = lo;
            upper[0] = hi;
        } else {
            upper[j] = detail::maximize_linear(e, lhs, rhs, model.interior_point())[j];
            lower[j] = detail::maximize_linear(-e, lhs, rhs, model.interior_point())[j];
        }
    }

    GridOracleResult out;
    out.spacing = (upper - lower) / (points_per_dim - 1);
    out.objective = std::numeric_limits<double>::infinity();
    std::vector<int> index(k, 0);
    Vector theta(k);
    for (;;) {
        for (int j = 0; j < k; ++j)
            theta[j] = index[j] == points_per_dim - 1 ? upper[j] : lower[j] + index[j] * out.spacing[j];
        if (model.feasible(theta, 1e-12)) {
            Vector s = model.eval(theta);
            if ((s.array() > -1e-12).all()) {
                s = s.cwiseMax(0.0);
                ExtendedReal value = divergence_eval(div, s, t);
                ++out.evaluated;
                if (value.is_finite() && value.value() < out.objective) {
                    out.objective = value.value();
                    out.theta = theta;
                }
            }
        }
        int j = 0;
        while (j < k && ++index[j] == points_per_dim)
            index[j++] = 0;
        if (j == k)
            break;
    }
    if (out.theta.size() == 0)
        throw ValidationError("grid_oracle found no feasible grid point");
    return out;
}

}  // namespace phiproj
