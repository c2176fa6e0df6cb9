#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phiproj/asymptotics.hpp"
#include "phiproj/divergence.hpp"
#include "phiproj/error.hpp"
#include "phiproj/model.hpp"
#include "phiproj/objective.hpp"
#include "phiproj/projection.hpp"
#include "phiproj/rng.hpp"

namespace phiproj {

// ---- strong convexity ---------------------------------------------------

struct ConvexityEntry
{
    double w = 0.0;
    double min_phi_second = 0.0;
    std::optional<double> kappa;
    bool pass = false;
};

struct ConvexityReport
{
    std::vector<ConvexityEntry> entries;
    bool pass = false;
};

/// For each w, the smallest phi'' over a log-uniform grid on (1e-8, 1/w]
/// against kappa(w).  Without a stored kappa there is no certificate and the
/// entry fails; the grid minimum is still reported.
inline ConvexityReport check_strong_convexity(const Divergence& div,
                                              const std::vector<double>& w_values,
                                              int grid_size = 10000)
{
    if (grid_size < 2)
        throw ValidationError("check_strong_convexity needs grid_size >= 2");
    ConvexityReport rep;
    rep.pass = !w_values.empty();
    for (double w : w_values) {
        if (!(w > 0.0))
            throw ValidationError("check_strong_convexity needs w > 0");
        ConvexityEntry e;
        e.w = w;
        const double lo = std::log(1e-8);
        const double hi = std::log(1.0 / w);
        e.min_phi_second = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= grid_size; ++i) {
            double x = i == grid_size ? 1.0 / w : std::exp(lo + (hi - lo) * i / grid_size);
            e.min_phi_second = std::min(e.min_phi_second, div.phi_second(x));
        }
        if (div.has_kappa()) {
            e.kappa = div.kappa_at(w);
            e.pass = *e.kappa > 0.0 && e.min_phi_second >= *e.kappa * (1.0 - 1e-9);
        }
        rep.pass = rep.pass && e.pass;
        rep.entries.push_back(e);
    }
    return rep;
}

// ---- invertibility and support -----------------------------------------

struct InvertibilityReport
{
    Vector theta_star;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    bool pass = false;
};

/// Spectrum of the objective Hessian at the projection of t0.
inline InvertibilityReport check_invertibility(const Divergence& div,
                                               const ParametricModel& model, const Vector& t0,
                                               const SolverOptions& opts = {})
{
    auto proj = project(div, model, t0, opts);
    if (!proj.converged)
        throw ConvergenceError("projection did not converge (gradient norm "
                               + format_number(proj.gradient_norm) + ")");
    if (!model.strictly_feasible(proj.theta_star))
        throw ConditionViolation(9, "minimizer lies on the boundary of Theta");
    auto spectrum = hessian_spectrum(objective_hessian(div, model, t0, proj.theta_star));
    InvertibilityReport rep;
    rep.theta_star = proj.theta_star;
    rep.min_eigenvalue = spectrum.min_eigenvalue;
    rep.max_eigenvalue = spectrum.max_eigenvalue;
    rep.pass = spectrum.positive_definite;
    return rep;
}

inline constexpr double support_margin = 1e-9;

inline bool check_support(const ProjectionResult& result)
{
    return result.s_star.size() > 0 && (result.s_star.array() > support_margin).all()
           && (result.s_star.array() < 1.0 - support_margin).all();
}

enum class SupportGuarantee { guaranteed, must_check };

inline const char* to_string(SupportGuarantee g)
{
    return g == SupportGuarantee::guaranteed ? "guaranteed" : "must_check";
}

/// Interior projections are automatic when phi'(0+) = -inf, S is affine,
/// Theta is cut out by linear inequalities (always the case here) and the
/// model consists of probability vectors.
inline SupportGuarantee classify_support_guarantee(const Divergence& div,
                                                   const ParametricModel& model)
{
    bool steep = std::isinf(div.phi_prime_limit_at_zero) && div.phi_prime_limit_at_zero < 0.0;
    if (steep && model.is_affine() && model.is_probability_model())
        return SupportGuarantee::guaranteed;
    return SupportGuarantee::must_check;
}

// ---- uniqueness sweep ----------------------------------------------------

struct SweepPerturbation
{
    Vector t;
    Vector theta_star;
    double objective = 0.0;
    /// Largest distance between any two local minimizers found.
    double dispersion = 0.0;
    int minimizer_count = 0;
    bool unique = false;
};

struct ProfilePoint
{
    int perturbation = 0;
    Vector theta;
    double objective = 0.0;
};

struct SweepReport
{
    std::vector<SweepPerturbation> perturbations;
    /// Objective on a grid over Theta, per perturbation (k <= 2 only).
    std::vector<ProfilePoint> profiles;
    double max_dispersion = 0.0;
    bool unique = false;
};

inline constexpr double uniqueness_tolerance = 1e-6;

namespace detail {

inline Vector perturb_target(const Vector& t0, double sd, PhiloxEngine& rng)
{
    std::normal_distribution<double> normal(0.0, sd);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Vector t(t0.size());
        for (Eigen::Index i = 0; i < t.size(); ++i)
            t[i] = t0[i] + normal(rng);
        if ((t.array() > 0.0).all() && (t.array() < 1.0).all())
            return t;
    }
    throw ValidationError("could not draw a perturbation inside (0,1)^m");
}

inline std::vector<ProfilePoint> objective_profile(const Divergence& div,
                                                   const ParametricModel& model,
                                                   const Vector& t, int index, int points)
{
    const int k = model.k();
    const Matrix& lhs = model.constraint_matrix();
    const Vector& rhs = model.constraint_bound();
    Vector lower(k), upper(k);
    for (int j = 0; j < k; ++j) {
        Vector e = Vector::Unit(k, j);
        upper[j] = maximize_linear(e, lhs, rhs, model.interior_point())[j];
        lower[j] = maximize_linear(-e, lhs, rhs, model.interior_point())[j];
    }
    std::vector<ProfilePoint> out;
    std::vector<int> idx(k, 0);
    for (;;) {
        Vector theta(k);
        for (int j = 0; j < k; ++j)
            theta[j] = lower[j] + (upper[j] - lower[j]) * idx[j] / (points - 1);
        if (model.strictly_feasible(theta)) {
            auto local = local_objective(div, model, t, theta);
            if (local)
                out.push_back({index, theta, local->value});
        }
        int j = 0;
        while (j < k && ++idx[j] == points)
            idx[j++] = 0;
        if (j == k)
            break;
    }
    return out;
}

}  // namespace detail

/// Projects `num_perturbations` noisy copies of t0 (normal noise, resampled
/// until inside (0,1)^m) with multistart and reports how far apart the local
/// minimizers of each run are.  For k <= 2 the objective is also tabulated
/// on a grid over Theta for plotting.
inline SweepReport uniqueness_sweep(const Divergence& div, const ParametricModel& model,
                                    const Vector& t0, int num_perturbations = 10,
                                    double noise_sd = 0.01, std::uint64_t seed = 0,
                                    const SolverOptions& opts = {}, int profile_points = 101)
{
    detail::require_target(model, t0);
    if (num_perturbations < 1 || !(noise_sd >= 0.0) || profile_points < 2)
        throw ValidationError("uniqueness_sweep: bad sweep settings");
    SweepReport rep;
    rep.unique = true;
    for (int p = 0; p < num_perturbations; ++p) {
        PhiloxEngine rng(seed, 0x5ee900000000ull + static_cast<std::uint64_t>(p));
        SweepPerturbation item;
        item.t = detail::perturb_target(t0, noise_sd, rng);
        auto res = project(div, model, item.t, opts);
        item.theta_star = res.theta_star;
        item.objective = res.objective;
        std::vector<Vector> mins = res.local_minimizers;
        mins.push_back(res.theta_star);
        for (size_t i = 0; i < mins.size(); ++i)
            for (size_t j = i + 1; j < mins.size(); ++j)
                item.dispersion = std::max(item.dispersion, (mins[i] - mins[j]).norm());
        item.minimizer_count = static_cast<int>(res.local_minimizers.size());
        item.unique = item.dispersion <= uniqueness_tolerance;
        rep.max_dispersion = std::max(rep.max_dispersion, item.dispersion);
        rep.unique = rep.unique && item.unique;
        if (model.k() <= 2) {
            auto prof = detail::objective_profile(div, model, item.t, p, profile_points);
            rep.profiles.insert(rep.profiles.end(), prof.begin(), prof.end());
        }
        rep.perturbations.push_back(std::move(item));
    }
    return rep;
}

}  // namespace phiproj
