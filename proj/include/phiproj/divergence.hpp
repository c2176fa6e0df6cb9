#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phiproj/error.hpp"
#include "phiproj/extended_real.hpp"
#include "phiproj/measure.hpp"

namespace phiproj {

using ScalarFn = std::function<double(double)>;

/// Convex generator phi of a phi-divergence together with the derivative
/// data and limits the projection machinery needs.
///
/// `phi`, `phi_prime` and `phi_second` are only ever called on (0, inf).
/// Boundary behaviour is carried by the stored limits: `phi_at_zero` is the
/// right limit phi(0+), `slope_at_infinity` is lim phi(x)/x as x -> inf and
/// `phi_prime_limit_at_zero` is lim phi'(x) as x -> 0+ (may be -inf).
struct Divergence
{
    std::string name;
    ScalarFn phi;
    ScalarFn phi_prime;
    ScalarFn phi_second;
    ExtendedReal phi_at_zero;
    ExtendedReal slope_at_infinity;
    double phi_prime_limit_at_zero = 0.0;
    /// w -> kappa_phi(w), the strong convexity constant of phi on [0, 1/w].
    std::optional<ScalarFn> kappa;
    std::optional<double> alpha;

    bool has_kappa() const { return kappa.has_value(); }
    double kappa_at(double w) const
    {
        if (!kappa)
            throw ValidationError("divergence '" + name
                                  + "' has no strong convexity constant");
        return (*kappa)(w);
    }
};

/// Names accepted by builtin_divergence().
inline const std::vector<std::string>& builtin_divergence_names()
{
    static const std::vector<std::string> names = {
        "kullback_leibler", "pearson_chi2",  "squared_hellinger",
        "reverse_relative_entropy", "vincze_le_cam", "jensen_shannon",
        "neyman_chi2", "alpha_divergence"};
    return names;
}

/// One of the eight classical divergences with a known strong convexity
/// constant.  `alpha` must be given for, and only for, "alpha_divergence".
inline Divergence builtin_divergence(const std::string& name,
                                     std::optional<double> alpha = std::nullopt)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (alpha && name != "alpha_divergence")
        throw ValidationError("alpha given for divergence '" + name + "'");

    Divergence d;
    d.name = name;
    if (name == "kullback_leibler") {
        d.phi = [](double x) { return x * std::log(x); };
        d.phi_prime = [](double x) { return std::log(x) + 1.0; };
        d.phi_second = [](double x) { return 1.0 / x; };
        d.phi_at_zero = 0.0;
        d.slope_at_infinity = ExtendedReal::infinity();
        d.phi_prime_limit_at_zero = -inf;
        d.kappa = [](double w) { return w; };
    } else if (name == "pearson_chi2") {
        d.phi = [](double x) { return (x - 1.0) * (x - 1.0); };
        d.phi_prime = [](double x) { return 2.0 * (x - 1.0); };
        d.phi_second = [](double) { return 2.0; };
        d.phi_at_zero = 1.0;
        d.slope_at_infinity = ExtendedReal::infinity();
        d.phi_prime_limit_at_zero = -2.0;
        d.kappa = [](double) { return 2.0; };
    } else if (name == "squared_hellinger") {
        d.phi = [](double x) { return 2.0 * (1.0 - std::sqrt(x)); };
        d.phi_prime = [](double x) { return -1.0 / std::sqrt(x); };
        d.phi_second = [](double x) { return 0.5 / (x * std::sqrt(x)); };
        d.phi_at_zero = 2.0;
        d.slope_at_infinity = 0.0;
        d.phi_prime_limit_at_zero = -inf;
        d.kappa = [](double w) { return 0.5 * w * std::sqrt(w); };
    } else if (name == "reverse_relative_entropy") {
        d.phi = [](double x) { return -std::log(x); };
        d.phi_prime = [](double x) { return -1.0 / x; };
        d.phi_second = [](double x) { return 1.0 / (x * x); };
        d.phi_at_zero = ExtendedReal::infinity();
        d.slope_at_infinity = 0.0;
        d.phi_prime_limit_at_zero = -inf;
        d.kappa = [](double w) { return w * w; };
    } else if (name == "vincze_le_cam") {
        d.phi = [](double x) { return (x - 1.0) * (x - 1.0) / (x + 1.0); };
        d.phi_prime = [](double x) { return 1.0 - 4.0 / ((x + 1.0) * (x + 1.0)); };
        d.phi_second = [](double x) { return 8.0 / std::pow(x + 1.0, 3); };
        d.phi_at_zero = 1.0;
        d.slope_at_infinity = 1.0;
        d.phi_prime_limit_at_zero = -3.0;
        d.kappa = [](double w) { return 8.0 / std::pow(1.0 / w + 1.0, 3); };
    } else if (name == "jensen_shannon") {
        d.phi = [](double x) {
            return (x + 1.0) * std::log(2.0 / (x + 1.0)) + x * std::log(x);
        };
        d.phi_prime = [](double x) { return std::log(2.0 * x / (x + 1.0)); };
        d.phi_second = [](double x) { return 1.0 / (x * (x + 1.0)); };
        d.phi_at_zero = std::log(2.0);
        d.slope_at_infinity = std::log(2.0);
        d.phi_prime_limit_at_zero = -inf;
        d.kappa = [](double w) { return w * w / (w + 1.0); };
    } else if (name == "neyman_chi2") {
        d.phi = [](double x) { return 1.0 / x - 1.0; };
        d.phi_prime = [](double x) { return -1.0 / (x * x); };
        d.phi_second = [](double x) { return 2.0 / (x * x * x); };
        d.phi_at_zero = ExtendedReal::infinity();
        d.slope_at_infinity = 0.0;
        d.phi_prime_limit_at_zero = -inf;
        d.kappa = [](double w) { return 2.0 * w * w * w; };
    } else if (name == "alpha_divergence") {
        if (!alpha)
            throw ValidationError("alpha_divergence requires alpha");
        double a = *alpha;
        if (!std::isfinite(a) || a == 1.0 || a == -1.0 || a >= 3.0)
            throw ValidationError("alpha_divergence requires alpha < 3, alpha != +-1");
        double power = 0.5 * (1.0 + a);
        double c = 4.0 / (1.0 - a * a);
        d.alpha = a;
        d.phi = [=](double x) { return c * (1.0 - std::pow(x, power)); };
        d.phi_prime = [=](double x) { return -c * power * std::pow(x, power - 1.0); };
        d.phi_second = [=](double x) { return std::pow(x, 0.5 * (a - 3.0)); };
        // power > 0 iff a > -1
        d.phi_at_zero = a > -1.0 ? ExtendedReal(c) : ExtendedReal::infinity();
        d.slope_at_infinity = a < 1.0 ? ExtendedReal(0.0) : ExtendedReal::infinity();
        d.phi_prime_limit_at_zero = a < 1.0 ? -inf : 0.0;
        d.kappa = [=](double w) { return std::pow(w, 0.5 * (3.0 - a)); };
    } else {
        throw ValidationError("unknown divergence '" + name + "'");
    }
    return d;
}

/// User-supplied generator.  No strong convexity constant unless given.
inline Divergence custom_divergence(std::string name, ScalarFn phi, ScalarFn phi_prime,
                                    ScalarFn phi_second, double phi_at_zero,
                                    ExtendedReal slope_at_infinity,
                                    double phi_prime_limit_at_zero,
                                    std::optional<ScalarFn> kappa = std::nullopt)
{
    if (!phi || !phi_prime || !phi_second)
        throw ValidationError("custom divergence needs phi, phi' and phi''");
    if (!std::isfinite(phi_at_zero))
        throw ValidationError("custom divergence needs a finite phi(0+)");
    Divergence d;
    d.name = std::move(name);
    d.phi = std::move(phi);
    d.phi_prime = std::move(phi_prime);
    d.phi_second = std::move(phi_second);
    d.phi_at_zero = phi_at_zero;
    d.slope_at_infinity = slope_at_infinity;
    d.phi_prime_limit_at_zero = phi_prime_limit_at_zero;
    d.kappa = std::move(kappa);
    return d;
}

/// phi(x) = (x - 1)^p for an even integer p >= 2.  p = 2 is Pearson's chi2;
/// p = 4 is strictly but not strongly convex around 1.
inline Divergence centered_power_divergence(int exponent)
{
    if (exponent < 2 || exponent % 2 != 0)
        throw ValidationError("centered_power exponent must be an even integer >= 2");
    double p = exponent;
    std::optional<ScalarFn> kappa;
    if (exponent == 2)
        kappa = [](double) { return 2.0; };
    return custom_divergence(
        "centered_power_" + std::to_string(exponent),
        [p](double x) { return std::pow(x - 1.0, p); },
        [p](double x) { return p * std::pow(x - 1.0, p - 1.0); },
        [p](double x) { return p * (p - 1.0) * std::pow(x - 1.0, p - 2.0); }, 1.0,
        ExtendedReal::infinity(), -p, kappa);
}

/// Kernel f(v, w) = w phi(v/w) extended to w = 0 by its limits.
inline ExtendedReal f_eval(const Divergence& div, double v, double w)
{
    if (!(v >= 0.0) || !(w >= 0.0))
        throw ValidationError("f_eval requires nonnegative arguments");
    if (w > 0.0) {
        if (v == 0.0)
            return scale(w, div.phi_at_zero);
        return ExtendedReal(w * div.phi(v / w));
    }
    if (v > 0.0)
        return scale(v, div.slope_at_infinity);
    return ExtendedReal(0.0);
}

/// D_phi(s | t) = sum_i f(s_i, t_i).
inline ExtendedReal divergence_eval(const Divergence& div, const Vector& s,
                                    const Vector& t)
{
    if (s.size() != t.size())
        throw ValidationError("divergence_eval: dimension mismatch");
    ExtendedReal total(0.0);
    for (Eigen::Index i = 0; i < s.size(); ++i)
        total += f_eval(div, s[i], t[i]);
    return total;
}

namespace detail {

inline void require_open_unit(const Vector& s, const Vector& t, const char* where)
{
    if (s.size() != t.size())
        throw ValidationError(std::string(where) + ": dimension mismatch");
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0 && s[i] < 1.0) || !(t[i] > 0.0 && t[i] < 1.0))
            throw BoundaryError(std::string(where) + ": coordinate " + std::to_string(i)
                                + " not in (0,1)");
    }
}

}  // namespace detail

/// Gradient of s -> D_phi(s | t): component i is phi'(s_i / t_i).
inline Vector gradient_first(const Divergence& div, const Vector& s, const Vector& t)
{
    detail::require_open_unit(s, t, "gradient_first");
    Vector g(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        g[i] = div.phi_prime(s[i] / t[i]);
    return g;
}

/// Diagonal of the Hessian of s -> D_phi(s | t): phi''(s_i / t_i) / t_i.
inline Vector hessian_first_diag(const Divergence& div, const Vector& s, const Vector& t)
{
    detail::require_open_unit(s, t, "hessian_first_diag");
    Vector h(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        h[i] = div.phi_second(s[i] / t[i]) / t[i];
    return h;
}

}  // namespace phiproj
