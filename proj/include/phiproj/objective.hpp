#pragma once

#include <optional>
#include <utility>

#include "phiproj/detail/barrier.hpp"
#include "phiproj/divergence.hpp"
#include "phiproj/error.hpp"
#include "phiproj/model.hpp"

namespace phiproj {

namespace detail {

inline void require_target(const ParametricModel& model, const Vector& t)
{
    if (t.size() != model.m())
        throw ValidationError("target has dimension " + std::to_string(t.size())
                              + ", model expects " + std::to_string(model.m()));
    if (!((t.array() > 0.0).all() && (t.array() < 1.0).all()))
        throw BoundaryError("target must lie in (0,1)^m");
}

inline bool open_unit(const Vector& s)
{
    return (s.array() > 0.0).all() && (s.array() < 1.0).all();
}

/// (I_k kron g^T) J2[S]: entry (j, l) = sum_i g_i d^2 S_i / (d theta_j d theta_l).
inline Matrix contract_second_jacobian(const Vector& g, const Matrix& second, int k)
{
    const Eigen::Index m = g.size();
    Matrix out(k, k);
    for (int j = 0; j < k; ++j)
        out.row(j) = g.transpose() * second.middleRows(j * m, m);
    return out;
}

/// Hessian of theta -> D_phi(S(theta) | t) from the first and second
/// derivatives of S and the diagonal data of D_phi(. | t).
inline Matrix composed_hessian(const ParametricModel& model, const Vector& theta,
                               const Matrix& jac, const Vector& grad_first,
                               const Vector& hess_diag)
{
    Matrix h = jac.transpose() * hess_diag.asDiagonal() * jac;
    if (!model.is_affine())
        h += contract_second_jacobian(grad_first, model.second_jacobian(theta), model.k());
    return 0.5 * (h + h.transpose());
}

/// Value, gradient and Hessian of theta -> D_phi(S(theta) | t); nullopt when
/// S(theta) leaves (0,1)^m.
inline std::optional<LocalModel> local_objective(const Divergence& div,
                                                 const ParametricModel& model,
                                                 const Vector& t, const Vector& theta)
{
    Vector s = model.eval(theta);
    if (!open_unit(s))
        return std::nullopt;
    LocalModel out;
    out.value = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        out.value += t[i] * div.phi(s[i] / t[i]);
    Vector g = gradient_first(div, s, t);
    Vector hd = hessian_first_diag(div, s, t);
    Matrix jac = model.jacobian(theta);
    out.gradient = jac.transpose() * g;
    out.hessian = composed_hessian(model, theta, jac, g, hd);
    return out;
}

}  // namespace detail

/// Value and gradient of theta -> D_phi(S(theta) | t) at an interior theta.
inline std::pair<double, Vector> objective_and_gradient(const Divergence& div,
                                                        const ParametricModel& model,
                                                        const Vector& t, const Vector& theta)
{
    detail::require_target(model, t);
    if (!model.strictly_feasible(theta))
        throw BoundaryError("objective_and_gradient: theta is not interior to Theta");
    Vector s = model.eval(theta);
    Vector g = gradient_first(div, s, t);
    double value = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        value += t[i] * div.phi(s[i] / t[i]);
    return {value, model.jacobian(theta).transpose() * g};
}

/// k x k Hessian of theta -> D_phi(S(theta) | t):
/// J^T diag(phi''(S_i/t_i) / t_i) J + (I_k kron (phi'(S_i/t_i))_i^T) J2[S].
/// The second term is dropped for affine models.
inline Matrix objective_hessian(const Divergence& div, const ParametricModel& model,
                                const Vector& t, const Vector& theta)
{
    detail::require_target(model, t);
    if (!model.strictly_feasible(theta))
        throw BoundaryError("objective_hessian: theta is not interior to Theta");
    Vector s = model.eval(theta);
    Vector g = gradient_first(div, s, t);
    Vector hd = hessian_first_diag(div, s, t);
    return detail::composed_hessian(model, theta, model.jacobian(theta), g, hd);
}

}  // namespace phiproj
