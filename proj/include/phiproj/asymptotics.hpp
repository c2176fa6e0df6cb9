#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "phiproj/divergence.hpp"
#include "phiproj/error.hpp"
#include "phiproj/model.hpp"
#include "phiproj/objective.hpp"
#include "phiproj/projection.hpp"

namespace phiproj {

/// Relative threshold on the Hessian spectrum: lambda_min must exceed
/// invertibility_relative * lambda_max ...
inline constexpr double invertibility_relative = 1e-10;
/// ... and the absolute floor below (the relative test alone is vacuous for k = 1).
inline constexpr double invertibility_absolute = 1e-8;

struct HessianSpectrum
{
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    bool positive_definite = false;
};

inline HessianSpectrum hessian_spectrum(const Matrix& h)
{
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
    HessianSpectrum out;
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    out.max_eigenvalue = eig.eigenvalues().maxCoeff();
    out.positive_definite = out.min_eigenvalue > invertibility_relative * out.max_eigenvalue
                            && out.min_eigenvalue > invertibility_absolute;
    return out;
}

struct AsymptoticResult
{
    Vector theta_star;
    Vector s_star;
    Matrix hessian;
    Vector delta;
    Matrix jac_theta;
    Matrix jac_projection;
    Matrix sigma_q0;
    Matrix sigma;
};

/// Diagonal of Delta(t0): (S_i / t0_i^2) phi''(S_i / t0_i) at theta*.
inline Vector delta_matrix_diag(const Divergence& div, const ParametricModel& model,
                                const Vector& t0, const Vector& theta_star)
{
    detail::require_target(model, t0);
    if (!model.strictly_feasible(theta_star))
        throw BoundaryError("delta_matrix_diag: theta* is not interior");
    Vector s = model.eval(theta_star);
    Vector hd = hessian_first_diag(div, s, t0);  // phi''(s_i/t_i) / t_i
    return s.cwiseProduct(hd).cwiseQuotient(t0);
}

/// J[theta*](t0) = H^{-1} J[S](theta*)^T Delta(t0), solved through a Cholesky
/// factorization of the objective Hessian H.  For affine models H reduces to
/// A^T diag(phi''(S_i/t_i)/t_i) A.
inline Matrix jacobian_theta(const Divergence& div, const ParametricModel& model,
                             const Vector& t0, const Vector& theta_star)
{
    Matrix h = objective_hessian(div, model, t0, theta_star);
    auto spectrum = hessian_spectrum(h);
    Eigen::LLT<Matrix> llt(h);
    if (!spectrum.positive_definite || llt.info() != Eigen::Success)
        throw ConditionViolation(10, "Hessian of the projection objective is not positive "
                                     "definite at theta* (min eigenvalue "
                                     + format_number(spectrum.min_eigenvalue) + ")");
    Vector delta = delta_matrix_diag(div, model, t0, theta_star);
    Matrix rhs = model.jacobian(theta_star).transpose() * delta.asDiagonal();
    return llt.solve(rhs);
}

/// J[S*](t0) = J[S](theta*) J[theta*](t0).
inline Matrix jacobian_projection(const Divergence& div, const ParametricModel& model,
                                  const Vector& t0, const Vector& theta_star)
{
    return model.jacobian(theta_star) * jacobian_theta(div, model, t0, theta_star);
}

/// diag(q0) - q0 q0^T, the covariance of one categorical draw.
inline Matrix multinomial_covariance(const Vector& q0)
{
    ProbabilityVector check(q0);
    Matrix sigma = -q0 * q0.transpose();
    sigma.diagonal() += q0;
    return sigma;
}

/// Projects q0, then evaluates every Jacobian and the delta-method
/// covariance J[S*](q0) Sigma_q0 J[S*](q0)^T.
inline AsymptoticResult asymptotic_covariance(const Divergence& div,
                                              const ParametricModel& model,
                                              const Vector& q0, const SolverOptions& opts = {})
{
    Matrix sigma_q0 = multinomial_covariance(q0);
    auto proj = project(div, model, q0, opts);
    if (!proj.converged)
        throw ConvergenceError("projection did not converge (gradient norm "
                               + format_number(proj.gradient_norm) + ")");
    if (proj.boundary_flag) {
        if ((proj.s_star.array() < boundary_tolerance).any()
            || (proj.s_star.array() > 1.0 - boundary_tolerance).any())
            throw ConditionViolation(12, "projection leaves (0,1)^m");
        throw ConditionViolation(9, "minimizer lies on the boundary of Theta");
    }

    AsymptoticResult out;
    out.theta_star = proj.theta_star;
    out.s_star = proj.s_star;
    out.hessian = objective_hessian(div, model, q0, proj.theta_star);
    out.delta = delta_matrix_diag(div, model, q0, proj.theta_star);
    out.jac_theta = jacobian_theta(div, model, q0, proj.theta_star);
    out.jac_projection = model.jacobian(proj.theta_star) * out.jac_theta;
    out.sigma_q0 = sigma_q0;
    Matrix sigma = out.jac_projection * sigma_q0 * out.jac_projection.transpose();
    out.sigma = 0.5 * (sigma + sigma.transpose());
    return out;
}

}  // namespace phiproj
