#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "phiproj/detail/barrier.hpp"
#include "phiproj/error.hpp"
#include "phiproj/linalg.hpp"
#include "phiproj/measure.hpp"

namespace phiproj {

/// Affine parametrization S(theta) = A theta + gamma.
struct AffineData
{
    Matrix a;
    Vector gamma;
};

/// Model set M = S(closure of Theta) with
/// Theta = {theta in R^k : L theta < u}.
///
/// `second_jacobian(theta)` is the (m k) x k Jacobian of the column-major
/// vectorization of `jacobian(theta)`: entry (i + j m, l) is
/// d^2 S_i / (d theta_j d theta_l).
class ParametricModel
{
  public:
    using EvalFn = std::function<Vector(const Vector&)>;
    using JacobianFn = std::function<Matrix(const Vector&)>;

    struct Parts
    {
        std::string kind;
        int k = 0;
        int m = 0;
        EvalFn eval;
        JacobianFn jacobian;
        JacobianFn second_jacobian;
        Matrix constraint_matrix;
        Vector constraint_bound;
        Vector interior_point;
        std::optional<AffineData> affine;
        bool probability_model = false;
    };

    explicit ParametricModel(Parts parts) : p_(std::move(parts))
    {
        if (p_.k <= 0 || p_.m <= 0 || p_.k >= p_.m)
            throw ValidationError("model requires 0 < k < m");
        if (p_.constraint_matrix.cols() != p_.k
            || p_.constraint_matrix.rows() != p_.constraint_bound.size())
            throw ValidationError("model constraint system has wrong shape");
        if (p_.interior_point.size() != p_.k || !strictly_feasible(p_.interior_point))
            throw ValidationError("model interior point is not strictly feasible");
        Vector s = eval(p_.interior_point);
        if (!((s.array() > 0.0).all() && (s.array() < 1.0).all()))
            throw ValidationError("model maps its interior point outside (0,1)^m");
        if (p_.affine) {
            const auto& aff = *p_.affine;
            if (aff.a.rows() != p_.m || aff.a.cols() != p_.k || aff.gamma.size() != p_.m)
                throw ValidationError("affine data has wrong shape");
        }
    }

    const std::string& kind() const { return p_.kind; }
    int k() const { return p_.k; }
    int m() const { return p_.m; }
    bool is_affine() const { return p_.affine.has_value(); }
    const AffineData& affine_data() const
    {
        if (!p_.affine)
            throw ValidationError("model '" + p_.kind + "' is not affine");
        return *p_.affine;
    }
    /// Every member of M sums to one.
    bool is_probability_model() const { return p_.probability_model; }

    const Matrix& constraint_matrix() const { return p_.constraint_matrix; }
    const Vector& constraint_bound() const { return p_.constraint_bound; }
    const Vector& interior_point() const { return p_.interior_point; }

    Vector eval(const Vector& theta) const
    {
        check_dim(theta);
        return p_.eval(theta);
    }
    Matrix jacobian(const Vector& theta) const
    {
        check_dim(theta);
        return p_.jacobian(theta);
    }
    Matrix second_jacobian(const Vector& theta) const
    {
        check_dim(theta);
        if (p_.affine)
            return Matrix::Zero(static_cast<Eigen::Index>(p_.m) * p_.k, p_.k);
        return p_.second_jacobian(theta);
    }

    /// u - L theta.
    Vector slack(const Vector& theta) const
    {
        check_dim(theta);
        return p_.constraint_bound - p_.constraint_matrix * theta;
    }
    bool strictly_feasible(const Vector& theta, double margin = 0.0) const
    {
        return (slack(theta).array() > margin).all();
    }
    bool feasible(const Vector& theta, double tol = 1e-12) const
    {
        return (slack(theta).array() >= -tol).all();
    }

  private:
    void check_dim(const Vector& theta) const
    {
        if (theta.size() != p_.k)
            throw ValidationError("parameter has dimension " + std::to_string(theta.size())
                                  + ", model expects " + std::to_string(p_.k));
    }

    Parts p_;
};

namespace detail {

/// Binomial(l, theta) pmf, length l + 1.
inline Vector binomial_pmf(int l, double theta)
{
    Vector p(l + 1);
    double coef = 1.0;
    for (int i = 0; i <= l; ++i) {
        p[i] = coef * std::pow(theta, i) * std::pow(1.0 - theta, l - i);
        coef = coef * (l - i) / (i + 1);
    }
    return p;
}

/// order-th derivative in theta of the Binomial(l, theta) pmf via
/// p^{(r)}_{l,i} = l [ p^{(r-1)}_{l-1,i-1} - p^{(r-1)}_{l-1,i} ].
inline Vector binomial_pmf_derivative(int l, double theta, int order)
{
    if (order == 0)
        return binomial_pmf(l, theta);
    if (l == 0)
        return Vector::Zero(1);
    Vector lower = binomial_pmf_derivative(l - 1, theta, order - 1);
    Vector out(l + 1);
    for (int i = 0; i <= l; ++i) {
        double left = i >= 1 ? lower[i - 1] : 0.0;
        double right = i <= l - 1 ? lower[i] : 0.0;
        out[i] = l * (left - right);
    }
    return out;
}

inline bool sums_to_one(const AffineData& aff)
{
    Vector col_sums = aff.a.colwise().sum().transpose();
    return col_sums.lpNorm<Eigen::Infinity>() < 1e-10 && std::abs(aff.gamma.sum() - 1.0) < 1e-10;
}

/// Theta = {theta : 0 <= A theta + gamma <= 1} as L theta <= u.
inline std::pair<Matrix, Vector> unit_box_constraints(const AffineData& aff)
{
    const Eigen::Index m = aff.a.rows();
    Matrix lhs(2 * m, aff.a.cols());
    lhs.topRows(m) = aff.a;
    lhs.bottomRows(m) = -aff.a;
    Vector rhs(2 * m);
    rhs.head(m) = Vector::Ones(m) - aff.gamma;
    rhs.tail(m) = aff.gamma;
    return {lhs, rhs};
}

inline ParametricModel make_affine(std::string kind, AffineData aff,
                                   std::optional<Vector> interior)
{
    auto [lhs, rhs] = unit_box_constraints(aff);
    const int m = static_cast<int>(aff.a.rows());
    const int k = static_cast<int>(aff.a.cols());
    if (numerical_rank(aff.a) < k)
        throw ValidationError(kind + ": affine map is not injective");
    Vector start;
    if (interior && (rhs - lhs * *interior).minCoeff() > 0.0) {
        start = *interior;
    } else {
        Vector hint = aff.a.colPivHouseholderQr().solve(Vector::Constant(m, 1.0 / m) - aff.gamma);
        auto found = find_interior_point(lhs, rhs, hint);
        if (!found)
            throw ValidationError(kind + ": model set has no point in (0,1)^m");
        start = *found;
    }
    ParametricModel::Parts parts;
    parts.kind = std::move(kind);
    parts.k = k;
    parts.m = m;
    parts.probability_model = sums_to_one(aff);
    parts.eval = [a = aff.a, g = aff.gamma](const Vector& th) -> Vector { return a * th + g; };
    parts.jacobian = [a = aff.a](const Vector&) -> Matrix { return a; };
    parts.second_jacobian = [m, k](const Vector&) -> Matrix {
        return Matrix::Zero(static_cast<Eigen::Index>(m) * k, k);
    };
    parts.constraint_matrix = std::move(lhs);
    parts.constraint_bound = std::move(rhs);
    parts.interior_point = std::move(start);
    parts.affine = std::move(aff);
    return ParametricModel(std::move(parts));
}

}  // namespace detail

/// Binomial(m - 1, theta) probability vectors, theta in [0, 1].
inline ParametricModel binomial_model(int m)
{
    if (m < 2)
        throw ValidationError("binomial_model requires m >= 2");
    const int l = m - 1;
    ParametricModel::Parts parts;
    parts.kind = "binomial";
    parts.k = 1;
    parts.m = m;
    parts.probability_model = true;
    parts.eval = [l](const Vector& th) { return detail::binomial_pmf(l, th[0]); };
    parts.jacobian = [l](const Vector& th) -> Matrix {
        return detail::binomial_pmf_derivative(l, th[0], 1);
    };
    parts.second_jacobian = [l](const Vector& th) -> Matrix {
        return detail::binomial_pmf_derivative(l, th[0], 2);
    };
    parts.constraint_matrix = (Matrix(2, 1) << 1.0, -1.0).finished();
    parts.constraint_bound = (Vector(2) << 1.0, 0.0).finished();
    parts.interior_point = Vector::Constant(1, 0.5);
    return ParametricModel(std::move(parts));
}

/// General affine model S(theta) = A theta + gamma on
/// Theta = {theta : 0 <= A theta + gamma <= 1}.
inline ParametricModel affine_model(const Matrix& a, const Vector& gamma,
                                    std::optional<Vector> interior = std::nullopt)
{
    if (a.rows() != gamma.size())
        throw ValidationError("affine_model: A and gamma disagree in m");
    return detail::make_affine("affine", AffineData{a, gamma}, std::move(interior));
}

/// Probability vectors on the support points `x` whose raw moments of order
/// 0..r equal `mu` (mu_0 = 1).  The parameter is the vector of raw moments of
/// orders r+1..m-1.  `reference_pmf`, when given, must lie in M and supplies
/// the interior point; otherwise one is found by a feasibility phase.
inline ParametricModel moment_model(const Vector& x, const Vector& mu,
                                    std::optional<Vector> reference_pmf = std::nullopt)
{
    const Eigen::Index m = x.size();
    const Eigen::Index r = mu.size() - 1;
    if (r < 1 || r >= m - 1)
        throw ValidationError("moment_model requires 1 <= r < m - 1");
    if (std::abs(mu[0] - 1.0) > 1e-12)
        throw ValidationError("moment_model requires mu_0 = 1");
    std::set<double> distinct(x.data(), x.data() + m);
    if (static_cast<Eigen::Index>(distinct.size()) != m)
        throw ValidationError("moment_model requires pairwise distinct support points");

    Matrix u = vandermonde(x);
    auto lu = checked_lu(u, 1e12, "moment_model Vandermonde system");
    const Eigen::Index k = m - r - 1;
    Matrix tail_identity = Matrix::Identity(m, m).rightCols(k);
    Matrix w = lu.solve(tail_identity);
    Vector head = Vector::Zero(m);
    head.head(r + 1) = mu;
    Vector gamma = lu.solve(head);

    std::optional<Vector> interior;
    if (reference_pmf) {
        if (reference_pmf->size() != m)
            throw ValidationError("moment_model: reference pmf has wrong size");
        Vector moments = u * *reference_pmf;
        if ((moments.head(r + 1) - mu).lpNorm<Eigen::Infinity>() > 1e-10)
            throw ValidationError("moment_model: reference pmf violates the moment constraints");
        interior = moments.tail(k);
    }
    return detail::make_affine("moment", AffineData{w, gamma}, interior);
}

/// Bivariate r x s probability arrays with margins a (rows) and b (columns).
struct FrechetSpec
{
    Vector a;
    Vector b;

    Eigen::Index r() const { return a.size(); }
    Eigen::Index s() const { return b.size(); }
};

/// Frechet class parametrized by the column-major vectorization of the
/// upper-left (r-1) x (s-1) block.
inline ParametricModel frechet_model(const FrechetSpec& spec)
{
    const Eigen::Index r = spec.r();
    const Eigen::Index s = spec.s();
    if (r < 2 || s < 2)
        throw ValidationError("frechet_model requires r, s >= 2");
    for (const Vector* margin : {&spec.a, &spec.b})
        if (!((margin->array() > 0.0).all() && (margin->array() < 1.0).all()))
            throw ValidationError("frechet_model margins must lie in (0,1)");
    if (std::abs(spec.a.sum() - 1.0) > 1e-12 || std::abs(spec.b.sum() - 1.0) > 1e-12)
        throw ValidationError("frechet_model margins must sum to one");

    // Q = [I_{r-1}; -1^T]
    Matrix q(r, r - 1);
    q.topRows(r - 1).setIdentity();
    q.row(r - 1).setConstant(-1.0);
    const Eigen::Index k = (r - 1) * (s - 1);
    Matrix a = Matrix::Zero(r * s, k);
    for (Eigen::Index j = 0; j + 1 < s; ++j) {
        a.block(j * r, j * (r - 1), r, r - 1) = q;
        a.block((s - 1) * r, j * (r - 1), r, r - 1) = -q;
    }
    Matrix base = Matrix::Zero(r, s);
    for (Eigen::Index i = 0; i + 1 < r; ++i)
        base(i, s - 1) = spec.a[i];
    for (Eigen::Index j = 0; j + 1 < s; ++j)
        base(r - 1, j) = spec.b[j];
    base(r - 1, s - 1) = spec.a[r - 1] + spec.b[s - 1] - 1.0;

    Matrix independent = spec.a * spec.b.transpose();
    Vector interior = vec(independent.topLeftCorner(r - 1, s - 1));
    return detail::make_affine("frechet", AffineData{a, vec(base)}, interior);
}

/// M = {s in [0,1]^m : B s = alpha}, parametrized by an orthonormal basis of
/// ker(B) around the interior member s0.
inline ParametricModel affine_from_linear_equalities(const Matrix& b, const Vector& alpha,
                                                     const Vector& s0)
{
    if (b.cols() != s0.size() || b.rows() != alpha.size())
        throw ValidationError("linear_equalities: inconsistent dimensions");
    if (!((s0.array() > 0.0).all() && (s0.array() < 1.0).all()))
        throw ValidationError("linear_equalities: s0 must lie in (0,1)^m");
    if ((b * s0 - alpha).lpNorm<Eigen::Infinity>() > 1e-10)
        throw ValidationError("linear_equalities: s0 does not satisfy B s0 = alpha");
    Matrix basis = kernel_basis(b);
    if (basis.cols() == 0)
        throw ValidationError("linear_equalities: model set reduces to a singleton");
    return detail::make_affine("linear_equalities", AffineData{basis, s0},
                               Vector::Zero(basis.cols()));
}

/// Left inverse (A^T A)^{-1} A^T (s - gamma) of an affine model.
inline Vector affine_inverse(const ParametricModel& model, const Vector& s)
{
    const auto& aff = model.affine_data();
    if (s.size() != model.m())
        throw ValidationError("affine_inverse: dimension mismatch");
    if ((s.array() < -1e-10).any() || (s.array() > 1.0 + 1e-10).any())
        throw ValidationError("affine_inverse: vector is outside [0,1]^m");
    Vector rhs = s - aff.gamma;
    Vector theta = aff.a.colPivHouseholderQr().solve(rhs);
    if ((aff.a * theta - rhs).norm() > 1e-8)
        throw ValidationError("affine_inverse: vector is not a member of the model set");
    return theta;
}

}  // namespace phiproj
