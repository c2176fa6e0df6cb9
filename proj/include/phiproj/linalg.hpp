#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "phiproj/error.hpp"
#include "phiproj/measure.hpp"

namespace phiproj {

/// Column-major vectorization of a matrix.
inline Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

/// Inverse of vec() for a rows x cols matrix.
inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols)
{
    if (v.size() != rows * cols)
        throw ValidationError("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

/// Orthonormal basis of ker(B), one basis vector per column.  Singular
/// values below 1e-10 * sigma_max count as zero.
inline Matrix kernel_basis(const Matrix& b)
{
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    double smax = sigma.size() > 0 ? sigma[0] : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > 1e-10 * smax)
            ++rank;
    return svd.matrixV().rightCols(b.cols() - rank);
}

inline double min_singular_value(const Matrix& a)
{
    if (a.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().minCoeff();
}

inline Eigen::Index numerical_rank(const Matrix& a)
{
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0)
        return 0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > 1e-10 * sigma[0])
            ++rank;
    return rank;
}

/// Square Vandermonde matrix with row i equal to (x_1^i, ..., x_m^i), i = 0..m-1.
inline Matrix vandermonde(const Vector& x)
{
    const Eigen::Index m = x.size();
    Matrix u(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        double p = 1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            u(i, j) = p;
            p *= x[j];
        }
    }
    return u;
}

/// LU factorization with partial pivoting that refuses systems whose
/// estimated condition number exceeds `max_condition`.
inline Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& a, double max_condition,
                                              const char* what)
{
    Eigen::PartialPivLU<Matrix> lu(a);
    double rcond = lu.rcond();
    if (!(rcond > 0.0) || 1.0 / rcond > max_condition)
        throw IllConditionedError(std::string(what) + ": condition estimate "
                                  + format_number(rcond > 0.0 ? 1.0 / rcond : INFINITY)
                                  + " exceeds limit");
    return lu;
}

}  // namespace phiproj
