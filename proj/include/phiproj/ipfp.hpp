#pragma once

#include <algorithm>
#include <cmath>

#include "phiproj/error.hpp"
#include "phiproj/measure.hpp"

namespace phiproj {

struct IpfpOptions
{
    int max_iterations = 10000;
    double tolerance = 1e-12;
};

struct IpfpResult
{
    Matrix array;
    int iterations = 0;
    bool converged = false;
    /// max over rows and columns of |margin - target|.
    double max_margin_error = 0.0;
};

inline double margin_error(const Matrix& p, const Vector& a, const Vector& b)
{
    double rows = (p.rowwise().sum() - a).lpNorm<Eigen::Infinity>();
    double cols = (p.colwise().sum().transpose() - b).lpNorm<Eigen::Infinity>();
    return std::max(rows, cols);
}

/// Iterative proportional fitting (Sinkhorn scaling): alternately rescales
/// rows to `a` and columns to `b`.  The limit is the Kullback-Leibler
/// projection of `q` onto the Frechet class with margins (a, b).
inline IpfpResult project_ipfp(const Matrix& q, const Vector& a, const Vector& b,
                               const IpfpOptions& opts = {})
{
    if (q.rows() != a.size() || q.cols() != b.size())
        throw ValidationError("project_ipfp: margins do not match the array shape");
    if (!(q.array() > 0.0).all())
        throw ValidationError("project_ipfp: array must be strictly positive");
    if (!(a.array() > 0.0).all() || !(b.array() > 0.0).all()
        || std::abs(a.sum() - 1.0) > 1e-12 || std::abs(b.sum() - 1.0) > 1e-12)
        throw ValidationError("project_ipfp: margins must be positive probability vectors");

    IpfpResult out;
    out.array = q;
    out.max_margin_error = margin_error(out.array, a, b);
    while (out.max_margin_error >= opts.tolerance && out.iterations < opts.max_iterations) {
        Vector row_scale = a.cwiseQuotient(out.array.rowwise().sum());
        out.array = row_scale.asDiagonal() * out.array;
        Vector col_scale = b.cwiseQuotient(out.array.colwise().sum().transpose());
        out.array = out.array * col_scale.asDiagonal();
        ++out.iterations;
        out.max_margin_error = margin_error(out.array, a, b);
    }
    out.converged = out.max_margin_error < opts.tolerance;
    return out;
}

}  // namespace phiproj
