#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phiproj/error.hpp"

namespace phiproj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Nonnegative vector of [0,1]^m with its support.
class MeasureVector
{
  public:
    MeasureVector() = default;

    explicit MeasureVector(Vector entries) : entries_(std::move(entries))
    {
        for (Eigen::Index i = 0; i < entries_.size(); ++i) {
            double v = entries_[i];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw ValidationError("measure entry " + std::to_string(i)
                                      + " outside [0,1]");
            if (v > 0.0)
                support_.push_back(static_cast<int>(i));
        }
    }

    const Vector& entries() const { return entries_; }
    const std::vector<int>& support() const { return support_; }
    Eigen::Index size() const { return entries_.size(); }
    double operator[](Eigen::Index i) const { return entries_[i]; }
    operator const Vector&() const { return entries_; }

    /// True when every entry lies in (margin, 1 - margin).
    bool is_interior(double margin = 0.0) const
    {
        return (entries_.array() > margin).all()
               && (entries_.array() < 1.0 - margin).all();
    }

  private:
    Vector entries_;
    std::vector<int> support_;
};

/// MeasureVector whose entries sum to one.
class ProbabilityVector : public MeasureVector
{
  public:
    static constexpr double sum_tolerance = 1e-12;

    ProbabilityVector() = default;

    explicit ProbabilityVector(Vector entries) : MeasureVector(std::move(entries))
    {
        double total = this->entries().sum();
        if (std::abs(total - 1.0) > sum_tolerance)
            throw ValidationError("probability vector sums to "
                                  + std::to_string(total));
    }
};

}  // namespace phiproj
