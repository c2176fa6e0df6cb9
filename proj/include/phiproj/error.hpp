#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace phiproj {

/// Short %g rendering for error messages.
inline std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimension, value out of range, bad config.
class ValidationError : public Error
{
  public:
    using Error::Error;
};

/// An interior-only operation received a coordinate on {0, 1}.
class BoundaryError : public ValidationError
{
  public:
    using ValidationError::ValidationError;
};

/// Linear system too ill-conditioned to be trusted.
class IllConditionedError : public ValidationError
{
  public:
    using ValidationError::ValidationError;
};

/// An iterative method stopped before meeting its tolerance.
class ConvergenceError : public Error
{
  public:
    using Error::Error;
};

/// Too many Monte Carlo replicates had to be discarded.
class DataDegeneracyError : public Error
{
  public:
    using Error::Error;
};

/// One of the differentiability conditions of the projection map fails.
///
/// Condition 9: unique interior minimizer.  Condition 10: positive definite
/// Hessian at the minimizer.  Condition 12: the projection keeps full support.
class ConditionViolation : public Error
{
  public:
    ConditionViolation(int condition, const std::string& what)
        : Error("Condition " + std::to_string(condition) + " violated: " + what)
        , condition_(condition)
    {
    }

    int condition() const noexcept { return condition_; }

  private:
    int condition_;
};

}  // namespace phiproj
