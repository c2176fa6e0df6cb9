#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace phiproj {

/// A real number or +infinity.  -infinity is never constructed.
class ExtendedReal
{
  public:
    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double value) : value_(value), infinite_(false) {}

    static constexpr ExtendedReal infinity()
    {
        ExtendedReal r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_finite() const { return !infinite_; }
    constexpr bool is_infinite() const { return infinite_; }

    /// Finite value, or +inf as a double.
    constexpr double value() const
    {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b)
    {
        if (a.infinite_ || b.infinite_)
            return infinity();
        return ExtendedReal(a.value_ + b.value_);
    }

    ExtendedReal& operator+=(ExtendedReal other) { return *this = *this + other; }

    /// Scaling by a strictly positive factor; v * inf = inf.
    friend constexpr ExtendedReal scale(double factor, ExtendedReal x)
    {
        if (x.infinite_)
            return infinity();
        return ExtendedReal(factor * x.value_);
    }

    friend constexpr bool operator==(ExtendedReal a, ExtendedReal b)
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    friend std::ostream& operator<<(std::ostream& os, ExtendedReal x)
    {
        if (x.infinite_)
            return os << "+inf";
        return os << x.value_;
    }

  private:
    double value_ = 0.0;
    bool infinite_ = false;
};

}  // namespace phiproj
