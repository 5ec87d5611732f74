#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace warpsurf {

/// Value and first three derivatives of a 1D function at a point.
using Jet1D = std::array<double, 4>;

/// Cubic interpolating spline with not-a-knot end conditions. Exact for
/// cubic data, C2 everywhere; the third derivative is piecewise constant.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  Jet1D eval(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

/// Piecewise quintic Hermite interpolant through values, first and second
/// derivatives. C2 with sixth-order accurate values on smooth data.
class QuinticHermite {
 public:
  QuinticHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                 std::vector<double> d2y);

  Jet1D eval(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<std::array<double, 6>> coeffs_;  // per segment, in the unit variable
};

}  // namespace warpsurf
