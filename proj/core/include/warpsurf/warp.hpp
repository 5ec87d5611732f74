#pragma once

#include <string>

namespace warpsurf {

/// Warping function f(t) of the product R x_f M^2(kappa), drawn from a
/// closed catalog so that f, f' and f'' are always mutually consistent.
///
///   Const(c)           f = c
///   Affine(a, b)       f = a t + b
///   ExpScaled(a, b)    f = a exp(b t)
///   Quadratic(a, b, c) f = a t^2 + b t + c
class WarpFn {
 public:
  enum class Family { Const, Affine, ExpScaled, Quadratic };

  static WarpFn constant(double c);
  static WarpFn affine(double a, double b);
  static WarpFn expScaled(double a, double b);
  static WarpFn quadratic(double a, double b, double c);

  WarpFn() = default;  // f == 0

  double eval(double t) const;
  double d1(double t) const;
  double d2(double t) const;

  Family family() const { return family_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  bool isConstant() const;

  std::string describe() const;

  friend bool operator==(const WarpFn&, const WarpFn&) = default;

 private:
  WarpFn(Family family, double a, double b, double c) : family_(family), a_(a), b_(b), c_(c) {}

  Family family_ = Family::Const;
  double a_ = 0.0;
  double b_ = 0.0;
  double c_ = 0.0;
};

std::string toString(WarpFn::Family family);

}  // namespace warpsurf
