#include "warpsurf/warp.hpp"

#include <cmath>
#include <sstream>

namespace warpsurf {

WarpFn WarpFn::constant(double c) { return {Family::Const, 0.0, 0.0, c}; }
WarpFn WarpFn::affine(double a, double b) { return {Family::Affine, a, b, 0.0}; }
WarpFn WarpFn::expScaled(double a, double b) { return {Family::ExpScaled, a, b, 0.0}; }
WarpFn WarpFn::quadratic(double a, double b, double c) { return {Family::Quadratic, a, b, c}; }

double WarpFn::eval(double t) const {
  switch (family_) {
    case Family::Const: return c_;
    case Family::Affine: return a_ * t + b_;
    case Family::ExpScaled: return a_ * std::exp(b_ * t);
    case Family::Quadratic: return (a_ * t + b_) * t + c_;
  }
  return 0.0;
}

double WarpFn::d1(double t) const {
  switch (family_) {
    case Family::Const: return 0.0;
    case Family::Affine: return a_;
    case Family::ExpScaled: return a_ * b_ * std::exp(b_ * t);
    case Family::Quadratic: return 2.0 * a_ * t + b_;
  }
  return 0.0;
}

double WarpFn::d2(double t) const {
  switch (family_) {
    case Family::Const: return 0.0;
    case Family::Affine: return 0.0;
    case Family::ExpScaled: return a_ * b_ * b_ * std::exp(b_ * t);
    case Family::Quadratic: return 2.0 * a_;
  }
  return 0.0;
}

bool WarpFn::isConstant() const {
  switch (family_) {
    case Family::Const: return true;
    case Family::Affine: return a_ == 0.0;
    case Family::ExpScaled: return a_ == 0.0 || b_ == 0.0;
    case Family::Quadratic: return a_ == 0.0 && b_ == 0.0;
  }
  return false;
}

std::string toString(WarpFn::Family family) {
  switch (family) {
    case WarpFn::Family::Const: return "Const";
    case WarpFn::Family::Affine: return "Affine";
    case WarpFn::Family::ExpScaled: return "ExpScaled";
    case WarpFn::Family::Quadratic: return "Quadratic";
  }
  return "Unknown";
}

std::string WarpFn::describe() const {
  std::ostringstream os;
  os << toString(family_) << '(';
  switch (family_) {
    case Family::Const: os << c_; break;
    case Family::Affine:
    case Family::ExpScaled: os << a_ << ", " << b_; break;
    case Family::Quadratic: os << a_ << ", " << b_ << ", " << c_; break;
  }
  os << ')';
  return os.str();
}

}  // namespace warpsurf
