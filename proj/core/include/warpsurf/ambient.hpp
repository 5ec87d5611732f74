#pragma once

#include <array>

#include <Eigen/Core>

#include "warpsurf/warp.hpp"

namespace warpsurf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Coordinate indices, fixed everywhere as (t, x, y).
inline constexpr int kT = 0;
inline constexpr int kX = 1;
inline constexpr int kY = 2;

/// Point of R x M^2(kappa) in coordinates (t, x, y); (x, y) are the
/// conformal model coordinates of the space form.
struct AmbientPoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  static AmbientPoint fromVector(const Vec3& v) { return {v[kT], v[kX], v[kY]}; }
  Vec3 toVector() const { return {t, x, y}; }
};

/// Three index objects: christoffel[k](i, j) = Gamma^k_{ij}.
using Christoffel3 = std::array<Mat3, 3>;
/// Metric partials: metricPartials[l](i, j) = d_l g_{ij}.
using MetricPartials3 = std::array<Mat3, 3>;

/// Conformal factor lambda of the space-form metric lambda^2 (dx^2 + dy^2).
/// Throws DomainError outside the model domain (1 + kappa r^2 <= 0).
double modelFactor(int kappa, double x, double y);

class AmbientSpace {
 public:
  AmbientSpace(int kappa, WarpFn warp);

  int kappa() const { return kappa_; }
  const WarpFn& warp() const { return warp_; }

  bool inDomain(const AmbientPoint& p) const;
  void requireDomain(const AmbientPoint& p) const;

  /// diag(1, e^{2f} lambda^2, e^{2f} lambda^2).
  Mat3 metricAt(const AmbientPoint& p) const;
  MetricPartials3 metricPartials(const AmbientPoint& p) const;
  Christoffel3 christoffels(const AmbientPoint& p) const;

  /// Covariant derivative correction Gamma^k_{ij} a^i b^j.
  static Vec3 contract(const Christoffel3& gamma, const Vec3& a, const Vec3& b);

  /// f'' + kappa e^{-2f}, the coefficient that couples the tangential part of
  /// the vertical field to curvature in the structure equations.
  double mixedCurvatureTerm(double t) const;
  /// (f')^2 - kappa e^{-2f}.
  double horizontalCurvatureTerm(double t) const;

 private:
  int kappa_;
  WarpFn warp_;
};

Christoffel3 ambientChristoffels(const AmbientSpace& space, const AmbientPoint& p);
inline Mat3 metricAt(const AmbientSpace& space, const AmbientPoint& p) { return space.metricAt(p); }

/// Levi-Civita symbols from a metric and its partials; shared by the ambient
/// space and the finite-difference oracle in the tests.
Christoffel3 leviCivita(const Mat3& g, const MetricPartials3& dg);

}  // namespace warpsurf
