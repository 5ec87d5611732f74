#include <cmath>

#include <Eigen/LU>

#include "warpsurf/conformal.hpp"
#include "warpsurf/errors.hpp"

namespace warpsurf {

namespace {

Vec2 gradient(const ScalarField& u, const Vec2& x, double h) {
  const Vec2 ex{h, 0.0}, ey{0.0, h};
  return {(u(x + ex) - u(x - ex)) / (2.0 * h), (u(x + ey) - u(x - ey)) / (2.0 * h)};
}

/// sqrt(det g) g^{-1} grad u.
Vec2 flux(const MetricField& g, const ScalarField& u, const Vec2& x, double h) {
  const Mat2 m = g(x);
  const double det = m.determinant();
  if (!(det > 0.0) || !(m(0, 0) > 0.0)) fail(ErrorCode::BadInput, "metric sample is not positive definite");
  return std::sqrt(det) * (m.inverse() * gradient(u, x, h));
}

}  // namespace

double laplaceBeltrami(const MetricField& g, const ScalarField& u, const Vec2& x, double step) {
  if (!(step > 0.0)) fail(ErrorCode::BadInput, "step must be positive");
  const Vec2 ex{step, 0.0}, ey{0.0, step};
  const double div = (flux(g, u, x + ex, step)[0] - flux(g, u, x - ex, step)[0] + flux(g, u, x + ey, step)[1] -
                      flux(g, u, x - ey, step)[1]) /
                     (2.0 * step);
  return div / std::sqrt(g(x).determinant());
}

LaplacianPair laplacianScaling(const MetricField& g, double c, const ScalarField& u, const Vec2& x, double step) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorCode::BadScale, "scale factor must be positive");
  const MetricField scaled = [&g, c](const Vec2& y) -> Mat2 { return c * g(y); };
  return {laplaceBeltrami(scaled, u, x, step), laplaceBeltrami(g, u, x, step) / c};
}

}  // namespace warpsurf
