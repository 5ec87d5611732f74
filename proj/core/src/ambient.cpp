#include "warpsurf/ambient.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "warpsurf/errors.hpp"

namespace warpsurf {

namespace {

double domainSlack(int kappa, double x, double y) { return 1.0 + kappa * (x * x + y * y); }

}  // namespace

double modelFactor(int kappa, double x, double y) {
  if (kappa == 0) return 1.0;
  const double slack = domainSlack(kappa, x, y);
  if (!(slack > 0.0)) {
    std::ostringstream os;
    os << "point (" << x << ", " << y << ") lies outside the kappa=" << kappa << " model disk";
    fail(ErrorCode::DomainError, os.str());
  }
  return 2.0 / slack;
}

AmbientSpace::AmbientSpace(int kappa, WarpFn warp) : kappa_(kappa), warp_(warp) {
  if (kappa < -1 || kappa > 1) {
    fail(ErrorCode::BadInput, "kappa must be one of -1, 0, 1");
  }
}

bool AmbientSpace::inDomain(const AmbientPoint& p) const {
  if (!std::isfinite(p.t) || !std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  return kappa_ == 0 || domainSlack(kappa_, p.x, p.y) > 0.0;
}

void AmbientSpace::requireDomain(const AmbientPoint& p) const {
  if (!inDomain(p)) {
    std::ostringstream os;
    os << "point (" << p.t << ", " << p.x << ", " << p.y << ") outside the ambient domain";
    fail(ErrorCode::DomainError, os.str());
  }
}

Mat3 AmbientSpace::metricAt(const AmbientPoint& p) const {
  requireDomain(p);
  const double lambda = modelFactor(kappa_, p.x, p.y);
  const double w = std::exp(2.0 * warp_.eval(p.t)) * lambda * lambda;
  Mat3 g = Mat3::Zero();
  g(kT, kT) = 1.0;
  g(kX, kX) = w;
  g(kY, kY) = w;
  return g;
}

MetricPartials3 AmbientSpace::metricPartials(const AmbientPoint& p) const {
  requireDomain(p);
  const double lambda = modelFactor(kappa_, p.x, p.y);
  const double w = std::exp(2.0 * warp_.eval(p.t)) * lambda * lambda;
  // d_t w = 2 f' w;  d_x lambda = -kappa x lambda^2  =>  d_x w = -2 kappa x lambda w.
  const std::array<double, 3> dw = {
      2.0 * warp_.d1(p.t) * w,
      -2.0 * kappa_ * p.x * lambda * w,
      -2.0 * kappa_ * p.y * lambda * w,
  };
  MetricPartials3 dg;
  for (int l = 0; l < 3; ++l) {
    dg[l] = Mat3::Zero();
    dg[l](kX, kX) = dw[l];
    dg[l](kY, kY) = dw[l];
  }
  return dg;
}

Christoffel3 leviCivita(const Mat3& g, const MetricPartials3& dg) {
  const Mat3 ginv = g.inverse();
  Christoffel3 gamma;
  for (int k = 0; k < 3; ++k) {
    gamma[k] = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        double sum = 0.0;
        for (int l = 0; l < 3; ++l) {
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        }
        gamma[k](i, j) = 0.5 * sum;
        gamma[k](j, i) = gamma[k](i, j);
      }
    }
  }
  return gamma;
}

Christoffel3 AmbientSpace::christoffels(const AmbientPoint& p) const {
  return leviCivita(metricAt(p), metricPartials(p));
}

Vec3 AmbientSpace::contract(const Christoffel3& gamma, const Vec3& a, const Vec3& b) {
  return {a.dot(gamma[0] * b), a.dot(gamma[1] * b), a.dot(gamma[2] * b)};
}

double AmbientSpace::mixedCurvatureTerm(double t) const {
  return warp_.d2(t) + kappa_ * std::exp(-2.0 * warp_.eval(t));
}

double AmbientSpace::horizontalCurvatureTerm(double t) const {
  const double fp = warp_.d1(t);
  return fp * fp - kappa_ * std::exp(-2.0 * warp_.eval(t));
}

Christoffel3 ambientChristoffels(const AmbientSpace& space, const AmbientPoint& p) {
  return space.christoffels(p);
}

}  // namespace warpsurf
