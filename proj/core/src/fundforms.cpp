#include "warpsurf/fundforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "warpsurf/errors.hpp"

namespace warpsurf {

namespace {

constexpr double kAmbiguity = 1e-12;
constexpr double kMinD = 1e-14;

}  // namespace

std::string Orientation::describe() const {
  switch (kind) {
    case Kind::Up: return "up";
    case Kind::Down: return "down";
    case Kind::Seed: return "seed";
    case Kind::Parametric: return sign > 0 ? "parametric+" : "parametric-";
  }
  return "unknown";
}

FundamentalData fundamentalData(const AmbientSpace& space, const ImmersionJet& jet, Orientation orientation) {
  const Mat3 g = space.metricAt(jet.p);
  const Christoffel3 gamma = space.christoffels(jet.p);

  FundamentalData fd;
  fd.p = jet.p;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) fd.I(i, j) = jet.d1[i].dot(g * jet.d1[j]);
  }
  const double det = fd.I.determinant();
  if (!(fd.I(0, 0) > 0.0) || !(det > 1e-12 * fd.I(0, 0) * fd.I(1, 1))) {
    fail(ErrorCode::DegenerateJet, "first fundamental form is not positive definite");
  }

  // A covector annihilating both tangents, raised by the metric.
  const Vec3 co = jet.d1[0].cross(jet.d1[1]);
  Vec3 n = g.inverse() * co;
  n /= std::sqrt(n.dot(g * n));

  double sign = 1.0;
  switch (orientation.kind) {
    case Orientation::Kind::Up:
    case Orientation::Kind::Down: {
      const double nu = n[kT];
      if (std::abs(nu) < kAmbiguity) {
        fail(ErrorCode::OrientationAmbiguous, "angle function vanishes; pass a normal seed");
      }
      const bool wantUp = orientation.kind == Orientation::Kind::Up;
      sign = ((nu > 0.0) == wantUp) ? 1.0 : -1.0;
      break;
    }
    case Orientation::Kind::Seed: {
      const double s = n.dot(g * orientation.seed);
      if (std::abs(s) < kAmbiguity) fail(ErrorCode::OrientationAmbiguous, "normal seed is tangent");
      sign = s > 0.0 ? 1.0 : -1.0;
      break;
    }
    case Orientation::Kind::Parametric: sign = orientation.sign; break;
  }
  n *= sign;
  fd.normal = n;
  fd.nu = n[kT];

  const Vec3 gn = g * n;
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      const Vec3 acc = jet.second(i, j) + AmbientSpace::contract(gamma, jet.d1[i], jet.d1[j]);
      fd.II(i, j) = acc.dot(gn);
      fd.II(j, i) = fd.II(i, j);
    }
  }
  const Mat2 Iinv = fd.I.inverse();
  fd.S = Iinv * fd.II;
  fd.H = 0.5 * fd.S.trace();
  fd.Ke = fd.S.determinant();
  fd.gradH = {jet.d1[0][kT], jet.d1[1][kT]};
  fd.T = Iinv * fd.gradH;
  fd.fPrime = space.warp().d1(jet.p.t);
  return fd;
}

Christoffel2 surfaceChristoffels(const AmbientSpace& space, const ImmersionJet& jet) {
  const Mat3 g = space.metricAt(jet.p);
  const Christoffel3 gamma = space.christoffels(jet.p);
  Mat2 I;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) I(i, j) = jet.d1[i].dot(g * jet.d1[j]);
  }
  const Mat2 Iinv = I.inverse();
  Christoffel2 out;
  out[0].setZero();
  out[1].setZero();
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      const Vec3 acc = jet.second(i, j) + AmbientSpace::contract(gamma, jet.d1[i], jet.d1[j]);
      const Vec2 lowered{acc.dot(g * jet.d1[0]), acc.dot(g * jet.d1[1])};
      const Vec2 raised = Iinv * lowered;
      for (int k = 0; k < 2; ++k) {
        out[k](i, j) = raised[k];
        out[k](j, i) = raised[k];
      }
    }
  }
  return out;
}

ComplexFundData complexify(const FundamentalData& fd, const ImmersionJet& /*jet*/) {
  const double Er = fd.I(0, 0), Fr = fd.I(0, 1), Gr = fd.I(1, 1);
  const double L = fd.II(0, 0), M = fd.II(0, 1), N = fd.II(1, 1);
  ComplexFundData c;
  c.E = cd(0.25 * (Er - Gr), -0.5 * Fr);
  c.F = 0.25 * (Er + Gr);
  c.D = std::norm(c.E) - c.F * c.F;
  c.rho = 0.25 * (L + N);
  c.p = cd(0.25 * (L - N), -0.5 * M);
  c.hz = 0.5 * cd(fd.gradH[0], -fd.gradH[1]);
  c.alpha = std::conj(c.E) * c.hz - c.F * std::conj(c.hz);
  const Vec2 dnu = -(fd.II * fd.T) - fd.fPrime * fd.nu * fd.gradH;
  c.nuz = 0.5 * cd(dnu[0], -dnu[1]);
  c.lambdaConf = 2.0 * c.F;
  c.nu = fd.nu;
  c.H = fd.H;
  c.Ke = fd.Ke;
  c.tNormSq = fd.tNormSq();
  c.T = fd.T;
  return c;
}

void ResidualStat::add(double value) {
  if (!std::isfinite(value)) {
    max = std::numeric_limits<double>::infinity();
  } else {
    max = std::max(max, value);
  }
  sum += value;
  ++points;
}

void ResidualSet::add(const std::string& label, double value) {
  for (auto& [name, stat] : entries_) {
    if (name == label) {
      stat.add(value);
      return;
    }
  }
  entries_.emplace_back(label, ResidualStat{});
  entries_.back().second.add(value);
}

void ResidualSet::merge(const ResidualSet& other) {
  for (const auto& [name, stat] : other.entries_) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == name; });
    if (it == entries_.end()) {
      entries_.emplace_back(name, stat);
    } else {
      it->second.max = std::max(it->second.max, stat.max);
      it->second.sum += stat.sum;
      it->second.points += stat.points;
    }
  }
}

bool ResidualSet::has(const std::string& label) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == label; });
}

const ResidualStat& ResidualSet::at(const std::string& label) const {
  for (const auto& [name, stat] : entries_) {
    if (name == label) return stat;
  }
  fail(ErrorCode::BadInput, "no residual labelled " + label);
}

double ResidualSet::worst(const std::vector<std::string>& labels) const {
  double w = 0.0;
  for (const auto& [name, stat] : entries_) {
    if (labels.empty() || std::find(labels.begin(), labels.end(), name) != labels.end()) {
      w = std::max(w, stat.max);
    }
  }
  return w;
}

ResidualSet checkLemma31(const ComplexFundData& c) {
  if (std::abs(c.D) < kMinD) fail(ErrorCode::DivByZeroD, "|D| below 1e-14");
  const cd hz = c.hz, hzb = std::conj(c.hz);
  const cd a = c.alpha, ab = std::conj(c.alpha);
  const cd E = c.E, Eb = std::conj(c.E);
  const double F = c.F, D = c.D;

  ResidualSet r;
  // T = (alpha d_z + conj(alpha) d_zbar)/D has real components (Re alpha, Im alpha)/D.
  r.add("e4", std::hypot(c.T[0] - a.real() / D, c.T[1] - a.imag() / D));
  r.add("e5", std::abs(a - (Eb * hz - F * hzb)));
  r.add("e6", std::abs(c.tNormSq - (a * hz + ab * hzb) / D));
  r.add("e7", std::abs(c.tNormSq - (E * hzb * hzb + Eb * hz * hz - 2.0 * F * hz * hzb) / D));
  r.add("e8", std::abs(hz - (E * a + F * ab) / D));
  r.add("e9", std::abs(std::norm(hz) - (c.tNormSq * F + std::norm(a) / D)));
  return r;
}

}  // namespace warpsurf
