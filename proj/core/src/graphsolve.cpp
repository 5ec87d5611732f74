#include "warpsurf/graphsolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint/integrate/integrate_adaptive.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "warpsurf/errors.hpp"
#include "warpsurf/fundforms.hpp"

namespace warpsurf {

namespace ode = boost::numeric::odeint;

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kOverhang = 1e-6;

// Both parametrizations below have d_1 x d_2 with positive t-component, so
// the parametric sign -1 is the downward normal without any ambiguity at
// vertical tangents.
const Orientation kDown = Orientation::parametric(-1);

ImmersionJet radialJet(double r, double u, double up, double upp) {
  ImmersionJet j;
  j.p = {u, r, 0.0};
  j.d1[0] = {up, 1.0, 0.0};
  j.d1[1] = {0.0, 0.0, r};
  j.d2[0] = {upp, 0.0, 0.0};
  j.d2[1] = {0.0, 0.0, 1.0};
  j.d2[2] = {0.0, -r, 0.0};
  return j;
}

ImmersionJet arclengthJet(double r, double u, double psi, double dpsi) {
  const double c = std::cos(psi), s = std::sin(psi);
  ImmersionJet j;
  j.p = {u, r, 0.0};
  j.d1[0] = {s, c, 0.0};
  j.d1[1] = {0.0, 0.0, r};
  j.d2[0] = {c * dpsi, -s * dpsi, 0.0};
  j.d2[1] = {0.0, 0.0, c};
  j.d2[2] = {0.0, -r, 0.0};
  return j;
}

double curvatureOf(const AmbientSpace& space, const ImmersionJet& jet, CapMode mode) {
  const FundamentalData fd = fundamentalData(space, jet, kDown);
  return mode == CapMode::ExtrinsicK ? fd.Ke : fd.H;
}

template <class Eval>
double affineInverse(Eval eval, double target) {
  const double c0 = eval(0.0), c1 = eval(1.0);
  const double slope = c1 - c0;
  if (!(std::abs(slope) > 1e-12)) fail(ErrorCode::SlopeVanishes, "curvature does not depend on the second derivative");
  const double x = (target - c0) / slope;
  const double miss = std::abs(eval(x) - target);
  if (miss > 1e-8 * (1.0 + std::abs(target) + std::abs(c0))) {
    std::ostringstream os;
    os << "affine inversion missed the target by " << miss;
    fail(ErrorCode::AffinityBroken, os.str());
  }
  return x;
}

double targetCurvature(const CapProblem& p) { return p.mode == CapMode::Minimal ? 0.0 : p.target; }

/// u''(0) such that the apex is umbilic with the prescribed mean curvature,
/// evaluated on the symmetric jet at r = eps.
double axisSecondDerivative(const CapProblem& p) {
  const double eps = p.axisEps, h0 = p.apexHeight, target = p.apexMeanCurvature();
  auto g = [&](double a) {
    return curvatureOfProfilePoint(p.space, eps, h0 + 0.5 * a * eps * eps, a * eps, a, CapMode::CMC) - target;
  };
  double a0 = 0.0, a1 = -1.0;
  double g0 = g(a0), g1 = g(a1);
  for (int it = 0; it < 60; ++it) {
    if (std::abs(g1) <= 1e-13 * (1.0 + std::abs(target))) return a1;
    if (g1 == g0) break;
    const double a2 = a1 - g1 * (a1 - a0) / (g1 - g0);
    a0 = a1;
    g0 = g1;
    a1 = a2;
    g1 = g(a1);
  }
  if (std::abs(g1) <= 1e-10 * (1.0 + std::abs(target))) return a1;
  fail(ErrorCode::StepFailure, "could not fix the apex curvature");
}

using Shot = std::array<double, 3>;  // r, u, psi

template <class Base>
CapProfile integrateCap(const CapProblem& p, double a) {
  const double target = targetCurvature(p);
  auto rhs = [&](const Shot& x, Shot& dx, double) {
    dx[0] = std::cos(x[2]);
    dx[1] = std::sin(x[2]);
    dx[2] = solveForTurningRate(p.space, x[0], x[1], x[2], p.mode, target);
  };

  CapProfile out;
  out.axisSecond = a;
  out.maxHeight = p.apexHeight;
  auto record = [&](const Shot& x, double s) {
    Shot dx;
    rhs(x, dx, s);
    const double achieved = curvatureOf(p.space, arclengthJet(x[0], x[1], x[2], dx[2]), p.mode);
    out.sigma.push_back(s);
    out.rGrid.push_back(x[0]);
    out.uValues.push_back(x[1]);
    out.psi.push_back(x[2]);
    out.uPrime.push_back(std::tan(x[2]));
    out.curvature.push_back(achieved);
    out.maxCurvatureError = std::max(out.maxCurvatureError, std::abs(achieved - target));
    out.maxHeight = std::max(out.maxHeight, x[1]);
  };
  auto stop = [&](std::string why) {
    out.outcome = ShootOutcome::NoBoundaryReached;
    out.reason = std::move(why);
    return out;
  };

  const double eps = p.axisEps;
  Shot x{eps, p.apexHeight + 0.5 * a * eps * eps, std::atan(a * eps)};
  double s = eps;
  record(x, s);

  auto ctrl = ode::make_controlled(p.tolerance, p.tolerance, Base());
  double dt = 1e-4;
  for (long iter = 0;; ++iter) {
    if (iter > 1'000'000) fail(ErrorCode::StepFailure, "step budget exhausted");
    const Shot prev = x;
    const double sPrev = s;
    dt = std::min(dt, p.maxStep);
    int rejected = 0;
    try {
      while (ctrl.try_step(rhs, x, s, dt) == ode::fail) {
        if (++rejected > 200 || dt < 1e-14) fail(ErrorCode::StepFailure, "step size underflow");
      }
    } catch (const GeometryError& e) {
      if (e.code() == ErrorCode::StepFailure) throw;
      return stop(std::string("profile degenerates: ") + e.what());
    }
    for (double v : x) {
      if (!std::isfinite(v)) fail(ErrorCode::StepFailure, "non-finite state");
    }

    if (x[1] <= 0.0 && prev[1] > 0.0) {
      // Locate u = 0 inside the step by bisection on the step length.
      double lo = 0.0, hi = s - sPrev;
      Shot at = x;
      for (int k = 0; k < 200 && hi - lo > 1e-13; ++k) {
        const double mid = 0.5 * (lo + hi);
        Shot trial;
        Base().do_step(rhs, prev, sPrev, trial, mid);
        if (trial[1] > 0.0) {
          lo = mid;
        } else {
          hi = mid;
          at = trial;
        }
        if (std::abs(trial[1]) < 1e-12) {
          at = trial;
          hi = mid;
          break;
        }
      }
      if (at[2] < -kHalfPi - kOverhang) return stop("graph turned past vertical before reaching t = 0");
      record(at, sPrev + hi);
      out.boundaryRadius = at[0];
      out.outcome = ShootOutcome::BoundaryReached;
      out.reason = "boundary at t = 0";
      return out;
    }

    record(x, s);
    if (x[2] < -kHalfPi - kOverhang || x[2] > kHalfPi + kOverhang) return stop("graph turned past vertical");
    if (x[0] <= 0.0) return stop("profile returned to the axis");
    if (x[0] >= p.rMax) return stop("reached the radius limit");
    if (s >= p.arcMax) return stop("reached the arclength limit");
    if (x[1] >= p.heightMax) return stop("reached the height limit");
  }
}

using Radial = std::array<double, 2>;  // u, u'

/// Radial-form solution stored at uniform nodes. Values between nodes come
/// from one eighth-order step out of the nearest node, so u'' is exactly the
/// ODE value and carries no interpolation noise.
struct RadialNodes {
  AmbientSpace space;
  CapMode mode;
  double target;
  double spacing;
  std::vector<double> r;
  std::vector<Radial> state;
  double axisSecond;

  double second(double rr, double u, double up) const { return solveForU2(space, rr, u, up, mode, target); }

  void operator()(const Radial& x, Radial& dx, double rr) const {
    dx[0] = x[1];
    dx[1] = second(rr, x[0], x[1]);
  }

  Jet1D eval(double rr) const {
    if (rr <= 0.0) return {state[0][0], 0.0, axisSecond, 0.0};
    const auto last = static_cast<long>(r.size()) - 1;
    const auto k = static_cast<std::size_t>(std::clamp(std::lround(rr / spacing), 1L, last));
    Radial x = state[k];
    const double dr = rr - r[k];
    if (dr != 0.0) ode::runge_kutta_fehlberg78<Radial>().do_step(std::cref(*this), x, r[k], dr);
    const double upp = second(rr, x[0], x[1]);
    // Third derivative by the chain rule on the right-hand side F(r, u, u').
    const double hr = 1e-6 * std::max(rr, 1e-3), hu = 1e-6 * (1.0 + std::abs(x[0]));
    const double hp = 1e-6 * (1.0 + std::abs(x[1]));
    const double Fr = (second(rr + hr, x[0], x[1]) - second(rr - hr, x[0], x[1])) / (2.0 * hr);
    const double Fu = (second(rr, x[0] + hu, x[1]) - second(rr, x[0] - hu, x[1])) / (2.0 * hu);
    const double Fp = (second(rr, x[0], x[1] + hp) - second(rr, x[0], x[1] - hp)) / (2.0 * hp);
    return {x[0], x[1], upp, Fr + Fu * x[1] + Fp * upp};
  }
};

}  // namespace

std::string toString(CapMode mode) {
  switch (mode) {
    case CapMode::CMC: return "cmc";
    case CapMode::ExtrinsicK: return "ke";
    case CapMode::Minimal: return "minimal";
  }
  return "unknown";
}

std::string toString(ShootOutcome outcome) {
  return outcome == ShootOutcome::BoundaryReached ? "BoundaryReached" : "NoBoundaryReached";
}

void CapProblem::validate() const {
  if (space.kappa() != 0) fail(ErrorCode::BadInput, "caps are solved in the flat case kappa = 0 only");
  if (mode != CapMode::Minimal && !(target > 0.0)) fail(ErrorCode::BadInput, "prescribed curvature must be positive");
  if (!(apexHeight >= 0.0) || !std::isfinite(apexHeight)) fail(ErrorCode::BadInput, "apex height must be >= 0");
  if (!(tolerance > 0.0) || !(axisEps > 0.0) || !(maxStep > 0.0)) fail(ErrorCode::BadInput, "bad solver settings");
}

double CapProblem::apexMeanCurvature() const {
  switch (mode) {
    case CapMode::CMC: return target;
    case CapMode::ExtrinsicK: return std::sqrt(target);
    case CapMode::Minimal: return 0.0;
  }
  return 0.0;
}

double curvatureOfProfilePoint(const AmbientSpace& space, double r, double u, double uPrime, double uSecond,
                               CapMode mode) {
  if (!(r > 0.0)) fail(ErrorCode::DegenerateJet, "profile curvature needs r > 0");
  return curvatureOf(space, radialJet(r, u, uPrime, uSecond), mode);
}

double solveForU2(const AmbientSpace& space, double r, double u, double uPrime, CapMode mode, double target) {
  return affineInverse([&](double upp) { return curvatureOfProfilePoint(space, r, u, uPrime, upp, mode); }, target);
}

double solveForTurningRate(const AmbientSpace& space, double r, double u, double psi, CapMode mode, double target) {
  if (!(r > 0.0)) fail(ErrorCode::DegenerateJet, "profile curvature needs r > 0");
  return affineInverse([&](double k) { return curvatureOf(space, arclengthJet(r, u, psi, k), mode); }, target);
}

CapProfile shootCap(const CapProblem& problem) {
  problem.validate();
  const double a = axisSecondDerivative(problem);
  if (problem.stepper == Stepper::Fehlberg78) {
    return integrateCap<ode::runge_kutta_fehlberg78<Shot>>(problem, a);
  }
  return integrateCap<ode::runge_kutta_dopri5<Shot>>(problem, a);
}

Profile solvedProfile(const CapProblem& problem, const CapProfile& cap, const SolvedProfileOptions& options) {
  problem.validate();
  if (cap.rGrid.size() < 2) fail(ErrorCode::BadInput, "cap profile has too few nodes");
  if (options.nodes < 4) fail(ErrorCode::BadInput, "need at least 4 nodes");
  double rHi = options.rHi;
  if (!(rHi > 0.0)) {
    rHi = cap.rGrid.back();
    for (std::size_t i = 1; i < cap.psi.size(); ++i) {
      if (std::abs(cap.psi[i]) > options.steepLimit) {
        const double w = (options.steepLimit - std::abs(cap.psi[i - 1])) /
                         (std::abs(cap.psi[i]) - std::abs(cap.psi[i - 1]));
        rHi = cap.rGrid[i - 1] + w * (cap.rGrid[i] - cap.rGrid[i - 1]);
        break;
      }
    }
  }
  if (cap.reachedBoundary()) rHi = std::min(rHi, cap.boundaryRadius);
  if (!(rHi > 10.0 * problem.axisEps)) fail(ErrorCode::BadInput, "solved profile range too short");

  const int n = options.nodes;
  const double step = rHi / (n - 1);
  auto nodes = std::make_shared<RadialNodes>(RadialNodes{problem.space, problem.mode, targetCurvature(problem),
                                                         step, {0.0}, {{problem.apexHeight, 0.0}}, cap.axisSecond});
  // Adaptive start off the axis, then fixed eighth-order steps so that the
  // nodes lie on one discrete trajectory and evaluation is continuous.
  const double eps = problem.axisEps, a = cap.axisSecond;
  Radial x{problem.apexHeight + 0.5 * a * eps * eps, a * eps};
  ode::integrate_adaptive(ode::make_controlled(options.tolerance, options.tolerance,
                                               ode::runge_kutta_fehlberg78<Radial>()),
                          std::cref(*nodes), x, eps, step, 1e-4);
  nodes->r.push_back(step);
  nodes->state.push_back(x);
  ode::runge_kutta_fehlberg78<Radial> fixed;
  for (int k = 2; k < n; ++k) {
    fixed.do_step(std::cref(*nodes), x, (k - 1) * step, step);
    nodes->r.push_back(k * step);
    nodes->state.push_back(x);
  }
  return Profile(
      "solved-" + toString(problem.mode), [nodes](double r) { return nodes->eval(r); }, 0.0, rHi);
}

WarpHypotheses checkWarpHypotheses(const WarpFn& warp, double t0, double t1, int samples) {
  if (samples < 2) fail(ErrorCode::BadInput, "need at least two samples");
  WarpHypotheses h;
  h.samples = samples;
  h.minF = std::numeric_limits<double>::infinity();
  h.maxFPrime = -std::numeric_limits<double>::infinity();
  h.minFDoublePrime = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    const double f = warp.eval(t), fp = warp.d1(t), fpp = warp.d2(t);
    if (f < h.minF) {
      h.minF = f;
      h.minFAt = t;
    }
    if (fp > h.maxFPrime) {
      h.maxFPrime = fp;
      h.maxFPrimeAt = t;
    }
    if (fpp < h.minFDoublePrime) {
      h.minFDoublePrime = fpp;
      h.minFDoublePrimeAt = t;
    }
  }
  h.fNonneg = h.minF >= 0.0;
  h.fPrimeNonpos = h.maxFPrime <= 0.0;
  h.fDoublePrimeNonneg = h.minFDoublePrime >= 0.0;
  return h;
}

HeightVerdict heightVerdict(const CapProfile& profile, const CapProblem& problem) {
  if (problem.mode == CapMode::Minimal) fail(ErrorCode::BadInput, "no height bound for minimal graphs");
  HeightVerdict v;
  const double f0 = problem.space.warp().eval(0.0);
  v.measuredHeight = profile.maxHeight;
  v.bound = problem.mode == CapMode::CMC ? std::exp(f0) / problem.target : std::exp(f0) / std::sqrt(problem.target);
  v.hypotheses = checkWarpHypotheses(problem.space.warp(), 0.0, std::max(profile.maxHeight, 1e-12), 1000);
  v.reachedBoundary = profile.reachedBoundary();
  v.margin = v.bound - v.measuredHeight;
  v.pass = !v.reachedBoundary || v.measuredHeight <= v.bound + 1e-8;
  return v;
}

RigidityReport minimalRigidityCheck(const AmbientSpace& space, const std::vector<double>& apexHeights,
                                    const RigidityOptions& options) {
  if (apexHeights.empty()) fail(ErrorCode::BadInput, "no apex heights given");
  RigidityReport rep;
  const double top = *std::max_element(apexHeights.begin(), apexHeights.end()) + options.workingInterval;
  for (int i = 0; i <= 1000; ++i) {
    const double t = top * i / 1000.0;
    if (space.warp().d1(t) < 0.0) rep.fPrimeNonneg = false;
  }
  rep.fPrimeVanishesAtZero = std::abs(space.warp().d1(0.0)) <= 1e-14;
  rep.sliceIsSolution = std::abs(curvatureOfProfilePoint(space, 0.5, 0.0, 0.0, 0.0, CapMode::Minimal)) <= 1e-12;

  for (double h0 : apexHeights) {
    RigidityEntry e;
    e.apexHeight = h0;
    if (h0 <= 0.0) {
      e.outcome = ShootOutcome::BoundaryReached;
      e.compactCap = false;
      e.reason = rep.sliceIsSolution ? "the slice t = 0 is minimal" : "the slice t = 0 is not minimal";
      rep.entries.push_back(e);
      continue;
    }
    CapProblem p;
    p.mode = CapMode::Minimal;
    p.space = space;
    p.apexHeight = h0;
    p.rMax = options.rMax;
    p.heightMax = options.heightMax;
    const CapProfile cap = shootCap(p);
    e.outcome = cap.outcome;
    e.reason = cap.reason;
    if (cap.reachedBoundary()) {
      const bool nonneg = std::all_of(cap.uValues.begin(), cap.uValues.end() - 1, [](double u) { return u >= -1e-12; });
      e.compactCap = nonneg;
    }
    if (e.compactCap) ++rep.compactCaps;
    rep.entries.push_back(e);
  }
  if (rep.fPrimeVanishesAtZero) {
    rep.dichotomyHolds = rep.sliceIsSolution && rep.compactCaps == 0;
    rep.verdict = "slice";
  } else {
    rep.dichotomyHolds = !rep.sliceIsSolution && rep.compactCaps == 0;
    rep.verdict = "no such minimal surface";
  }
  return rep;
}

}  // namespace warpsurf
