// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "warpsurf/compat.hpp"
#include "warpsurf/conformal.hpp"
#include "warpsurf/errors.hpp"
#include "warpsurf/fundforms.hpp"
#include "warpsurf/graphsolve.hpp"

namespace ws = warpsurf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Accumulates sub-check results; the first few failures are kept verbatim.
class Ledger {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }
  Outcome outcome() const {
    std::ostringstream os;
    os << checks_ - failures_ << "/" << checks_ << " checks";
    if (!info_.empty()) os << ", " << info_;
    if (failures_) os << " | " << notes_ << (failures_ > 3 ? " ..." : "");
    return {failures_ == 0, os.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string notes_;
  std::string info_;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ws::WarpFn kExpWarp = ws::WarpFn::expScaled(1.0, -1.0);  // f(t) = e^{-t}

// ------------------------------------------------------------------ surfaces

struct NamedSurface {
  std::string name;
  ws::AmbientSpace space;
  ws::Immersion immersion;
  ws::Orientation orientation;
};

std::vector<NamedSurface> compatSurfaces() {
  std::vector<NamedSurface> out;
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  for (int kappa : {-1, 0, 1}) {
    const ws::WarpFn c = ws::WarpFn::constant(0.2);
    out.push_back({"slice k=" + std::to_string(kappa), ws::AmbientSpace(kappa, c),
                   ws::catalog::slice(0.3, c, {-0.4, 0.4, -0.4, 0.4}).immersion, ws::Orientation::up()});
  }
  out.push_back({"unit sphere", flat, ws::catalog::euclidSphere(1.0).immersion, ws::Orientation::down()});
  out.push_back({"cylinder", flat, ws::catalog::cylinder(1.0).immersion, ws::Orientation::parametric(-1)});
  const std::vector<std::pair<std::string, ws::Profile>> profiles = {
      {"paraboloid", ws::Profile::paraboloid(0.5, 0.3, 0.1, 0.4)},
      {"cosine", ws::Profile::cosine(0.2, 0.1, 3.0, 0.1, 0.4)},
      {"spherical", ws::Profile::hemisphere(0.5, 0.0, 0.1, 0.4)}};
  const std::vector<ws::WarpFn> warps = {ws::WarpFn::constant(0.3), ws::WarpFn::affine(0.5, 0.1), kExpWarp};
  for (const auto& [pname, profile] : profiles) {
    for (const auto& w : warps) {
      for (int kappa : {-1, 0, 1}) {
        out.push_back({pname + " " + w.describe() + " k=" + std::to_string(kappa), ws::AmbientSpace(kappa, w),
                       ws::rotGraph(profile), ws::Orientation::down()});
      }
    }
  }
  return out;
}

// ------------------------------------------------------------------ criteria

Outcome compatibilitySuite() {
  const auto t0 = std::chrono::steady_clock::now();
  Ledger ledger;
  double worstExact = 0.0, worstFd = 0.0;
  for (const auto& s : compatSurfaces()) {
    ws::CompatOptions opt;
    opt.orientation = s.orientation;
    const auto exact = ws::evaluateCompat(s.space, s.immersion, ws::GridSpec{}, opt);
    const auto fd = ws::evaluateCompat(s.space, s.immersion.withFiniteDifferenceJets(), ws::GridSpec{}, opt);
    worstExact = std::max(worstExact, exact.worst());
    worstFd = std::max(worstFd, fd.worst());
    ledger.require(exact.worst() <= 1e-6, s.name + " exact " + sci(exact.worst()));
    ledger.require(fd.worst() <= 1e-4, s.name + " fd " + sci(fd.worst()));
  }
  const double t = seconds(t0);
  ledger.require(t <= 10.0, "runtime " + std::to_string(t) + " s");
  ledger.note("worst exact " + sci(worstExact) + ", worst fd " + sci(worstFd));
  return ledger.outcome();
}

Outcome algebraicIdentities() {
  Ledger ledger;
  double worst = 0.0;
  std::uint64_t seed = 2024;
  for (const auto& s : compatSurfaces()) {
    ws::GridSpec grid;
    grid.randomPoints = 500;
    grid.seed = seed++;
    ws::ResidualSet set;
    for (const auto& [u, v] : grid.points(s.immersion.domain())) {
      const ws::ImmersionJet jet = s.immersion.jetAt(u, v);
      set.merge(ws::checkLemma31(ws::complexify(ws::fundamentalData(s.space, jet, s.orientation), jet)));
    }
    const double w = set.worst();
    worst = std::max(worst, w);
    ledger.require(w <= 1e-8 && set.at("e4").points == 500, s.name + " " + sci(w));
  }
  ledger.note("worst " + sci(worst));
  return ledger.outcome();
}

ws::Profile solvedCap(ws::CapMode mode, double target, double apex) {
  ws::CapProblem p;
  p.mode = mode;
  p.target = target;
  p.space = ws::AmbientSpace(0, kExpWarp);
  p.apexHeight = apex;
  return ws::solvedProfile(p, ws::shootCap(p));
}

/// Identity residuals and step-halving orders on one chart.
void chartIdentities(Ledger& ledger, const std::string& name, const ws::ConformalChart& chart, double tol,
                     double& worst) {
  const bool second = chart.kind() == ws::ChartKind::ConformalII;
  const auto res = second ? ws::checkLemma32(chart) : ws::checkLemma33(chart);
  const auto orders = ws::convergenceOrders(chart, {}, 1e-2);
  double minOrder = INFINITY;
  for (const auto& label : ws::identityLabels(chart.kind())) {
    const double r = res.residuals.at(label).max;
    worst = std::max(worst, r);
    ledger.require(r <= tol, name + " " + label + " " + sci(r));
    const double o = orders.at(label);
    minOrder = std::min(minOrder, o);
    ledger.require(o >= 1.8, name + " order " + label + " " + std::to_string(o));
  }
  if (!second) {
    const double he5 = res.residuals.at("he5").max;
    ledger.require(he5 <= 1e-8, name + " he5 " + sci(he5));
  }
  ledger.note(name + " min order " + (std::isinf(minOrder) ? std::string("converged") : std::to_string(minOrder).substr(0, 4)));
}

Outcome chartLemma(ws::ChartKind kind) {
  Ledger ledger;
  double worst = 0.0;
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  chartIdentities(ledger, "sphere", ws::buildChart(flat, ws::Profile::hemisphere(1.0), kind), 1e-5, worst);
  const auto mode = kind == ws::ChartKind::ConformalII ? ws::CapMode::ExtrinsicK : ws::CapMode::CMC;
  const auto cap = solvedCap(mode, 1.0, 0.5);
  chartIdentities(ledger, "cap", ws::buildChart(ws::AmbientSpace(0, kExpWarp), cap, kind), 1e-3, worst);
  ledger.note("worst residual " + sci(worst));
  return ledger.outcome();
}

Outcome cmcEquality() {
  const auto t0 = std::chrono::steady_clock::now();
  ws::CapProblem p;
  p.mode = ws::CapMode::CMC;
  p.target = 1.0;
  p.apexHeight = 1.0;
  const auto cap = ws::shootCap(p);
  const auto v = ws::heightVerdict(cap, p);
  const double t = seconds(t0);
  Ledger ledger;
  ledger.require(cap.reachedBoundary(), "boundary not reached");
  ledger.require(std::abs(v.measuredHeight - 1.0) <= 1e-4, "height " + std::to_string(v.measuredHeight));
  ledger.require(std::abs(cap.boundaryRadius - 1.0) <= 1e-6, "radius " + std::to_string(cap.boundaryRadius));
  ledger.require(std::abs(v.bound - 1.0) <= 1e-15 && v.pass, "bound");
  ledger.require(t <= 1.0, "runtime " + std::to_string(t));
  char buf[96];
  std::snprintf(buf, sizeof buf, "height %.6f, radius %.8f, %.3f s", v.measuredHeight, cap.boundaryRadius, t);
  ledger.note(buf);
  return ledger.outcome();
}

Outcome keEquality() {
  Ledger ledger;
  for (double K : {1.0, 4.0}) {
    ws::CapProblem p;
    p.mode = ws::CapMode::ExtrinsicK;
    p.target = K;
    p.apexHeight = 1.0 / std::sqrt(K);
    const auto cap = ws::shootCap(p);
    const auto v = ws::heightVerdict(cap, p);
    const double expected = K == 1.0 ? 1.0 : 0.5;
    ledger.require(cap.reachedBoundary(), "K_e=" + std::to_string(K) + " boundary not reached");
    ledger.require(std::abs(v.measuredHeight - expected) <= 1e-4, "K_e=" + std::to_string(K) + " height");
    ledger.require(std::abs(v.measuredHeight - v.bound) <= 1e-4 && v.pass, "K_e=" + std::to_string(K) + " bound");
    char buf[64];
    std::snprintf(buf, sizeof buf, "K_e=%g height %.6f bound %.6f", K, v.measuredHeight, v.bound);
    ledger.note(buf);
  }
  return ledger.outcome();
}

std::vector<double> sweepHeights() {
  std::vector<double> h;
  for (int k = 1; k <= 10; ++k) h.push_back(0.27 * k);
  return h;
}

Outcome warpedSweep() {
  const auto t0 = std::chrono::steady_clock::now();
  Ledger ledger;
  const auto hyp = ws::checkWarpHypotheses(kExpWarp, 0.0, 2.7);
  ledger.require(hyp.all(), "warp hypotheses fail on [0, 2.7]");
  int reached = 0, total = 0;
  double minMargin = INFINITY;
  for (double H : {0.5, 1.0, 2.0}) {
    for (double h0 : sweepHeights()) {
      ws::CapProblem p;
      p.mode = ws::CapMode::CMC;
      p.target = H;
      p.space = ws::AmbientSpace(0, kExpWarp);
      p.apexHeight = h0;
      const auto cap = ws::shootCap(p);
      const auto v = ws::heightVerdict(cap, p);
      ++total;
      if (!cap.reachedBoundary()) continue;
      ++reached;
      const double bound = std::exp(1.0) / H;
      minMargin = std::min(minMargin, bound - v.measuredHeight);
      ledger.require(v.measuredHeight <= bound + 1e-8, "H=" + std::to_string(H) + " h0=" + std::to_string(h0));
    }
  }
  ledger.require(reached > 0, "no cap reached t = 0");
  const double t = seconds(t0);
  ledger.require(t <= 30.0, "runtime " + std::to_string(t));
  ledger.note(std::to_string(reached) + "/" + std::to_string(total) + " caps reach t = 0, min margin " + sci(minMargin));
  return ledger.outcome();
}

struct WitnessResult {
  std::string name;
  double minWitness = INFINITY;
  double maxDiff = 0.0;
  std::string error;
};

Outcome subharmonicWitnesses() {
  struct Job {
    ws::CapMode mode;
    double target, apex;
  };
  std::vector<Job> jobs;
  for (double H : {0.5, 1.0, 2.0})
    for (double h0 : sweepHeights()) jobs.push_back({ws::CapMode::CMC, H, h0});
  for (double K : {0.25, 1.0, 4.0})
    for (double h0 : sweepHeights()) jobs.push_back({ws::CapMode::ExtrinsicK, K, h0});

  auto runJob = [](const Job& j) {
    WitnessResult r;
    r.name = ws::toString(j.mode) + "=" + std::to_string(j.target).substr(0, 4) + " h0=" + std::to_string(j.apex).substr(0, 4);
    try {
      const ws::AmbientSpace space(0, kExpWarp);
      const ws::Profile profile = solvedCap(j.mode, j.target, j.apex);
      const bool ke = j.mode == ws::CapMode::ExtrinsicK;
      const auto chart = ws::buildChart(space, profile, ke ? ws::ChartKind::ConformalII : ws::ChartKind::IsothermalI);
      const auto rep = ke ? ws::checkAuxLaplacianKe(chart) : ws::checkAuxLaplacianH(chart);
      r.minWitness = rep.minWitness;
      r.maxDiff = rep.maxDiff;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  };

  std::vector<WitnessResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  for (unsigned i = 0; i < n; ++i) {
    pool.emplace_back([&] {
      for (std::size_t k; (k = next++) < jobs.size();) results[k] = runJob(jobs[k]);
    });
  }
  for (auto& t : pool) t.join();

  Ledger ledger;
  double worst = INFINITY, worstDiff = 0.0;
  for (const auto& r : results) {
    ledger.require(r.error.empty(), r.name + ": " + r.error);
    if (!r.error.empty()) continue;
    worst = std::min(worst, r.minWitness);
    worstDiff = std::max(worstDiff, r.maxDiff);
    ledger.require(r.minWitness >= -1e-6, r.name + " witness " + sci(r.minWitness));
  }
  ledger.note(std::to_string(results.size()) + " caps, min witness " + sci(worst) + ", max Laplacian mismatch " +
              sci(worstDiff));
  return ledger.outcome();
}

Outcome minimalRigidity() {
  Ledger ledger;
  const std::vector<double> apexes = {0.1, 0.5, 1.0};
  const auto linear = ws::minimalRigidityCheck(ws::AmbientSpace(0, ws::WarpFn::affine(1.0, 0.0)), apexes);
  ledger.require(linear.compactCaps == 0, "f=t: compact minimal caps found");
  ledger.require(linear.dichotomyHolds, "f=t: dichotomy fails");
  ledger.require(linear.verdict == "no such minimal surface", "f=t: verdict " + linear.verdict);
  const auto quad = ws::minimalRigidityCheck(ws::AmbientSpace(0, ws::WarpFn::quadratic(1.0, 0.0, 0.0)), apexes);
  ledger.require(quad.compactCaps == 0, "f=t^2: compact minimal caps found");
  ledger.require(quad.sliceIsSolution, "f=t^2: slice not a solution");
  ledger.require(quad.dichotomyHolds, "f=t^2: dichotomy fails");
  ledger.require(quad.verdict == "slice", "f=t^2: verdict " + quad.verdict);
  ledger.note("f=t: " + linear.verdict + ", f=t^2: " + quad.verdict);
  return ledger.outcome();
}

Outcome laplacianScaling() {
  std::mt19937_64 rng(20241016);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), pt(-0.5, 0.5);
  Ledger ledger;
  double worst = 0.0;
  for (int field = 0; field < 20; ++field) {
    // g = A(x)^T A(x) + 0.3 I with smoothly varying A, so g is SPD everywhere.
    std::array<double, 16> a;
    for (auto& v : a) v = coef(rng);
    const ws::MetricField g = [a](const ws::Vec2& x) {
      ws::Mat2 A;
      for (int i = 0; i < 4; ++i) A(i / 2, i % 2) = a[i] + 0.5 * a[4 + i] * std::sin(2 * a[8 + i] * x[0] + 2 * a[12 + i] * x[1]);
      return ws::Mat2(A.transpose() * A + 0.3 * ws::Mat2::Identity());
    };
    std::array<double, 4> b;
    for (auto& v : b) v = coef(rng);
    const ws::ScalarField u = [b](const ws::Vec2& x) {
      return std::sin(b[0] * x[0] + 1.0) * std::cos(b[1] * x[1]) + b[2] * x[0] * x[0] * x[1] + b[3] * std::exp(x[1]);
    };
    const ws::Vec2 x(pt(rng), pt(rng));
    for (double c : {0.1, 2.5, 10.0}) {
      const auto pair = ws::laplacianScaling(g, c, u, x);
      worst = std::max(worst, pair.diff());
      ledger.require(pair.diff() <= 1e-6, "field " + std::to_string(field) + " c=" + std::to_string(c));
    }
  }
  ledger.note("worst " + sci(worst));
  return ledger.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"compatibility equations on catalog surfaces", compatibilitySuite},
      {"algebraic identities at random points", algebraicIdentities},
      {"second-form chart identities", [] { return chartLemma(ws::ChartKind::ConformalII); }},
      {"isothermal chart identities", [] { return chartLemma(ws::ChartKind::IsothermalI); }},
      {"height bound equality, constant mean curvature", cmcEquality},
      {"height bound equality, constant extrinsic curvature", keEquality},
      {"height bound under f = e^-t", warpedSweep},
      {"subharmonic witnesses on solved caps", subharmonicWitnesses},
      {"minimal rigidity", minimalRigidity},
      {"Laplacian under constant rescaling", laplacianScaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu  %s  %s (%.2f s): %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds(t0), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
