#include "warpsurf/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "warpsurf/errors.hpp"
#include "warpsurf/quadrature.hpp"

namespace warpsurf {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI{0.0, 1.0};

Orientation flipped(Orientation o) {
  switch (o.kind) {
    case Orientation::Kind::Up: return Orientation::down();
    case Orientation::Kind::Down: return Orientation::up();
    case Orientation::Kind::Seed: return Orientation::towards(-o.seed);
    case Orientation::Kind::Parametric: return Orientation::parametric(-o.sign);
  }
  return o;
}

}  // namespace

std::string toString(ChartKind kind) { return kind == ChartKind::IsothermalI ? "IsothermalI" : "ConformalII"; }

// ---------------------------------------------------------------------------
// Chart construction

ConformalChart::ConformalChart(const AmbientSpace& space, Profile profile, ChartKind kind, ChartOptions options)
    : space_(space), profile_(std::move(profile)), kind_(kind), options_(options), orientation_(options.orientation) {
  const double span = profile_.rMax() - profile_.rMin();
  rLo_ = options_.rLo >= 0.0 ? options_.rLo : profile_.rMin() + 0.1 * span;
  rHi_ = options_.rHi >= 0.0 ? options_.rHi : profile_.rMax() - 0.02 * span;
  if (!(rLo_ > 0.0) || !(rHi_ > rLo_) || rLo_ < profile_.rMin() || rHi_ > profile_.rMax()) {
    fail(ErrorCode::BadInput, "chart radii must satisfy rMin <= rLo < rHi <= rMax with rLo > 0");
  }
  if (kind_ == ChartKind::ConformalII) {
    // Keep room for the radial difference quotient of sqrt(L/N).
    const double reach = 2.0 * options_.radialStep;
    rLo_ = std::max(rLo_, profile_.rMin() / (1.0 - reach));
    rHi_ = std::min(rHi_, profile_.rMax() / (1.0 + reach));
    const double rMid = 0.5 * (rLo_ + rHi_);
    const FundamentalData mid = fundamentalData(space_, radialJet(rMid, 0.0), orientation_);
    if (mid.II(0, 0) < 0.0) orientation_ = flipped(orientation_);
    constexpr int kProbe = 65;
    for (int i = 0; i < kProbe; ++i) {
      const double r = rLo_ + (rHi_ - rLo_) * i / (kProbe - 1);
      const FundamentalData fd = fundamentalData(space_, radialJet(r, 0.0), orientation_);
      if (!(fd.Ke > 0.0) || !(fd.II(0, 0) > 0.0) || !(fd.II(1, 1) > 0.0)) {
        std::ostringstream os;
        if (fd.Ke > 0.0) {
          os << "second form is negative definite at r = " << r << " but not at the chart orientation point";
        } else {
          os << "extrinsic curvature " << fd.Ke << " at r = " << r << " rules out a second-form chart";
        }
        fail(ErrorCode::NotPositivelyCurved, os.str());
      }
    }
  }

  // Tabulate r(s) by integrating dr/ds = 1/s'(r) inwards from s = 0 at rHi.
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 1>;
  ode::runge_kutta4<State> stepper;
  auto rhs = [this](const State& x, State& dxds, double) {
    if (!(x[0] >= profile_.rMin())) fail(ErrorCode::QuadratureFail, "inverse chart map left the profile range");
    dxds[0] = 1.0 / sPrime(x[0]);
  };
  const double ds = options_.tableStep / options_.substeps;
  std::vector<double> sNodes{0.0}, rNodes{rHi_};
  State x{rHi_};
  double s = 0.0;
  const std::size_t maxNodes = 2'000'000;
  while (rNodes.size() < maxNodes) {
    State next = x;
    double sn = s;
    for (int k = 0; k < options_.substeps; ++k) {
      stepper.do_step(rhs, next, sn, -ds);
      sn -= ds;
    }
    if (!std::isfinite(next[0])) fail(ErrorCode::QuadratureFail, "non-finite inverse chart map");
    if (next[0] < rLo_) break;
    x = next;
    s = sn;
    sNodes.push_back(s);
    rNodes.push_back(x[0]);
  }
  if (sNodes.size() < 3) fail(ErrorCode::QuadratureFail, "chart range too short for the inverse table");

  const std::size_t n = sNodes.size();
  std::vector<double> sx(n), ry(n), dr(n), d2r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = n - 1 - i;  // ascending in s
    const double r = rNodes[k];
    const double sp = sPrime(r);
    sx[i] = sNodes[k];
    ry[i] = r;
    dr[i] = 1.0 / sp;
    d2r[i] = -sSecond(r) / (sp * sp * sp);
  }
  sMin_ = sx.front();
  rLo_ = ry.front();
  inverse_ = std::make_shared<const QuinticHermite>(std::move(sx), std::move(ry), std::move(dr), std::move(d2r));
}

ConformalChart buildChart(const AmbientSpace& space, const Profile& profile, ChartKind kind,
                          const ChartOptions& options) {
  return ConformalChart(space, profile, kind, options);
}

ImmersionJet ConformalChart::radialJet(double r, double theta) const {
  const Jet1D u = profile_.at(r);
  const double c = std::cos(theta), s = std::sin(theta);
  ImmersionJet j;
  j.p = {u[0], r * c, r * s};
  j.d1[0] = {u[1], c, s};
  j.d1[1] = {0.0, -r * s, r * c};
  j.d2[0] = {u[2], 0.0, 0.0};
  j.d2[1] = {0.0, -s, c};
  j.d2[2] = {0.0, -r * c, -r * s};
  return j;
}

double ConformalChart::sPrime(double r) const {
  const FundamentalData fd = fundamentalData(space_, radialJet(r, 0.0), orientation_);
  if (kind_ == ChartKind::IsothermalI) return std::sqrt(fd.I(0, 0) / fd.I(1, 1));
  const double L = fd.II(0, 0), N = fd.II(1, 1);
  if (!(L > 0.0) || !(N > 0.0)) fail(ErrorCode::NotPositivelyCurved, "second form not positive definite");
  return std::sqrt(L / N);
}

double ConformalChart::sSecond(double r) const {
  if (kind_ == ChartKind::IsothermalI) {
    const ImmersionJet jet = radialJet(r, 0.0);
    const FundamentalData fd = fundamentalData(space_, jet, orientation_);
    const Christoffel2 gam = surfaceChristoffels(space_, jet);
    const Mat2& I = fd.I;
    // d_r g_rr = 2 Gamma_{rr,r}, d_r g_tt = 2 Gamma_{rt,t} (lowered symbols).
    const double dE = 2.0 * (I(0, 0) * gam[0](0, 0) + I(0, 1) * gam[1](0, 0));
    const double dG = 2.0 * (I(1, 0) * gam[0](0, 1) + I(1, 1) * gam[1](0, 1));
    const double sp = std::sqrt(I(0, 0) / I(1, 1));
    return 0.5 * sp * (dE / I(0, 0) - dG / I(1, 1));
  }
  // Fourth-order stencil with a step relative to r: s' grows like 1/r
  // towards the axis.
  const double h = options_.radialStep * r;
  return (sPrime(r - 2.0 * h) - 8.0 * sPrime(r - h) + 8.0 * sPrime(r + h) - sPrime(r + 2.0 * h)) / (12.0 * h);
}

double ConformalChart::sOf(double r) const {
  return adaptiveSimpson([this](double x) { return sPrime(x); }, rHi_, r, options_.quadTol);
}

double ConformalChart::rOf(double s) const {
  const double slack = 1e-12;
  if (s < sMin_ - slack || s > slack) {
    std::ostringstream os;
    os << "s = " << s << " outside chart range [" << sMin_ << ", 0]";
    fail(ErrorCode::OutOfDomain, os.str());
  }
  return inverse_->eval(s)[0];
}

ImmersionJet ConformalChart::jetAt(double s, double theta) const {
  const double r = rOf(s);
  const double sp = sPrime(r);
  const double rs = 1.0 / sp;
  const double rss = -sSecond(r) * rs * rs * rs;
  const ImmersionJet b = radialJet(r, theta);
  ImmersionJet j;
  j.p = b.p;
  j.d1[0] = rs * b.d1[0];
  j.d1[1] = b.d1[1];
  j.d2[0] = rs * rs * b.d2[0] + rss * b.d1[0];
  j.d2[1] = rs * b.d2[1];
  j.d2[2] = b.d2[2];
  return j;
}

Immersion ConformalChart::asImmersion() const {
  const ConformalChart self = *this;
  auto map = [self](double s, double th) -> Vec3 { return self.jetAt(s, th).p.toVector(); };
  auto jet = [self](double s, double th) { return self.jetAt(s, th); };
  return Immersion("chart:" + toString(kind_) + ":" + profile_.name(), map, {sMin_, 0.0, -kPi, kPi}, jet);
}

double chartDefect(const ConformalChart& chart, double s, double theta) {
  const ImmersionJet jet = chart.jetAt(s, theta);
  const ComplexFundData c = complexify(fundamentalData(chart.space(), jet, chart.orientation()), jet);
  if (chart.kind() == ChartKind::IsothermalI) return std::abs(c.E) / c.F;
  return std::abs(c.p) / c.rho;
}

ComplexChristoffels complexChristoffels(const AmbientSpace& space, const ImmersionJet& jet) {
  const Christoffel2 g = surfaceChristoffels(space, jet);
  auto v = [&](int i, int j) -> std::array<cd, 2> { return {cd(g[0](i, j)), cd(g[1](i, j))}; };
  const auto ss = v(0, 0), st = v(0, 1), tt = v(1, 1);
  std::array<cd, 2> zz, zzb, zbzb;
  for (int k = 0; k < 2; ++k) {
    zz[k] = 0.25 * (ss[k] - 2.0 * kI * st[k] - tt[k]);
    zzb[k] = 0.25 * (ss[k] + tt[k]);
    zbzb[k] = 0.25 * (ss[k] + 2.0 * kI * st[k] - tt[k]);
  }
  // V^s d_s + V^t d_t = (V^s + i V^t) d_z + (V^s - i V^t) d_zbar.
  auto first = [](const std::array<cd, 2>& w) { return w[0] + kI * w[1]; };
  auto second = [](const std::array<cd, 2>& w) { return w[0] - kI * w[1]; };
  return {first(zz), second(zz), first(zzb), second(zzb), first(zbzb), second(zbzb)};
}

ComplexChristoffels complexChristoffels(const ConformalChart& chart, double s, double theta) {
  return complexChristoffels(chart.space(), chart.jetAt(s, theta));
}

// ---------------------------------------------------------------------------
// Field stencils in chart coordinates

namespace {

struct Fields {
  double h = 0.0, nu = 0.0, rho = 0.0, Ke = 0.0, D = 0.0, F = 0.0, H = 0.0, lambda = 0.0, tNormSq = 0.0;
  double f = 0.0, fp = 0.0, fpp = 0.0, mixed = 0.0;
  cd E, alpha, hz, p;
};

Fields fieldsAt(const ConformalChart& chart, double s, double theta, double nuScale) {
  const ImmersionJet jet = chart.jetAt(s, theta);
  const FundamentalData fd = fundamentalData(chart.space(), jet, chart.orientation());
  const ComplexFundData c = complexify(fd, jet);
  const WarpFn& w = chart.space().warp();
  Fields out;
  out.h = fd.h();
  out.nu = fd.nu * nuScale;
  out.rho = c.rho;
  out.Ke = c.Ke;
  out.D = c.D;
  out.F = c.F;
  out.H = c.H;
  out.lambda = c.lambdaConf;
  out.tNormSq = c.tNormSq;
  out.f = w.eval(out.h);
  out.fp = w.d1(out.h);
  out.fpp = w.d2(out.h);
  out.mixed = chart.space().mixedCurvatureTerm(out.h);
  out.E = c.E;
  out.alpha = c.alpha;
  out.hz = c.hz;
  out.p = c.p;
  return out;
}

struct ZDerivs {
  cd z, zb;
};
struct Z2Derivs {
  cd zz, zzb;
};

class FieldStencil {
 public:
  FieldStencil(const ConformalChart& chart, double s, double theta, const LemmaOptions& o)
      : chart_(chart), s_(s), theta_(theta), opt_(o) {}

  const Fields& at(int i, int j) {
    const auto key = std::make_pair(i, j);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double d = opt_.fdStep;
    return cache_.emplace(key, fieldsAt(chart_, s_ + i * d, theta_ + j * d, opt_.nuScale)).first->second;
  }
  const Fields& centre() { return at(0, 0); }

  template <class Get>
  ZDerivs first(Get get) {
    auto diff = [&](int k, int axis) {
      const int di = axis == 0 ? k : 0, dj = axis == 0 ? 0 : k;
      return (cd(get(at(di, dj))) - cd(get(at(-di, -dj)))) / (2.0 * k * opt_.fdStep);
    };
    cd ds = diff(1, 0), dt = diff(1, 1);
    if (opt_.richardson) {
      ds = (4.0 * ds - diff(2, 0)) / 3.0;
      dt = (4.0 * dt - diff(2, 1)) / 3.0;
    }
    return {0.5 * (ds - kI * dt), 0.5 * (ds + kI * dt)};
  }

  template <class Get>
  Z2Derivs second(Get get) {
    const cd c = get(centre());
    auto pure = [&](int k, int axis) {
      const int di = axis == 0 ? k : 0, dj = axis == 0 ? 0 : k;
      const double h = k * opt_.fdStep;
      return (cd(get(at(di, dj))) - 2.0 * c + cd(get(at(-di, -dj)))) / (h * h);
    };
    auto mixed = [&](int k) {
      const double h = k * opt_.fdStep;
      return (cd(get(at(k, k))) - cd(get(at(k, -k))) - cd(get(at(-k, k))) + cd(get(at(-k, -k)))) / (4.0 * h * h);
    };
    cd ss = pure(1, 0), tt = pure(1, 1), st = mixed(1);
    if (opt_.richardson) {
      ss = (4.0 * ss - pure(2, 0)) / 3.0;
      tt = (4.0 * tt - pure(2, 1)) / 3.0;
      st = (4.0 * st - mixed(2)) / 3.0;
    }
    return {0.25 * (ss - tt - 2.0 * kI * st), 0.25 * (ss + tt)};
  }

 private:
  const ConformalChart& chart_;
  double s_, theta_;
  LemmaOptions opt_;
  std::map<std::pair<int, int>, Fields> cache_;
};

void requireKind(const ConformalChart& chart, ChartKind kind, const char* what) {
  if (chart.kind() != kind) fail(ErrorCode::BadInput, std::string(what) + " needs a " + toString(kind) + " chart");
}

}  // namespace

ResidualSet lemma32At(const ConformalChart& chart, double s, double theta, const LemmaOptions& options) {
  requireKind(chart, ChartKind::ConformalII, "second-form lemma");
  FieldStencil st(chart, s, theta, options);
  const Fields C = st.centre();
  if (!(C.Ke > 0.0)) fail(ErrorCode::NotPositivelyCurved, "extrinsic curvature must be positive");
  const ComplexChristoffels G = complexChristoffels(chart, s, theta);

  const cd hz = C.hz, hzb = std::conj(C.hz);
  const cd a = C.alpha, ab = std::conj(C.alpha);
  const double nu = C.nu, rho = C.rho, Ke = C.Ke, D = C.D, F = C.F, fp = C.fp, c = C.mixed;

  const ZDerivs rho1 = st.first([](const Fields& x) { return x.rho; });
  const ZDerivs ke1 = st.first([](const Fields& x) { return x.Ke; });
  const ZDerivs nu1 = st.first([](const Fields& x) { return x.nu; });
  const ZDerivs d1 = st.first([](const Fields& x) { return x.D; });
  const ZDerivs a1 = st.first([](const Fields& x) { return x.alpha; });
  const Z2Derivs h2 = st.second([](const Fields& x) { return x.h; });
  const Z2Derivs nu2 = st.second([](const Fields& x) { return x.nu; });

  const cd keTerm = (ke1.zb * hz + ke1.z * hzb) / (4.0 * Ke);
  const double hzAbs2 = std::norm(hz);
  const double tangential = 1.0 - nu * nu;

  ResidualSet r;
  r.add("e10", std::abs(rho1.zb / rho + (G.g112 - G.g222) - nu / rho * a * c));
  r.add("e11", std::abs(nu1.z - (ab * Ke / rho - fp * nu * hz)));
  r.add("e12", std::abs(G.g112 - (-ke1.zb / (4.0 * Ke) + nu * a * c / (2.0 * rho))));
  r.add("e12.1", std::abs(h2.zz - (G.g111 * hz + G.g211 * hzb + fp * C.E - fp * hz * hz)));
  r.add("e12.2", std::abs(G.g112 + G.g222 - d1.zb / (2.0 * D)));
  const cd e13Core = rho * nu * (1.0 - c * tangential / (2.0 * Ke)) - keTerm;
  r.add("e13", std::abs(h2.zzb - (e13Core + fp * (F - hzAbs2))));
  r.add("e13_stmt", std::abs(h2.zzb - (e13Core - fp * (F - hzAbs2))));
  r.add("e14", std::abs(a1.z - (a * d1.z / (2.0 * D) + (ab * ke1.zb - a * ke1.z) / (4.0 * Ke) - rho * F * nu -
                                fp * (a * hz - D))));
  r.add("e15", std::abs(nu2.zzb - ((ab * ke1.zb + a * ke1.z) / (4.0 * rho) - Ke * F * nu -
                                   Ke * fp * (a * hz - D) / rho - fp * (nu1.z * hzb + nu * h2.zzb) -
                                   C.fpp * nu * hzAbs2)));
  return r;
}

ResidualSet lemma33At(const ConformalChart& chart, double s, double theta, const LemmaOptions& options) {
  requireKind(chart, ChartKind::IsothermalI, "first-form lemma");
  FieldStencil st(chart, s, theta, options);
  const Fields C = st.centre();

  const cd hz = C.hz, hzb = std::conj(C.hz);
  const cd p = C.p;
  const double nu = C.nu, lam = C.lambda, H = C.H, fp = C.fp, c = C.mixed;
  const double hzAbs2 = std::norm(hz);

  const ZDerivs p1 = st.first([](const Fields& x) { return x.p; });
  const ZDerivs H1 = st.first([](const Fields& x) { return x.H; });
  const ZDerivs nu1 = st.first([](const Fields& x) { return x.nu; });
  const Z2Derivs h2 = st.second([](const Fields& x) { return x.h; });
  const Z2Derivs nu2 = st.second([](const Fields& x) { return x.nu; });

  ResidualSet r;
  r.add("he4", std::abs(p1.zb - (0.5 * lam * H1.z + 0.5 * lam * c * nu * hz)));
  r.add("he5", std::abs(C.tNormSq - 4.0 / lam * hzAbs2));
  r.add("he6", std::abs(nu1.z - (-H * hz - 2.0 * p / lam * hzb - fp * nu * hz)));
  r.add("he7", std::abs(h2.zzb - (nu * lam * H / 2.0 + fp * (lam / 2.0 - hzAbs2))));
  const cd bracket = c * (1.0 - nu * nu) + 8.0 * std::norm(p) / (lam * lam) + 2.0 * H * H;
  const cd warpTerm = fp * (2.0 * p / lam * hzb * hzb - H * (lam / 2.0 - hzAbs2) - (nu1.zb * hz + nu * h2.zzb));
  r.add("he8", std::abs(nu2.zzb - (-(H1.zb * hz + H1.z * hzb) - lam * nu / 4.0 * bracket + warpTerm -
                                   C.fpp * nu * hzAbs2)));
  return r;
}

std::vector<std::array<double, 2>> ChartGrid::points(const ConformalChart& chart) const {
  if (ns < 1 || ntheta < 1) fail(ErrorCode::BadInput, "chart grid needs at least one point per axis");
  const double span = chart.sMax() - chart.sMin();
  const double a0 = chart.sMin() + marginFraction * span, a1 = chart.sMax() - marginFraction * span;
  if (!(a1 > a0)) fail(ErrorCode::BadInput, "chart grid margin leaves no interior");
  std::vector<std::array<double, 2>> out;
  for (int i = 0; i < ns; ++i) {
    const double s = ns == 1 ? 0.5 * (a0 + a1) : a0 + (a1 - a0) * i / (ns - 1);
    for (int j = 0; j < ntheta; ++j) {
      const double th = ntheta == 1 ? 0.0 : -0.5 * kPi + kPi * j / (ntheta - 1);
      out.push_back({s, th});
    }
  }
  return out;
}

namespace {

LemmaResiduals gridResiduals(const ConformalChart& chart, const ChartGrid& grid, const LemmaOptions& options,
                             ResidualSet (*at)(const ConformalChart&, double, double, const LemmaOptions&)) {
  LemmaResiduals out;
  out.kind = chart.kind();
  out.fdStep = options.fdStep;
  out.richardson = options.richardson;
  for (const auto& [s, th] : grid.points(chart)) {
    out.residuals.merge(at(chart, s, th, options));
    ++out.points;
  }
  return out;
}

}  // namespace

LemmaResiduals checkLemma32(const ConformalChart& chart, const ChartGrid& grid, const LemmaOptions& options) {
  requireKind(chart, ChartKind::ConformalII, "second-form lemma");
  return gridResiduals(chart, grid, options, &lemma32At);
}

LemmaResiduals checkLemma33(const ConformalChart& chart, const ChartGrid& grid, const LemmaOptions& options) {
  requireKind(chart, ChartKind::IsothermalI, "first-form lemma");
  return gridResiduals(chart, grid, options, &lemma33At);
}

std::vector<std::string> identityLabels(ChartKind kind) {
  if (kind == ChartKind::ConformalII) return {"e10", "e11", "e12", "e12.1", "e12.2", "e13", "e14", "e15"};
  return {"he4", "he5", "he6", "he7", "he8"};
}

std::map<std::string, double> convergenceOrders(const ConformalChart& chart, const ChartGrid& grid, double step,
                                                double noiseFloor) {
  LemmaOptions coarse;
  coarse.fdStep = step;
  coarse.richardson = false;
  LemmaOptions fine = coarse;
  fine.fdStep = 0.5 * step;
  const bool second = chart.kind() == ChartKind::ConformalII;
  const LemmaResiduals a = second ? checkLemma32(chart, grid, coarse) : checkLemma33(chart, grid, coarse);
  const LemmaResiduals b = second ? checkLemma32(chart, grid, fine) : checkLemma33(chart, grid, fine);
  std::map<std::string, double> orders;
  for (const auto& label : identityLabels(chart.kind())) {
    const double r1 = a.residuals.at(label).max, r2 = b.residuals.at(label).max;
    orders[label] = r2 < noiseFloor ? std::numeric_limits<double>::infinity() : std::log2(r1 / r2);
  }
  return orders;
}

// ---------------------------------------------------------------------------
// Auxiliary Laplacians

LaplacianPair auxLaplacianKe(const ConformalChart& chart, double s, double theta, double Ke0,
                             const LemmaOptions& options) {
  requireKind(chart, ChartKind::ConformalII, "auxiliary Laplacian (extrinsic curvature)");
  if (!(Ke0 > 0.0)) fail(ErrorCode::NotPositivelyCurved, "extrinsic curvature constant must be positive");
  FieldStencil st(chart, s, theta, options);
  const Fields C = st.centre();
  if (std::abs(C.Ke - Ke0) > options.constancyTol * Ke0) {
    fail(ErrorCode::NotConstantKe, "extrinsic curvature deviates from the declared constant");
  }
  const double root = std::sqrt(Ke0);
  const Z2Derivs g2 = st.second([root](const Fields& x) { return std::exp(x.f) * x.nu / root; });
  LaplacianPair out;
  out.lhs = g2.zzb.real();
  out.rhs = std::exp(C.f) / root * (-Ke0 * C.F * C.nu + Ke0 * C.fp * C.D / C.rho);
  return out;
}

LaplacianPair auxLaplacianH(const ConformalChart& chart, double s, double theta, double H0,
                            const LemmaOptions& options) {
  requireKind(chart, ChartKind::IsothermalI, "auxiliary Laplacian (mean curvature)");
  if (!(H0 > 0.0)) fail(ErrorCode::NotConstantH, "mean curvature constant must be positive");
  FieldStencil st(chart, s, theta, options);
  const Fields C = st.centre();
  if (std::abs(C.H - H0) > options.constancyTol * H0) {
    fail(ErrorCode::NotConstantH, "mean curvature deviates from the declared constant");
  }
  const Z2Derivs g2 = st.second([H0](const Fields& x) { return std::exp(x.f) * x.nu / H0; });
  const double lam = C.lambda, nu = C.nu;
  const double bracket = C.mixed * (1.0 - nu * nu) + 8.0 * std::norm(C.p) / (lam * lam) + 2.0 * H0 * H0;
  LaplacianPair out;
  out.lhs = g2.zzb.real();
  out.rhs = std::exp(C.f) / H0 * (-lam * nu / 4.0 * bracket - C.fp * H0 * lam / 2.0);
  return out;
}

LaplacianPair minimalIdentity(const ConformalChart& chart, double s, double theta, const LemmaOptions& options) {
  requireKind(chart, ChartKind::IsothermalI, "minimal identity");
  FieldStencil st(chart, s, theta, options);
  const Fields C = st.centre();
  if (std::abs(C.H) > 1e-8) fail(ErrorCode::NotMinimal, "mean curvature does not vanish");
  const Z2Derivs h2 = st.second([](const Fields& x) { return x.h; });
  return {h2.zzb.real(), C.fp * C.lambda * (1.0 + C.nu * C.nu) / 4.0};
}

namespace {

struct Spread {
  double mean = 0.0, rel = 0.0;
};

Spread curvatureSpread(const ConformalChart& chart, const std::vector<std::array<double, 2>>& pts, bool useKe) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (const auto& [s, th] : pts) {
    const ImmersionJet jet = chart.jetAt(s, th);
    const FundamentalData fd = fundamentalData(chart.space(), jet, chart.orientation());
    const double v = useKe ? fd.Ke : fd.H;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  Spread out;
  out.mean = sum / static_cast<double>(pts.size());
  out.rel = (hi - lo) / std::max(std::abs(out.mean), std::numeric_limits<double>::min());
  return out;
}

}  // namespace

AuxLaplacianReport checkAuxLaplacianKe(const ConformalChart& chart, const ChartGrid& grid,
                                       const LemmaOptions& options) {
  requireKind(chart, ChartKind::ConformalII, "auxiliary Laplacian (extrinsic curvature)");
  const auto pts = grid.points(chart);
  const Spread sp = curvatureSpread(chart, pts, true);
  if (sp.rel > options.constancyTol) {
    std::ostringstream os;
    os << "relative spread " << sp.rel << " of the extrinsic curvature exceeds " << options.constancyTol;
    fail(ErrorCode::NotConstantKe, os.str());
  }
  AuxLaplacianReport rep{"eq16g", sp.mean, sp.rel, 0.0, std::numeric_limits<double>::infinity(), 0};
  LemmaOptions o = options;
  o.constancyTol = std::max(options.constancyTol, 2.0 * sp.rel);
  const double root = std::sqrt(sp.mean);
  for (const auto& [s, th] : pts) {
    const LaplacianPair pr = auxLaplacianKe(chart, s, th, sp.mean, o);
    rep.maxDiff = std::max(rep.maxDiff, pr.diff());
    FieldStencil st(chart, s, th, options);
    const Z2Derivs w = st.second([root](const Fields& x) { return x.h + std::exp(x.f) * x.nu / root; });
    rep.minWitness = std::min(rep.minWitness, 4.0 / st.centre().rho * w.zzb.real());
    ++rep.points;
  }
  return rep;
}

AuxLaplacianReport checkAuxLaplacianH(const ConformalChart& chart, const ChartGrid& grid,
                                      const LemmaOptions& options) {
  requireKind(chart, ChartKind::IsothermalI, "auxiliary Laplacian (mean curvature)");
  const auto pts = grid.points(chart);
  const Spread sp = curvatureSpread(chart, pts, false);
  if (sp.rel > options.constancyTol) {
    std::ostringstream os;
    os << "relative spread " << sp.rel << " of the mean curvature exceeds " << options.constancyTol;
    fail(ErrorCode::NotConstantH, os.str());
  }
  AuxLaplacianReport rep{"eqle2", sp.mean, sp.rel, 0.0, std::numeric_limits<double>::infinity(), 0};
  LemmaOptions o = options;
  o.constancyTol = std::max(options.constancyTol, 2.0 * sp.rel);
  const double H0 = sp.mean;
  for (const auto& [s, th] : pts) {
    const LaplacianPair pr = auxLaplacianH(chart, s, th, H0, o);
    rep.maxDiff = std::max(rep.maxDiff, pr.diff());
    FieldStencil st(chart, s, th, options);
    const Z2Derivs w = st.second([H0](const Fields& x) { return x.h + std::exp(x.f) * x.nu / H0; });
    rep.minWitness = std::min(rep.minWitness, 4.0 / st.centre().lambda * w.zzb.real());
    ++rep.points;
  }
  return rep;
}

AuxLaplacianReport checkMinimalIdentity(const ConformalChart& chart, const ChartGrid& grid,
                                        const LemmaOptions& options) {
  AuxLaplacianReport rep{"minimalLaplacian", 0.0, 0.0, 0.0, std::numeric_limits<double>::infinity(), 0};
  for (const auto& [s, th] : grid.points(chart)) {
    const LaplacianPair pr = minimalIdentity(chart, s, th, options);
    rep.maxDiff = std::max(rep.maxDiff, pr.diff());
    rep.minWitness = std::min(rep.minWitness, pr.lhs);
    ++rep.points;
  }
  return rep;
}

}  // namespace warpsurf
