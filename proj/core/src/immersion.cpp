#include "warpsurf/immersion.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "warpsurf/errors.hpp"

namespace warpsurf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGramFloor = 1e-12;

bool allFinite(const ImmersionJet& jet) {
  if (!jet.p.toVector().allFinite()) return false;
  for (const auto& v : jet.d1) {
    if (!v.allFinite()) return false;
  }
  for (const auto& v : jet.d2) {
    if (!v.allFinite()) return false;
  }
  return true;
}

std::string where(double u, double v) {
  std::ostringstream os;
  os << "(" << u << ", " << v << ")";
  return os.str();
}

}  // namespace

Immersion::Immersion(std::string name, MapFn map, ParamDomain domain, JetFn exactJet)
    : name_(std::move(name)), map_(std::move(map)), domain_(domain), exact_(std::move(exactJet)) {
  if (!map_) fail(ErrorCode::BadInput, "immersion needs a map");
  if (!(domain_.u1 > domain_.u0) || !(domain_.v1 > domain_.v0)) {
    fail(ErrorCode::BadInput, "empty parameter domain");
  }
  mode_ = exact_ ? JetMode::Exact : JetMode::FiniteDifference;
}

ImmersionJet Immersion::jetAt(double u, double v) const {
  ImmersionJet jet;
  if (mode_ == JetMode::Exact) {
    if (!domain_.containsInterior(u, v)) fail(ErrorCode::OutOfDomain, name_ + " at " + where(u, v));
    jet = exact_(u, v);
  } else {
    if (!domain_.containsInterior(u, v, 2.0 * fdStep_)) {
      fail(ErrorCode::OutOfDomain, name_ + " at " + where(u, v) + " lacks the finite-difference margin");
    }
    jet = finiteDifferenceJet(u, v);
  }
  if (!allFinite(jet)) fail(ErrorCode::DegenerateJet, "non-finite jet on " + name_ + " at " + where(u, v));
  const Vec3& a = jet.d1[0];
  const Vec3& b = jet.d1[1];
  const double gram = a.squaredNorm() * b.squaredNorm() - a.dot(b) * a.dot(b);
  if (!(gram > kGramFloor)) {
    fail(ErrorCode::DegenerateJet, "dependent first partials on " + name_ + " at " + where(u, v));
  }
  return jet;
}

ImmersionJet Immersion::finiteDifferenceJet(double u, double v) const {
  const double h = fdStep_;
  const Vec3 c = map_(u, v);
  const Vec3 up = map_(u + h, v), um = map_(u - h, v);
  const Vec3 vp = map_(u, v + h), vm = map_(u, v - h);
  const Vec3 pp = map_(u + h, v + h), pm = map_(u + h, v - h);
  const Vec3 mp = map_(u - h, v + h), mm = map_(u - h, v - h);
  ImmersionJet jet;
  jet.p = AmbientPoint::fromVector(c);
  jet.d1[0] = (up - um) / (2.0 * h);
  jet.d1[1] = (vp - vm) / (2.0 * h);
  jet.d2[0] = (up - 2.0 * c + um) / (h * h);
  jet.d2[1] = (pp - pm - mp + mm) / (4.0 * h * h);
  jet.d2[2] = (vp - 2.0 * c + vm) / (h * h);
  return jet;
}

Immersion Immersion::withFiniteDifferenceJets(double step) const {
  if (!(step > 0.0)) fail(ErrorCode::BadInput, "finite-difference step must be positive");
  Immersion copy = *this;
  copy.mode_ = JetMode::FiniteDifference;
  copy.fdStep_ = step;
  return copy;
}

Immersion Immersion::withExactJets() const {
  if (!exact_) fail(ErrorCode::BadInput, name_ + " has no closed-form jets");
  Immersion copy = *this;
  copy.mode_ = JetMode::Exact;
  return copy;
}

Immersion Immersion::withDomain(ParamDomain domain) const {
  Immersion copy = *this;
  copy.domain_ = domain;
  return copy;
}

// ---------------------------------------------------------------------------

Profile::Profile(std::string name, Fn fn, double rMin, double rMax)
    : name_(std::move(name)), fn_(std::move(fn)), rMin_(rMin), rMax_(rMax) {
  if (!fn_) fail(ErrorCode::BadInput, "profile needs a function");
  if (!(rMax_ > rMin_) || rMin_ < 0.0) fail(ErrorCode::BadInput, "profile range must satisfy 0 <= rMin < rMax");
}

Jet1D Profile::at(double r) const {
  const double slack = 1e-12 * (1.0 + rMax_);
  if (r < rMin_ - slack || r > rMax_ + slack) {
    std::ostringstream os;
    os << "r = " << r << " outside profile " << name_ << " range [" << rMin_ << ", " << rMax_ << "]";
    fail(ErrorCode::OutOfDomain, os.str());
  }
  return fn_(r);
}

Profile Profile::constant(double c, double rMin, double rMax) {
  return Profile("constant", [c](double) { return Jet1D{c, 0.0, 0.0, 0.0}; }, rMin, rMax);
}

Profile Profile::paraboloid(double a, double b, double rMin, double rMax) {
  return Profile(
      "paraboloid", [a, b](double r) { return Jet1D{a - b * r * r, -2.0 * b * r, -2.0 * b, 0.0}; }, rMin,
      rMax);
}

Profile Profile::hemisphere(double R, double t0, double rMin, double rMax) {
  if (!(R > 0.0)) fail(ErrorCode::BadInput, "hemisphere radius must be positive");
  if (rMax < 0.0) rMax = 0.9 * R;
  if (rMax >= R) fail(ErrorCode::BadInput, "hemisphere profile must stay inside r < R");
  return Profile(
      "hemisphere",
      [R, t0](double r) {
        const double q = std::sqrt(R * R - r * r);
        const double q3 = q * q * q;
        return Jet1D{t0 + q, -r / q, -R * R / q3, -3.0 * R * R * r / (q3 * q * q)};
      },
      rMin, rMax);
}

Profile Profile::catenoid(double c, double t0, double rMin, double rMax) {
  if (!(c > 0.0)) fail(ErrorCode::BadInput, "catenoid neck must be positive");
  if (rMin < 0.0) rMin = 1.1 * c;
  if (rMax < 0.0) rMax = 3.0 * c;
  if (!(rMin > c)) fail(ErrorCode::BadInput, "catenoid graph needs r > neck radius");
  return Profile(
      "catenoid",
      [c, t0](double r) {
        const double w = r * r - c * c;
        const double sw = std::sqrt(w);
        return Jet1D{t0 + c * std::acosh(r / c), c / sw, -c * r / (w * sw),
                     c * (2.0 * r * r + c * c) / (w * w * sw)};
      },
      rMin, rMax);
}

Profile Profile::cosine(double a, double b, double w, double rMin, double rMax) {
  return Profile(
      "cosine",
      [a, b, w](double r) {
        const double cs = std::cos(w * r), sn = std::sin(w * r);
        return Jet1D{a + b * cs, -b * w * sn, -b * w * w * cs, b * w * w * w * sn};
      },
      rMin, rMax);
}

Profile Profile::fromSpline(std::shared_ptr<const CubicSpline> spline, double rMin, double rMax) {
  if (!spline) fail(ErrorCode::BadInput, "null spline");
  return Profile("spline", [s = std::move(spline)](double r) { return s->eval(r); }, rMin, rMax);
}

Profile Profile::fromQuintic(std::shared_ptr<const QuinticHermite> q, double rMin, double rMax,
                             std::string name) {
  if (!q) fail(ErrorCode::BadInput, "null interpolant");
  return Profile(std::move(name), [q = std::move(q)](double r) { return q->eval(r); }, rMin, rMax);
}

Immersion rotGraph(const Profile& profile) {
  auto map = [profile](double r, double th) -> Vec3 {
    return {profile.at(r)[0], r * std::cos(th), r * std::sin(th)};
  };
  auto jet = [profile](double r, double th) {
    const Jet1D u = profile.at(r);
    const double c = std::cos(th), s = std::sin(th);
    ImmersionJet j;
    j.p = {u[0], r * c, r * s};
    j.d1[0] = {u[1], c, s};
    j.d1[1] = {0.0, -r * s, r * c};
    j.d2[0] = {u[2], 0.0, 0.0};
    j.d2[1] = {0.0, -s, c};
    j.d2[2] = {0.0, -r * c, -r * s};
    return j;
  };
  return Immersion("rotgraph:" + profile.name(), map, {profile.rMin(), profile.rMax(), -kPi, kPi}, jet);
}

Profile profileFromSamples(const std::vector<double>& rGrid, const std::vector<double>& uValues) {
  auto spline = std::make_shared<const CubicSpline>(rGrid, uValues);
  if (rGrid.front() < 0.0) fail(ErrorCode::BadInput, "radii must be nonnegative");
  return Profile::fromSpline(spline, rGrid[1], rGrid[rGrid.size() - 2]);
}

Immersion rotGraphFromSamples(const std::vector<double>& rGrid, const std::vector<double>& uValues) {
  return rotGraph(profileFromSamples(rGrid, uValues));
}

namespace catalog {

TestSurface slice(double t0, const WarpFn& warp, ParamDomain domain) {
  auto map = [t0](double u, double v) -> Vec3 { return {t0, u, v}; };
  auto jet = [t0](double u, double v) {
    ImmersionJet j;
    j.p = {t0, u, v};
    j.d1[0] = {0.0, 1.0, 0.0};
    j.d1[1] = {0.0, 0.0, 1.0};
    j.d2.fill(Vec3::Zero());
    return j;
  };
  // With the upward normal d_t the shape operator is -f'(t0) id.
  const double fp = warp.d1(t0);
  SurfaceOracle oracle{[fp](double, double) { return -fp; }, [fp](double, double) { return fp * fp; },
                       [](double, double) { return 1.0; }, "any kappa, orientation Up"};
  return {Immersion("slice", map, domain, jet), oracle};
}

TestSurface euclidSphere(double R, double t0, double warpConst) {
  if (!(R > 0.0)) fail(ErrorCode::BadInput, "sphere radius must be positive");
  const double s = std::exp(-warpConst);
  auto map = [R, t0, s](double u, double v) -> Vec3 {
    return {t0 + std::sqrt(R * R - u * u - v * v), s * u, s * v};
  };
  auto jet = [R, t0, s](double u, double v) {
    const double q = std::sqrt(R * R - u * u - v * v);
    const double q3 = q * q * q;
    ImmersionJet j;
    j.p = {t0 + q, s * u, s * v};
    j.d1[0] = {-u / q, s, 0.0};
    j.d1[1] = {-v / q, 0.0, s};
    j.d2[0] = {-(R * R - v * v) / q3, 0.0, 0.0};
    j.d2[1] = {-u * v / q3, 0.0, 0.0};
    j.d2[2] = {-(R * R - u * u) / q3, 0.0, 0.0};
    return j;
  };
  SurfaceOracle oracle{[R](double, double) { return 1.0 / R; }, [R](double, double) { return 1.0 / (R * R); },
                       [R](double u, double v) { return -std::sqrt(R * R - u * u - v * v) / R; },
                       "kappa = 0, constant warp, orientation Down (inward)"};
  const double a = 0.6 * R;
  return {Immersion("sphere", map, {-a, a, -a, a}, jet), oracle};
}

TestSurface cylinder(double R, double warpConst) {
  if (!(R > 0.0)) fail(ErrorCode::BadInput, "cylinder radius must be positive");
  const double sR = std::exp(-warpConst) * R;
  auto map = [sR](double u, double v) -> Vec3 { return {v, sR * std::cos(u), sR * std::sin(u)}; };
  auto jet = [sR](double u, double v) {
    const double c = std::cos(u), s = std::sin(u);
    ImmersionJet j;
    j.p = {v, sR * c, sR * s};
    j.d1[0] = {0.0, -sR * s, sR * c};
    j.d1[1] = {1.0, 0.0, 0.0};
    j.d2[0] = {0.0, -sR * c, -sR * s};
    j.d2[1] = Vec3::Zero();
    j.d2[2] = Vec3::Zero();
    return j;
  };
  SurfaceOracle oracle{[R](double, double) { return 0.5 / R; }, [](double, double) { return 0.0; },
                       [](double, double) { return 0.0; },
                       "kappa = 0, constant warp, inward normal (parametric sign -1)"};
  return {Immersion("cylinder", map, {-kPi, kPi, -1.0, 1.0}, jet), oracle};
}

TestSurface rotationalGraph(const Profile& profile) { return {rotGraph(profile), std::nullopt}; }

}  // namespace catalog

ProfileSamples readProfileCsv(std::istream& in) {
  ProfileSamples out;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::BadInput, "empty profile CSV");
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) {
      fail(ErrorCode::BadInput, "profile CSV line " + std::to_string(lineNo) + " needs two columns");
    }
    try {
      std::size_t used = 0;
      out.r.push_back(std::stod(a, &used));
      out.u.push_back(std::stod(b, &used));
    } catch (const std::exception&) {
      fail(ErrorCode::BadInput, "profile CSV line " + std::to_string(lineNo) + " is not numeric");
    }
  }
  return out;
}

ProfileSamples readProfileCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadInput, "cannot open profile CSV " + path);
  return readProfileCsv(in);
}

void writeProfileCsv(std::ostream& out, const ProfileSamples& samples) {
  if (samples.r.size() != samples.u.size()) fail(ErrorCode::BadInput, "sample length mismatch");
  out << "r,u\n" << std::setprecision(17);
  for (std::size_t i = 0; i < samples.r.size(); ++i) out << samples.r[i] << ',' << samples.u[i] << '\n';
}

}  // namespace warpsurf
