#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "warpsurf/ambient.hpp"
#include "warpsurf/spline.hpp"

namespace warpsurf {

/// Position plus first and second coordinate partials of a parametrized
/// surface at one parameter point. Vectors are (t, x, y) components.
struct ImmersionJet {
  AmbientPoint p;
  std::array<Vec3, 2> d1;  // d_u, d_v
  std::array<Vec3, 3> d2;  // d_uu, d_uv, d_vv

  const Vec3& second(int i, int j) const { return d2[static_cast<std::size_t>(i + j)]; }
};

struct ParamDomain {
  double u0 = 0.0;
  double u1 = 1.0;
  double v0 = 0.0;
  double v1 = 1.0;

  bool containsInterior(double u, double v, double margin = 0.0) const {
    return u - margin > u0 && u + margin < u1 && v - margin > v0 && v + margin < v1;
  }
};

enum class JetMode { Exact, FiniteDifference };

class Immersion {
 public:
  using MapFn = std::function<Vec3(double, double)>;
  using JetFn = std::function<ImmersionJet(double, double)>;

  static constexpr double kDefaultFdStep = 1e-4;

  Immersion(std::string name, MapFn map, ParamDomain domain, JetFn exactJet = {});

  const std::string& name() const { return name_; }
  const ParamDomain& domain() const { return domain_; }
  JetMode jetMode() const { return mode_; }
  double fdStep() const { return fdStep_; }
  bool hasExactJets() const { return static_cast<bool>(exact_); }

  Vec3 map(double u, double v) const { return map_(u, v); }

  /// Throws OutOfDomain outside the open parameter rectangle (FD mode needs a
  /// margin of two steps) and DegenerateJet when d_u, d_v are dependent.
  ImmersionJet jetAt(double u, double v) const;

  Immersion withFiniteDifferenceJets(double step = kDefaultFdStep) const;
  Immersion withExactJets() const;
  Immersion withDomain(ParamDomain domain) const;

 private:
  ImmersionJet finiteDifferenceJet(double u, double v) const;

  std::string name_;
  MapFn map_;
  ParamDomain domain_;
  JetFn exact_;
  JetMode mode_ = JetMode::Exact;
  double fdStep_ = kDefaultFdStep;
};

/// Radial profile t = u(r) of a rotational graph with derivatives up to u'''.
class Profile {
 public:
  using Fn = std::function<Jet1D(double)>;

  Profile(std::string name, Fn fn, double rMin, double rMax);

  /// [u, u', u'', u'''] at r.
  Jet1D at(double r) const;
  double rMin() const { return rMin_; }
  double rMax() const { return rMax_; }
  const std::string& name() const { return name_; }

  static Profile constant(double c, double rMin = 0.0, double rMax = 1.0);
  /// u = a - b r^2.
  static Profile paraboloid(double a, double b, double rMin = 0.0, double rMax = 1.0);
  /// Upper hemisphere u = t0 + sqrt(R^2 - r^2) (round only for f == 0).
  static Profile hemisphere(double R, double t0 = 0.0, double rMin = 0.0, double rMax = -1.0);
  /// Upper sheet of the catenoid r = c cosh((u - t0)/c).
  static Profile catenoid(double c, double t0 = 0.0, double rMin = -1.0, double rMax = -1.0);
  /// u = a + b cos(w r).
  static Profile cosine(double a, double b, double w, double rMin = 0.0, double rMax = 1.0);
  static Profile fromSpline(std::shared_ptr<const CubicSpline> spline, double rMin, double rMax);
  static Profile fromQuintic(std::shared_ptr<const QuinticHermite> q, double rMin, double rMax,
                             std::string name = "solved");

 private:
  std::string name_;
  Fn fn_;
  double rMin_;
  double rMax_;
};

/// phi(r, theta) = (u(r), r cos theta, r sin theta); exact jets from the profile.
Immersion rotGraph(const Profile& profile);

/// Rotational graph through sampled (r, u) pairs using a not-a-knot cubic
/// spline. The first and last samples are excluded from the parameter domain.
/// Throws BadInput on length mismatch, fewer than 4 samples, or a
/// non-increasing grid.
Immersion rotGraphFromSamples(const std::vector<double>& rGrid, const std::vector<double>& uValues);
Profile profileFromSamples(const std::vector<double>& rGrid, const std::vector<double>& uValues);

/// Closed-form oracles attached to catalog surfaces. They are valid only in
/// the ambient named in `validIn` and for the orientation named there.
struct SurfaceOracle {
  std::function<double(double, double)> meanCurvature;
  std::function<double(double, double)> extrinsicCurvature;
  std::function<double(double, double)> angle;
  std::string validIn;
};

struct TestSurface {
  Immersion immersion;
  std::optional<SurfaceOracle> oracle;
};

namespace catalog {

/// phi(u, v) = (t0, u, v).
TestSurface slice(double t0, const WarpFn& warp = {}, ParamDomain domain = {-0.5, 0.5, -0.5, 0.5});
/// Round sphere of radius R centred at (t0, 0, 0) in the upper-cap graph
/// chart phi(u, v) = (t0 + sqrt(R^2 - u^2 - v^2), s u, s v), s = e^{-c}, for
/// the constant warp f == c and kappa = 0.
TestSurface euclidSphere(double R, double t0 = 0.0, double warpConst = 0.0);
/// phi(u, v) = (v, s R cos u, s R sin u), s = e^{-c}; right circular
/// cylinder around the t-axis for f == c, kappa = 0.
TestSurface cylinder(double R, double warpConst = 0.0);
TestSurface rotationalGraph(const Profile& profile);

}  // namespace catalog

struct ProfileSamples {
  std::vector<double> r;
  std::vector<double> u;
};

/// Two-column (r,u) CSV with a one-line header. Extra columns are ignored on read.
ProfileSamples readProfileCsv(std::istream& in);
ProfileSamples readProfileCsv(const std::string& path);
void writeProfileCsv(std::ostream& out, const ProfileSamples& samples);

}  // namespace warpsurf
