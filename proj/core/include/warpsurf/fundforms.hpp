#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "warpsurf/ambient.hpp"
#include "warpsurf/immersion.hpp"

namespace warpsurf {

using cd = std::complex<double>;

/// How the unit normal is chosen.
///  Up / Down     sign of the angle function nu (ambiguous when nu ~ 0).
///  Seed          ambient vector the normal must point towards.
///  Parametric    +1 keeps the direction of d_u x d_v (raised by the metric), -1 flips it.
struct Orientation {
  enum class Kind { Up, Down, Seed, Parametric };

  Kind kind = Kind::Down;
  Vec3 seed = Vec3::Zero();
  int sign = 1;

  static Orientation up() { return {Kind::Up, Vec3::Zero(), 1}; }
  static Orientation down() { return {Kind::Down, Vec3::Zero(), 1}; }
  static Orientation towards(const Vec3& v) { return {Kind::Seed, v, 1}; }
  static Orientation parametric(int sign) { return {Kind::Parametric, Vec3::Zero(), sign >= 0 ? 1 : -1}; }

  std::string describe() const;
};

struct FundamentalData {
  AmbientPoint p;
  Mat2 I;        // E_r, F_r, G_r
  Mat2 II;       // L, M, N
  Mat2 S;        // I^{-1} II
  double H = 0.0;
  double Ke = 0.0;
  Vec3 normal = Vec3::Zero();
  double nu = 0.0;
  Vec2 T = Vec2::Zero();      // components against d_u, d_v
  Vec2 gradH = Vec2::Zero();  // (h_u, h_v)
  double fPrime = 0.0;        // f'(h), cached for the structure identities

  double h() const { return p.t; }
  double detI() const { return I.determinant(); }
  /// g(T, T).
  double tNormSq() const { return T.dot(I * T); }
};

/// Throws DegenerateJet when I is not positive definite and
/// OrientationAmbiguous when the requested sign rule cannot decide.
FundamentalData fundamentalData(const AmbientSpace& space, const ImmersionJet& jet,
                                Orientation orientation = Orientation::down());

/// Christoffel symbols of the induced metric: gamma[k](i, j) = Gamma^k_{ij}
/// in the parameter basis. Exact from the jet: the lowered symbols are
/// g(d_ij phi + ambient correction, d_l phi).
using Christoffel2 = std::array<Mat2, 2>;
Christoffel2 surfaceChristoffels(const AmbientSpace& space, const ImmersionJet& jet);

struct ComplexFundData {
  cd E;             // <phi_z, phi_z>
  double F = 0.0;   // <phi_z, phi_zbar>
  double D = 0.0;   // |E|^2 - F^2
  double rho = 0.0; // II(d_z, d_zbar)
  cd alpha;         // conj(E) h_z - F h_zbar
  cd hz;
  cd nuz;           // from d nu(X) = -g(SX, T) - f' nu g(X, T)
  cd p;             // II(d_z, d_z)
  double lambdaConf = 0.0;  // 2F, the isothermal factor when E = 0
  double nu = 0.0;
  double H = 0.0;
  double Ke = 0.0;
  double tNormSq = 0.0;
  Vec2 T = Vec2::Zero();
};

ComplexFundData complexify(const FundamentalData& fd, const ImmersionJet& jet);

struct ResidualStat {
  double max = 0.0;
  double sum = 0.0;
  std::size_t points = 0;

  void add(double value);
  double mean() const { return points ? sum / static_cast<double>(points) : 0.0; }
};

/// Labelled residual statistics in insertion order.
class ResidualSet {
 public:
  void add(const std::string& label, double value);
  void merge(const ResidualSet& other);
  bool has(const std::string& label) const;
  const ResidualStat& at(const std::string& label) const;
  const std::vector<std::pair<std::string, ResidualStat>>& entries() const { return entries_; }
  /// Largest max over the labels given (all labels when empty).
  double worst(const std::vector<std::string>& labels = {}) const;

 private:
  std::vector<std::pair<std::string, ResidualStat>> entries_;
};

/// Pointwise residuals of the six algebraic identities relating T, alpha,
/// h_z and the complex first form: e4 (components of T), e5 (alpha), e6/e7
/// (|T|^2), e8 (h_z), e9 (|h_z|^2). Throws DivByZeroD for |D| < 1e-14.
ResidualSet checkLemma31(const ComplexFundData& cfd);

}  // namespace warpsurf
