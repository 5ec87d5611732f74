#pragma once

#include <limits>
#include <string>
#include <vector>

#include "warpsurf/ambient.hpp"
#include "warpsurf/immersion.hpp"

namespace warpsurf {

enum class CapMode { CMC, ExtrinsicK, Minimal };
std::string toString(CapMode mode);

enum class Stepper { Dopri5, Fehlberg78 };

/// Rotational graph t = u(r) in R x_f R^2 shot from the apex (0, h0) with
/// the normal pointing down (nu <= 0).
struct CapProblem {
  CapMode mode = CapMode::CMC;
  double target = 1.0;  // H0 or Ke0; ignored for Minimal
  AmbientSpace space{0, WarpFn{}};
  double apexHeight = 1.0;

  double rMax = 10.0;       // give up beyond this radius
  double arcMax = 100.0;    // and beyond this profile arclength
  double heightMax = 50.0;  // and above this height
  double tolerance = 1e-10;
  double axisEps = 1e-6;
  double maxStep = 0.02;    // arclength cap on a single step (sampling density)
  Stepper stepper = Stepper::Dopri5;

  /// Throws BadInput for kappa != 0 or a non-positive target.
  void validate() const;
  /// Mean curvature the apex must carry (umbilic there): H0, sqrt(Ke0) or 0.
  double apexMeanCurvature() const;
};

enum class ShootOutcome { BoundaryReached, NoBoundaryReached };
std::string toString(ShootOutcome outcome);

struct CapProfile {
  std::vector<double> sigma;      // arclength from the axis
  std::vector<double> rGrid;
  std::vector<double> uValues;
  std::vector<double> uPrime;     // tan(psi); unbounded where the profile turns vertical
  std::vector<double> psi;        // slope angle
  std::vector<double> curvature;  // achieved H or K_e per node

  double maxHeight = 0.0;
  double boundaryRadius = std::numeric_limits<double>::quiet_NaN();
  double axisSecond = 0.0;        // u''(0)
  double maxCurvatureError = 0.0; // max |achieved - target| over the nodes
  ShootOutcome outcome = ShootOutcome::NoBoundaryReached;
  std::string reason;

  bool reachedBoundary() const { return outcome == ShootOutcome::BoundaryReached; }
};

/// H (CMC, Minimal) or K_e (ExtrinsicK) of the rotational graph at radius
/// r > 0 with the given 2-jet of the profile, normal pointing down.
double curvatureOfProfilePoint(const AmbientSpace& space, double r, double u, double uPrime, double uSecond,
                               CapMode mode);

/// u'' that makes the curvature equal `target`. Both H and K_e are affine in
/// u''; two probes fix the line and a third evaluation confirms it.
/// Throws SlopeVanishes (|slope| <= 1e-12) or AffinityBroken (miss > 1e-8).
double solveForU2(const AmbientSpace& space, double r, double u, double uPrime, CapMode mode, double target);

/// Same affine inversion for the turning rate psi' of the arclength-
/// parametrized profile (cos psi, sin psi).
double solveForTurningRate(const AmbientSpace& space, double r, double u, double psi, CapMode mode, double target);

/// Throws StepFailure when the integrator cannot proceed; a profile that
/// never returns to t = 0 is a NoBoundaryReached outcome, not an error.
CapProfile shootCap(const CapProblem& problem);

struct SolvedProfileOptions {
  double rHi = -1.0;        // outer radius; negative picks it from the steepness limit
  double steepLimit = 1.2;  // slope angle (rad) where the automatic rHi stops
  int nodes = 801;
  double tolerance = 1e-12;
};

/// Re-integrates the cap in the radial form u'' = solveForU2(...) onto a
/// uniform grid and wraps it in a quintic Hermite profile on [0, rHi].
Profile solvedProfile(const CapProblem& problem, const CapProfile& cap, const SolvedProfileOptions& options = {});

struct WarpHypotheses {
  bool fNonneg = true;
  bool fPrimeNonpos = true;
  bool fDoublePrimeNonneg = true;
  double minF = 0.0, minFAt = 0.0;
  double maxFPrime = 0.0, maxFPrimeAt = 0.0;
  double minFDoublePrime = 0.0, minFDoublePrimeAt = 0.0;
  int samples = 0;

  bool all() const { return fNonneg && fPrimeNonpos && fDoublePrimeNonneg; }
};

/// Samples f >= 0, f' <= 0, f'' >= 0 on [t0, t1] and keeps the worst witnesses.
WarpHypotheses checkWarpHypotheses(const WarpFn& warp, double t0, double t1, int samples = 1000);

struct HeightVerdict {
  double measuredHeight = 0.0;
  double bound = 0.0;
  WarpHypotheses hypotheses;
  bool reachedBoundary = false;
  /// measuredHeight <= bound + 1e-8 for caps that reach the slice; caps that
  /// never reach it are outside the estimate and pass vacuously.
  bool pass = false;
  double margin = 0.0;  // bound - measuredHeight
};

/// Throws BadInput for Minimal problems (there is no bound to compare with).
HeightVerdict heightVerdict(const CapProfile& profile, const CapProblem& problem);

struct RigidityEntry {
  double apexHeight = 0.0;
  ShootOutcome outcome = ShootOutcome::NoBoundaryReached;
  bool compactCap = false;
  std::string reason;
};

struct RigidityReport {
  std::vector<RigidityEntry> entries;
  bool fPrimeNonneg = true;   // sampled on the working interval
  bool fPrimeVanishesAtZero = false;
  bool sliceIsSolution = false;
  int compactCaps = 0;
  bool dichotomyHolds = false;
  std::string verdict;  // "slice" or "no such minimal surface"
};

struct RigidityOptions {
  double rMax = 10.0;
  double heightMax = 20.0;
  double workingInterval = 2.0;  // f' >= 0 is sampled on [0, max(apex) + this]
};

RigidityReport minimalRigidityCheck(const AmbientSpace& space, const std::vector<double>& apexHeights,
                                    const RigidityOptions& options = {});

}  // namespace warpsurf
