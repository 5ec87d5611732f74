#include <cmath>

#include <gtest/gtest.h>

#include "warpsurf/errors.hpp"
#include "warpsurf/graphsolve.hpp"

namespace ws = warpsurf;

namespace {

ws::CapProblem flatCap(ws::CapMode mode, double target, double apex) {
  ws::CapProblem p;
  p.mode = mode;
  p.target = target;
  p.apexHeight = apex;
  return p;
}

void expectCode(const std::function<void()>& fn, ws::ErrorCode code) {
  try {
    fn();
    FAIL() << "expected " << ws::toString(code);
  } catch (const ws::GeometryError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(ProfileCurvature, HemisphereJet) {
  // u = sqrt(R^2 - r^2): H = 1/R, K_e = 1/R^2 with the downward normal.
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  const double R = 1.7, r = 0.9, q = std::sqrt(R * R - r * r);
  const double u1 = -r / q, u2 = -R * R / (q * q * q);
  EXPECT_NEAR(ws::curvatureOfProfilePoint(flat, r, q, u1, u2, ws::CapMode::CMC), 1 / R, 1e-13);
  EXPECT_NEAR(ws::curvatureOfProfilePoint(flat, r, q, u1, u2, ws::CapMode::ExtrinsicK), 1 / (R * R), 1e-13);
  EXPECT_NEAR(ws::solveForU2(flat, r, q, u1, ws::CapMode::CMC, 1 / R), u2, 1e-10);
  EXPECT_NEAR(ws::solveForU2(flat, r, q, u1, ws::CapMode::ExtrinsicK, 1 / (R * R)), u2, 1e-10);
}

TEST(ProfileCurvature, CatenoidIsMinimal) {
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  const auto jet = ws::Profile::catenoid(0.5).at(0.8);
  EXPECT_NEAR(ws::curvatureOfProfilePoint(flat, 0.8, jet[0], jet[1], jet[2], ws::CapMode::Minimal), 0.0, 1e-12);
}

TEST(ProfileCurvature, TurningRateOfCircle) {
  // A circle of radius R has psi' = -1/R along the arclength.
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  const double R = 2.0, psi = -0.6;
  const double r = R * std::sin(-psi), u = R * std::cos(psi);
  EXPECT_NEAR(ws::solveForTurningRate(flat, r, u, psi, ws::CapMode::CMC, 1 / R), -1 / R, 1e-10);
}

TEST(ProfileCurvature, VanishingSlope) {
  // Away from the axis K_e depends on u'' only through u'' u' / r, so u' = 0 leaves
  // nothing to solve for.
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  expectCode([&] { ws::solveForU2(flat, 0.5, 1.0, 0.0, ws::CapMode::ExtrinsicK, 1.0); }, ws::ErrorCode::SlopeVanishes);
}

TEST(CapProblem, Validation) {
  auto p = flatCap(ws::CapMode::CMC, 1.0, 1.0);
  EXPECT_NO_THROW(p.validate());
  p.space = ws::AmbientSpace(1, ws::WarpFn{});
  expectCode([&] { p.validate(); }, ws::ErrorCode::BadInput);
  p = flatCap(ws::CapMode::CMC, -1.0, 1.0);
  expectCode([&] { p.validate(); }, ws::ErrorCode::BadInput);
  p = flatCap(ws::CapMode::Minimal, 0.0, 1.0);
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(flatCap(ws::CapMode::ExtrinsicK, 4.0, 1.0).apexMeanCurvature(), 2.0);
  EXPECT_DOUBLE_EQ(flatCap(ws::CapMode::CMC, 3.0, 1.0).apexMeanCurvature(), 3.0);
  EXPECT_DOUBLE_EQ(p.apexMeanCurvature(), 0.0);
}

TEST(ShootCap, FlatCmcCapIsHemisphere) {
  const auto cap = ws::shootCap(flatCap(ws::CapMode::CMC, 1.0, 1.0));
  ASSERT_TRUE(cap.reachedBoundary());
  EXPECT_NEAR(cap.boundaryRadius, 1.0, 1e-6);
  EXPECT_NEAR(cap.maxHeight, 1.0, 1e-12);
  EXPECT_NEAR(cap.axisSecond, -1.0, 1e-6);
  double worst = 0.0;
  for (std::size_t i = 0; i < cap.rGrid.size(); ++i) worst = std::max(worst, std::abs(std::hypot(cap.rGrid[i], cap.uValues[i]) - 1));
  EXPECT_LT(worst, 1e-7);
  EXPECT_LT(cap.maxCurvatureError, 1e-8);
}

TEST(ShootCap, HemispheresForSeveralCurvatures) {
  for (double H : {0.5, 1.0, 2.0}) {
    const auto p = flatCap(ws::CapMode::CMC, H, 1.0 / H);
    const auto cap = ws::shootCap(p);
    ASSERT_TRUE(cap.reachedBoundary());
    EXPECT_NEAR(cap.boundaryRadius, 1.0 / H, 1e-6);
    double worst = 0.0;
    for (std::size_t i = 0; i < cap.rGrid.size(); ++i) {
      const double r = cap.rGrid[i];
      worst = std::max(worst, std::abs(cap.uValues[i] - std::sqrt(std::max(0.0, 1.0 / (H * H) - r * r))));
    }
    EXPECT_LT(worst, 1e-8) << "H=" << H;
    EXPECT_LT(cap.maxCurvatureError, 1e-6);
  }
}

TEST(ShootCap, HalvingToleranceBarelyMovesTheCap) {
  ws::CapProblem p = flatCap(ws::CapMode::CMC, 1.0, 0.54);
  p.space = ws::AmbientSpace(0, ws::WarpFn::expScaled(1.0, -1.0));
  const auto a = ws::shootCap(p);
  p.tolerance *= 0.5;
  const auto b = ws::shootCap(p);
  ASSERT_TRUE(a.reachedBoundary() && b.reachedBoundary());
  EXPECT_LT(std::abs(a.maxHeight - b.maxHeight), 1e-8);
  EXPECT_LT(std::abs(a.boundaryRadius - b.boundaryRadius), 1e-8);
  EXPECT_LT(a.maxCurvatureError, 1e-6);
}

TEST(ShootCap, FlatKeCapIsSphereOfRadiusHalf) {
  for (auto stepper : {ws::Stepper::Dopri5, ws::Stepper::Fehlberg78}) {
    auto p = flatCap(ws::CapMode::ExtrinsicK, 4.0, 0.5);
    p.stepper = stepper;
    const auto cap = ws::shootCap(p);
    ASSERT_TRUE(cap.reachedBoundary());
    EXPECT_NEAR(cap.boundaryRadius, 0.5, 1e-6);
    EXPECT_NEAR(cap.maxHeight, 0.5, 1e-12);
  }
}

TEST(ShootCap, SphereThatNeverReachesTheSlice) {
  // H = 1 and apex 1.5: the sphere's equator sits at t = 0.5, so the graph turns vertical first.
  const auto cap = ws::shootCap(flatCap(ws::CapMode::CMC, 1.0, 1.5));
  EXPECT_EQ(cap.outcome, ws::ShootOutcome::NoBoundaryReached);
  EXPECT_FALSE(cap.reason.empty());
  EXPECT_TRUE(std::isnan(cap.boundaryRadius));
  const auto verdict = ws::heightVerdict(cap, flatCap(ws::CapMode::CMC, 1.0, 1.5));
  EXPECT_FALSE(verdict.reachedBoundary);
  EXPECT_TRUE(verdict.pass);
}

TEST(HeightVerdict, EqualityAndBound) {
  const auto p = flatCap(ws::CapMode::CMC, 2.0, 0.5);
  const auto v = ws::heightVerdict(ws::shootCap(p), p);
  EXPECT_TRUE(v.reachedBoundary);
  EXPECT_DOUBLE_EQ(v.bound, 0.5);
  EXPECT_NEAR(v.margin, 0.0, 1e-9);
  EXPECT_TRUE(v.pass);

  ws::CapProblem warped = flatCap(ws::CapMode::ExtrinsicK, 1.0, 0.3);
  warped.space = ws::AmbientSpace(0, ws::WarpFn::expScaled(1.0, -1.0));
  const auto w = ws::heightVerdict(ws::shootCap(warped), warped);
  EXPECT_NEAR(w.bound, std::exp(1.0), 1e-14);
  EXPECT_TRUE(w.hypotheses.all());
  EXPECT_TRUE(w.pass);

  const auto minimal = flatCap(ws::CapMode::Minimal, 0.0, 0.5);
  expectCode([&] { ws::heightVerdict(ws::CapProfile{}, minimal); }, ws::ErrorCode::BadInput);
}

TEST(SolvedProfile, CurvatureIsConstantAlongProfile) {
  ws::CapProblem p = flatCap(ws::CapMode::ExtrinsicK, 1.0, 0.5);
  p.space = ws::AmbientSpace(0, ws::WarpFn::expScaled(1.0, -1.0));
  const auto profile = ws::solvedProfile(p, ws::shootCap(p));
  EXPECT_EQ(profile.rMin(), 0.0);
  for (int i = 1; i < 200; ++i) {
    const double r = profile.rMax() * i / 200.0;
    const auto j = profile.at(r);
    EXPECT_NEAR(ws::curvatureOfProfilePoint(p.space, r, j[0], j[1], j[2], p.mode), 1.0, 1e-10) << r;
  }
  EXPECT_NEAR(profile.at(0.0)[0], 0.5, 1e-12);
  // Slope angle at the outer radius stays at the steepness limit.
  EXPECT_LE(std::atan(-profile.at(profile.rMax())[1]), 1.2 + 1e-6);
}

TEST(WarpHypotheses, SampledWitnesses) {
  const auto good = ws::checkWarpHypotheses(ws::WarpFn::expScaled(1.0, -1.0), 0.0, 2.7);
  EXPECT_TRUE(good.all());
  EXPECT_EQ(good.samples, 1000);
  EXPECT_NEAR(good.maxFPrime, -std::exp(-2.7), 1e-12);
  const auto bad = ws::checkWarpHypotheses(ws::WarpFn::affine(1.0, -0.5), 0.0, 1.0);
  EXPECT_FALSE(bad.fPrimeNonpos);
  EXPECT_FALSE(bad.fNonneg);
  EXPECT_TRUE(bad.fDoublePrimeNonneg);
  EXPECT_NEAR(bad.minF, -0.5, 1e-12);
  EXPECT_NEAR(bad.minFAt, 0.0, 1e-12);
}

TEST(MinimalRigidity, IncreasingWarpAdmitsNoCap) {
  const auto rep = ws::minimalRigidityCheck(ws::AmbientSpace(0, ws::WarpFn::affine(1.0, 0.0)), {0.1, 0.5, 1.0});
  EXPECT_EQ(rep.compactCaps, 0);
  EXPECT_TRUE(rep.fPrimeNonneg);
  EXPECT_FALSE(rep.sliceIsSolution);
  EXPECT_TRUE(rep.dichotomyHolds);
  EXPECT_EQ(rep.verdict, "no such minimal surface");
  EXPECT_EQ(rep.entries.size(), 3u);
}

TEST(MinimalRigidity, CriticalWarpLeavesOnlyTheSlice) {
  const auto rep = ws::minimalRigidityCheck(ws::AmbientSpace(0, ws::WarpFn::quadratic(1.0, 0.0, 0.0)), {0.0, 0.1, 0.5});
  EXPECT_TRUE(rep.fPrimeVanishesAtZero);
  EXPECT_TRUE(rep.sliceIsSolution);
  EXPECT_EQ(rep.compactCaps, 0);
  EXPECT_TRUE(rep.dichotomyHolds);
  EXPECT_EQ(rep.verdict, "slice");
}

TEST(Names, EnumStrings) {
  EXPECT_EQ(ws::toString(ws::CapMode::ExtrinsicK), "ke");
  EXPECT_EQ(ws::toString(ws::CapMode::CMC), "cmc");
  EXPECT_EQ(ws::toString(ws::ShootOutcome::BoundaryReached), "BoundaryReached");
}
