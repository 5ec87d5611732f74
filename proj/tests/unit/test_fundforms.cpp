#include <cmath>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "warpsurf/errors.hpp"
#include "warpsurf/fundforms.hpp"

namespace ws = warpsurf;

namespace {

ws::Mat2 inducedMetric(const ws::AmbientSpace& space, const ws::Immersion& imm, double u, double v) {
  const ws::ImmersionJet j = imm.jetAt(u, v);
  const ws::Mat3 g = space.metricAt(j.p);
  ws::Mat2 I;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) I(a, b) = j.d1[a].dot(g * j.d1[b]);
  return I;
}

// Textbook Euclidean second form with the normal chosen to point down in t.
ws::Mat2 euclideanSecondForm(const ws::ImmersionJet& j) {
  ws::Vec3 n = j.d1[0].cross(j.d1[1]).normalized();
  if (n[ws::kT] > 0) n = -n;
  ws::Mat2 II;
  II << j.d2[0].dot(n), j.d2[1].dot(n), j.d2[1].dot(n), j.d2[2].dot(n);
  return II;
}

}  // namespace

TEST(FundamentalData, EuclideanSecondFormMatchesTextbook) {
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  for (const auto& profile : {ws::Profile::paraboloid(0.5, 0.7, 0.05, 1.0), ws::Profile::cosine(0.2, 0.3, 2.0, 0.05, 1.0)}) {
    const ws::Immersion imm = ws::rotGraph(profile);
    const ws::ImmersionJet j = imm.jetAt(0.6, 0.9);
    const ws::FundamentalData fd = ws::fundamentalData(flat, j);
    EXPECT_LT((fd.II - euclideanSecondForm(j)).cwiseAbs().maxCoeff(), 1e-13) << profile.name();
    EXPECT_LT(fd.nu, 0.0);
    EXPECT_NEAR(fd.normal.norm(), 1.0, 1e-14);
  }
}

TEST(FundamentalData, RoundSphereInConstantWarp) {
  // f == c is Euclidean space after rescaling (x, y) by e^c.
  for (double c : {0.0, 0.4, -0.3}) {
    const ws::AmbientSpace space(0, ws::WarpFn::constant(c));
    const auto sphere = ws::catalog::euclidSphere(2.0, 0.1, c);
    const auto fd = ws::fundamentalData(space, sphere.immersion.jetAt(0.3, -0.8));
    EXPECT_NEAR(fd.H, 0.5, 1e-13) << "c=" << c;
    EXPECT_NEAR(fd.Ke, 0.25, 1e-13);
    EXPECT_LT((fd.S - 0.5 * ws::Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(FundamentalData, SliceIsUmbilicWithWarpDerivative) {
  const ws::WarpFn w = ws::WarpFn::affine(0.8, 0.1);
  for (int kappa : {-1, 0, 1}) {
    const ws::AmbientSpace space(kappa, w);
    const auto slice = ws::catalog::slice(0.3, w);
    const ws::ImmersionJet j = slice.immersion.jetAt(0.1, 0.2);
    const auto up = ws::fundamentalData(space, j, ws::Orientation::up());
    const auto down = ws::fundamentalData(space, j, ws::Orientation::down());
    EXPECT_NEAR(up.nu, 1.0, 1e-15);
    EXPECT_LT((up.S + 0.8 * ws::Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((down.S - 0.8 * ws::Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(up.H, slice.oracle->meanCurvature(0.1, 0.2), 1e-14);
    EXPECT_NEAR(up.tNormSq(), 0.0, 1e-30);
  }
}

TEST(FundamentalData, CylinderAndOrientationRules) {
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  const auto cyl = ws::catalog::cylinder(0.5);
  const ws::ImmersionJet j = cyl.immersion.jetAt(0.3, 0.2);
  const auto fd = ws::fundamentalData(flat, j, ws::Orientation::parametric(-1));
  EXPECT_NEAR(fd.H, 1.0, 1e-14);
  EXPECT_NEAR(fd.Ke, 0.0, 1e-14);
  const auto flipped = ws::fundamentalData(flat, j, ws::Orientation::parametric(1));
  EXPECT_NEAR(flipped.H, -1.0, 1e-14);
  const auto seeded = ws::fundamentalData(flat, j, ws::Orientation::towards(-j.p.toVector().cwiseProduct(ws::Vec3(0, 1, 1))));
  EXPECT_NEAR(seeded.H, 1.0, 1e-14);
  try {
    ws::fundamentalData(flat, j, ws::Orientation::down());
    FAIL() << "expected OrientationAmbiguous";
  } catch (const ws::GeometryError& e) {
    EXPECT_EQ(e.code(), ws::ErrorCode::OrientationAmbiguous);
  }
}

TEST(FundamentalData, HeightGradientAndAngle) {
  const ws::AmbientSpace space(1, ws::WarpFn::expScaled(1.0, -1.0));
  const ws::Immersion imm = ws::rotGraph(ws::Profile::paraboloid(0.5, 0.3, 0.1, 0.6));
  const ws::ImmersionJet j = imm.jetAt(0.35, 1.1);
  const auto fd = ws::fundamentalData(space, j);
  // I T = (h_u, h_v) and |T|^2 + nu^2 = 1.
  EXPECT_LT((fd.I * fd.T - fd.gradH).norm(), 1e-14);
  EXPECT_NEAR(fd.gradH[0], j.d1[0][ws::kT], 1e-15);
  EXPECT_NEAR(fd.tNormSq() + fd.nu * fd.nu, 1.0, 1e-14);
  EXPECT_NEAR(fd.fPrime, -std::exp(-0.5 + 0.3 * 0.35 * 0.35), 1e-14);
  EXPECT_NEAR(fd.H, 0.5 * fd.S.trace(), 1e-14);
  EXPECT_NEAR(fd.Ke, fd.S.determinant(), 1e-14);
}

TEST(FundamentalData, DegenerateFirstForm) {
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  ws::ImmersionJet j;
  j.d1[0] = {0.0, 1.0, 0.0};
  j.d1[1] = {0.0, 2.0, 0.0};
  j.d2.fill(ws::Vec3::Zero());
  try {
    ws::fundamentalData(flat, j);
    FAIL() << "expected DegenerateJet";
  } catch (const ws::GeometryError& e) {
    EXPECT_EQ(e.code(), ws::ErrorCode::DegenerateJet);
  }
}

TEST(SurfaceChristoffels, MatchFiniteDifferencesOfInducedMetric) {
  const double h = 1e-5;
  for (int kappa : {-1, 0, 1}) {
    const ws::AmbientSpace space(kappa, ws::WarpFn::quadratic(0.3, -0.2, 0.1));
    const ws::Immersion imm = ws::rotGraph(ws::Profile::cosine(0.2, 0.3, 2.0, 0.1, 0.6));
    const double u = 0.4, v = 0.7;
    std::array<ws::Mat2, 2> dI;
    dI[0] = (inducedMetric(space, imm, u + h, v) - inducedMetric(space, imm, u - h, v)) / (2 * h);
    dI[1] = (inducedMetric(space, imm, u, v + h) - inducedMetric(space, imm, u, v - h)) / (2 * h);
    const ws::Mat2 inv = inducedMetric(space, imm, u, v).inverse();
    const auto gamma = ws::surfaceChristoffels(space, imm.jetAt(u, v));
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj) {
          double oracle = 0.0;
          for (int l = 0; l < 2; ++l) oracle += 0.5 * inv(k, l) * (dI[i](jj, l) + dI[jj](i, l) - dI[l](i, jj));
          EXPECT_NEAR(gamma[k](i, jj), oracle, 1e-8) << "kappa=" << kappa << " k=" << k << " i=" << i << " j=" << jj;
        }
  }
}

TEST(Complexify, IsothermalQuantities) {
  const ws::AmbientSpace space(0, ws::WarpFn::affine(0.5, 0.0));
  const ws::Immersion imm = ws::rotGraph(ws::Profile::paraboloid(0.5, 0.3, 0.1, 0.6));
  const ws::ImmersionJet j = imm.jetAt(0.35, 1.1);
  const auto fd = ws::fundamentalData(space, j);
  const auto c = ws::complexify(fd, j);
  // z = u + i v: E = (E_r - G_r - 2i F_r)/4 and F = (E_r + G_r)/4.
  EXPECT_NEAR(c.E.real(), 0.25 * (fd.I(0, 0) - fd.I(1, 1)), 1e-14);
  EXPECT_NEAR(c.E.imag(), -0.5 * fd.I(0, 1), 1e-14);
  EXPECT_NEAR(c.F, 0.25 * fd.I.trace(), 1e-14);
  EXPECT_NEAR(c.D, std::norm(c.E) - c.F * c.F, 1e-14);
  EXPECT_NEAR(c.hz.real(), 0.5 * fd.gradH[0], 1e-14);
  EXPECT_NEAR(c.hz.imag(), -0.5 * fd.gradH[1], 1e-14);
  EXPECT_NEAR(c.rho, 0.25 * fd.II.trace(), 1e-14);
}

TEST(AlgebraicIdentities, VanishAtRandomPoints) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.15, 0.55), uth(-3.0, 3.0);
  for (int kappa : {-1, 0, 1}) {
    const ws::AmbientSpace space(kappa, ws::WarpFn::expScaled(1.0, -1.0));
    const ws::Immersion imm = ws::rotGraph(ws::Profile::cosine(0.2, 0.3, 2.0, 0.1, 0.6));
    for (int i = 0; i < 50; ++i) {
      const ws::ImmersionJet j = imm.jetAt(ur(rng), uth(rng));
      const auto set = ws::checkLemma31(ws::complexify(ws::fundamentalData(space, j), j));
      for (const char* label : {"e4", "e5", "e6", "e7", "e8", "e9"}) {
        ASSERT_TRUE(set.has(label));
        EXPECT_LT(set.at(label).max, 1e-12) << label;
      }
    }
  }
}

TEST(ResidualSet, MergeAndWorst) {
  ws::ResidualSet a, b;
  a.add("x", 1.0);
  a.add("x", 3.0);
  b.add("y", 2.0);
  b.add("x", 0.5);
  a.merge(b);
  EXPECT_EQ(a.at("x").points, 3u);
  EXPECT_DOUBLE_EQ(a.at("x").max, 3.0);
  EXPECT_DOUBLE_EQ(a.at("x").mean(), 1.5);
  EXPECT_DOUBLE_EQ(a.worst({"y"}), 2.0);
  EXPECT_DOUBLE_EQ(a.worst(), 3.0);
  EXPECT_EQ(a.entries().front().first, "x");
}
