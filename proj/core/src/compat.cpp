#include "warpsurf/compat.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "warpsurf/errors.hpp"

namespace warpsurf {

namespace {

struct PointData {
  FundamentalData fd;
  Christoffel2 gamma;
};

PointData sample(const AmbientSpace& space, const Immersion& imm, double u, double v, const Orientation& o) {
  const ImmersionJet jet = imm.jetAt(u, v);
  return {fundamentalData(space, jet, o), surfaceChristoffels(space, jet)};
}

/// The point and its neighbours at distance `step` and 2 `step` along each
/// axis; derivatives use the fourth-order centred stencil.
struct Stencil {
  PointData c;
  std::array<std::array<PointData, 4>, 2> ring;  // offsets -2, -1, +1, +2
  double step;

  template <class Get>
  auto d(int axis, Get get) const {
    const auto& q = ring[static_cast<std::size_t>(axis)];
    return (get(q[0]) - 8.0 * get(q[1]) + 8.0 * get(q[2]) - get(q[3])) / (12.0 * step);
  }
};

Stencil stencil(const AmbientSpace& space, const Immersion& imm, double u, double v, const CompatOptions& opt) {
  const double h = opt.effectiveStep(imm);
  auto at = [&](double du, double dv) { return sample(space, imm, u + du, v + dv, opt.orientation); };
  return {at(0.0, 0.0),
          {{{at(-2 * h, 0.0), at(-h, 0.0), at(h, 0.0), at(2 * h, 0.0)},
            {at(0.0, -2 * h), at(0.0, -h), at(0.0, h), at(0.0, 2 * h)}}},
          h};
}

double iNorm(const Mat2& I, const Vec2& w) { return std::sqrt(std::max(0.0, w.dot(I * w))); }

/// Gamma^l_{ij} as a plain function of the stencil entry.
double gammaAt(const PointData& p, int l, int i, int j) { return p.gamma[l](i, j); }

}  // namespace

double CompatOptions::effectiveStep(const Immersion& imm) const {
  if (step > 0.0) return step;
  return imm.jetMode() == JetMode::Exact ? 1e-3 : 10.0 * imm.fdStep();
}

GaussSides gaussSides(const AmbientSpace& space, const Immersion& imm, double u, double v,
                      const CompatOptions& options, std::array<int, 4> frame) {
  const Stencil s = stencil(space, imm, u, v, options);
  const FundamentalData& fd = s.c.fd;
  const auto [a, b, c, d] = frame;

  // Standard-convention R(d_a, d_b) d_c = (...)^l d_l; the structure equations
  // use the opposite overall sign.
  double riem = 0.0;
  for (int l = 0; l < 2; ++l) {
    double comp = s.d(a, [&](const PointData& p) { return gammaAt(p, l, b, c); }) -
                  s.d(b, [&](const PointData& p) { return gammaAt(p, l, a, c); });
    for (int m = 0; m < 2; ++m) {
      comp += gammaAt(s.c, m, b, c) * gammaAt(s.c, l, a, m) - gammaAt(s.c, m, a, c) * gammaAt(s.c, l, b, m);
    }
    riem += fd.I(l, d) * comp;
  }

  const double t = fd.h();
  const double horiz = space.horizontalCurvatureTerm(t);
  const double mixed = space.mixedCurvatureTerm(t);
  const Mat2& g = fd.I;
  const Vec2& dh = fd.gradH;
  auto tensorT = [&](int x, int y, int z, int w) { return g(x, z) * dh[y] * dh[w] - g(x, w) * dh[y] * dh[z]; };

  GaussSides out;
  out.lhs = horiz * (g(a, d) * g(b, c) - g(a, c) * g(b, d)) - mixed * (tensorT(a, b, c, d) - tensorT(b, a, c, d));
  out.intrinsic = -riem;
  out.extrinsic = -fd.II(a, c) * fd.II(b, d) + fd.II(a, d) * fd.II(b, c);
  return out;
}

double gaussResidual(const AmbientSpace& space, const Immersion& imm, double u, double v,
                     const CompatOptions& options) {
  return gaussSides(space, imm, u, v, options).residual();
}

CodazziResidual codazziResiduals(const AmbientSpace& space, const Immersion& imm, double u, double v,
                                 const CompatOptions& options) {
  const Stencil s = stencil(space, imm, u, v, options);
  const FundamentalData& fd = s.c.fd;

  // nabla_a (S d_b) in the parameter basis.
  auto covS = [&](int a, int b) {
    Vec2 out;
    for (int k = 0; k < 2; ++k) {
      double val = s.d(a, [&](const PointData& p) { return p.fd.S(k, b); });
      for (int m = 0; m < 2; ++m) val += s.c.gamma[k](a, m) * fd.S(m, b);
      out[k] = val;
    }
    return out;
  };
  const Vec2 rhs = covS(0, 1) - covS(1, 0);
  const double coeff = -fd.nu * space.mixedCurvatureTerm(fd.h());
  // S(d_u, d_v) = coeff [h_u d_v - h_v d_u].
  const Vec2 lhs{-coeff * fd.gradH[1], coeff * fd.gradH[0]};
  return {iNorm(fd.I, lhs - rhs), iNorm(fd.I, -lhs - rhs)};
}

double codazziResidual(const AmbientSpace& space, const Immersion& imm, double u, double v,
                       const CompatOptions& options) {
  return codazziResiduals(space, imm, u, v, options).asStated;
}

StructureResiduals structureResiduals(const AmbientSpace& space, const Immersion& imm, double u, double v,
                                      const CompatOptions& options) {
  const Stencil s = stencil(space, imm, u, v, options);
  const FundamentalData& fd = s.c.fd;
  const double fp = fd.fPrime;

  StructureResiduals r;
  r.eq35 = std::abs(fd.tNormSq() + fd.nu * fd.nu - 1.0);
  for (int a = 0; a < 2; ++a) {
    Vec2 covT;
    for (int k = 0; k < 2; ++k) {
      double val = s.d(a, [&](const PointData& p) { return p.fd.T[k]; });
      for (int m = 0; m < 2; ++m) val += s.c.gamma[k](a, m) * fd.T[m];
      covT[k] = val;
    }
    const Vec2 X = Vec2::Unit(a);
    const Vec2 res = covT - fd.nu * fd.S.col(a) - fp * (X - fd.gradH[a] * fd.T);
    r.eq33 = std::max(r.eq33, iNorm(fd.I, res));

    const double dnu = s.d(a, [](const PointData& p) { return p.fd.nu; });
    const double res34 = fd.II.row(a).dot(fd.T) + dnu + fp * fd.nu * fd.gradH[a];
    r.eq34 = std::max(r.eq34, std::abs(res34));
  }
  return r;
}

std::vector<std::array<double, 2>> GridSpec::points(const ParamDomain& dom) const {
  const double mu = marginFraction * (dom.u1 - dom.u0);
  const double mv = marginFraction * (dom.v1 - dom.v0);
  const double a0 = dom.u0 + mu, a1 = dom.u1 - mu, b0 = dom.v0 + mv, b1 = dom.v1 - mv;
  if (!(a1 > a0) || !(b1 > b0)) fail(ErrorCode::BadInput, "grid margin leaves no interior");
  std::vector<std::array<double, 2>> out;
  if (randomPoints > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> du(a0, a1), dv(b0, b1);
    out.reserve(static_cast<std::size_t>(randomPoints));
    for (int i = 0; i < randomPoints; ++i) {
      const double u = du(rng);
      out.push_back({u, dv(rng)});
    }
    return out;
  }
  if (nu < 1 || nv < 1) fail(ErrorCode::BadInput, "grid needs at least one point per axis");
  for (int i = 0; i < nu; ++i) {
    const double u = nu == 1 ? 0.5 * (a0 + a1) : a0 + (a1 - a0) * i / (nu - 1);
    for (int j = 0; j < nv; ++j) {
      const double v = nv == 1 ? 0.5 * (b0 + b1) : b0 + (b1 - b0) * j / (nv - 1);
      out.push_back({u, v});
    }
  }
  return out;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  if (randomPoints > 0) {
    os << "random " << randomPoints << " points, seed " << seed << ", margin " << marginFraction;
  } else {
    os << "lattice " << nu << "x" << nv << ", margin " << marginFraction;
  }
  return os.str();
}

double CompatReport::worst() const {
  return std::max({gauss.max, codazzi.max, eq35.max, eq33.max, eq34.max});
}

CompatReport evaluateCompat(const AmbientSpace& space, const Immersion& imm, const GridSpec& grid,
                            const CompatOptions& options) {
  CompatReport rep;
  rep.grid = grid.describe();
  rep.jetMode = imm.jetMode() == JetMode::Exact ? "exact" : "fd";
  rep.orientation = options.orientation.describe();
  rep.step = options.effectiveStep(imm);
  for (const auto& [u, v] : grid.points(imm.domain())) {
    rep.gauss.add(gaussResidual(space, imm, u, v, options));
    const CodazziResidual cz = codazziResiduals(space, imm, u, v, options);
    rep.codazzi.add(cz.asStated);
    rep.codazziFlipped.add(cz.signFlipped);
    const StructureResiduals st = structureResiduals(space, imm, u, v, options);
    rep.eq35.add(st.eq35);
    rep.eq33.add(st.eq33);
    rep.eq34.add(st.eq34);
  }
  return rep;
}

}  // namespace warpsurf
