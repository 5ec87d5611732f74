#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "warpsurf/fundforms.hpp"

namespace warpsurf {

struct CompatOptions {
  Orientation orientation = Orientation::down();
  /// Step of the outer differences (Christoffel symbols, S, T, nu). Zero
  /// picks 1e-3 for exact jets and ten jet steps for finite-difference jets.
  double step = 0.0;

  double effectiveStep(const Immersion& imm) const;
};

/// Both sides of the Gauss equation on the coordinate frame
/// (X, Y, Z, W) = (d_a, d_b, d_c, d_d).
struct GaussSides {
  double lhs = 0.0;        // warped-product curvature term R(X,Y,Z,W)
  double intrinsic = 0.0;  // g(R(X,Y)Z, W), curvature sign as in the structure equations
  double extrinsic = 0.0;  // -g(SX,Z)g(SY,W) + g(SX,W)g(SY,Z)
  double residual() const { return std::abs(lhs - (intrinsic + extrinsic)); }
};

GaussSides gaussSides(const AmbientSpace& space, const Immersion& imm, double u, double v,
                      const CompatOptions& options = {}, std::array<int, 4> frame = {0, 1, 0, 1});
double gaussResidual(const AmbientSpace& space, const Immersion& imm, double u, double v,
                     const CompatOptions& options = {});

struct CodazziResidual {
  double asStated = 0.0;    // |S(X,Y) - (nabla_X SY - nabla_Y SX)|_I
  double signFlipped = 0.0; // same with S(X,Y) negated
};
CodazziResidual codazziResiduals(const AmbientSpace& space, const Immersion& imm, double u, double v,
                                 const CompatOptions& options = {});
double codazziResidual(const AmbientSpace& space, const Immersion& imm, double u, double v,
                       const CompatOptions& options = {});

struct StructureResiduals {
  double eq35 = 0.0;  // ||T|^2 + nu^2 - 1|
  double eq33 = 0.0;  // max over X of |nabla_X T - nu SX - f'[X - g(X,T)T]|_I
  double eq34 = 0.0;  // max over X of |g(SX,T) + dnu(X) + f' nu g(X,T)|
};
StructureResiduals structureResiduals(const AmbientSpace& space, const Immersion& imm, double u, double v,
                                      const CompatOptions& options = {});

struct GridSpec {
  int nu = 9;
  int nv = 9;
  double marginFraction = 0.05;
  /// When positive, that many uniformly random points (seeded) replace the lattice.
  int randomPoints = 0;
  std::uint64_t seed = 1;

  std::vector<std::array<double, 2>> points(const ParamDomain& domain) const;
  std::string describe() const;
};

struct CompatReport {
  ResidualStat gauss;
  ResidualStat codazzi;
  ResidualStat codazziFlipped;
  ResidualStat eq35;
  ResidualStat eq33;
  ResidualStat eq34;
  std::string grid;
  std::string jetMode;
  std::string orientation;
  double step = 0.0;

  double worst() const;
};

CompatReport evaluateCompat(const AmbientSpace& space, const Immersion& imm, const GridSpec& grid,
                            const CompatOptions& options = {});

}  // namespace warpsurf
