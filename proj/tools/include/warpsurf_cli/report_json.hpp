#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpsurf/compat.hpp"
#include "warpsurf/conformal.hpp"
#include "warpsurf/fundforms.hpp"
#include "warpsurf/graphsolve.hpp"

namespace warpsurf::cli {

using json = nlohmann::ordered_json;

/// {"eq", "max", "mean", "points"}.
json toJson(const std::string& label, const ResidualStat& stat);
/// Array of the above in insertion order.
json toJson(const ResidualSet& set);
json toJson(const CompatReport& report);
json toJson(const LemmaResiduals& lemma);
json toJson(const AuxLaplacianReport& aux);
json toJson(const WarpHypotheses& hyp);
json toJson(const HeightVerdict& verdict);
json toJson(const RigidityReport& report);
/// Scalar summary of a shooting run (the node arrays go to CSV).
json toJson(const CapProfile& cap);

/// Columns r, u, uPrime, curvature.
void writeCapCsv(std::ostream& out, const CapProfile& cap);

struct SweepRow {
  double apexHeight = 0.0;
  double target = 0.0;
  double measuredHeight = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string status;
};
/// Columns h0, target, measuredHeight, bound, pass, status.
void writeSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Two-space indented JSON plus a trailing newline.
void writeJsonFile(const std::filesystem::path& path, const json& j);

}  // namespace warpsurf::cli
