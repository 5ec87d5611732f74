#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpsurf/ambient.hpp"
#include "warpsurf/fundforms.hpp"
#include "warpsurf/graphsolve.hpp"
#include "warpsurf/immersion.hpp"

namespace warpsurf::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Anything wrong with the configuration itself; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read access to one JSON object that records which keys were consumed, so
/// that leftovers (typos, unsupported options) can be rejected by finish().
class Fields {
 public:
  Fields(const json& object, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  Fields object(const std::string& key) const;
  const std::string& path() const { return path_; }

  /// Throws ConfigError naming every key that was never read.
  void finish() const;

 private:
  const json& get(const std::string& key) const;
  std::string where(const std::string& key) const { return path_ + "." + key; }

  const json* object_;
  std::string path_;
  mutable std::set<std::string> used_;
};

/// Parses the file and checks "schema" and, when present, "command".
json loadConfig(const std::filesystem::path& path, const std::string& command);

/// {"family": "Const"|"Affine"|"ExpScaled"|"Quadratic", "a", "b", "c"}.
WarpFn parseWarp(const Fields& f);
json warpToJson(const WarpFn& warp);

/// "ambient": {"kappa", "warp"} or a top-level "warp" (kappa = 0).
AmbientSpace parseAmbient(const Fields& top);
json ambientToJson(const AmbientSpace& space);

/// "down", "up", "inward" / "parametric-" or "parametric+".
Orientation parseOrientation(const std::string& name);

struct SurfaceSpec {
  std::string type;
  std::optional<TestSurface> surface;
  std::optional<Profile> profile;  // rotational surfaces only
  bool solverProduced = false;     // solved caps and sampled profiles
  Orientation defaultOrientation = Orientation::down();
  json echo;                       // the parsed description, for reports
};

/// Surface types: slice, sphere, cylinder, rotgraph, profileCsv, solvedCap.
/// Relative CSV paths resolve against `baseDir`.
SurfaceSpec parseSurface(const Fields& f, const AmbientSpace& space, const std::filesystem::path& baseDir);

CapMode parseCapMode(const std::string& name);

/// {"mode", "H" | "Ke", optional solver settings}; apex heights are read by
/// the caller.
CapProblem parseCapProblem(const Fields& f, const AmbientSpace& space);
/// rMax, arcMax, heightMax, tolerance, maxStep, stepper ("dopri5" | "rk78").
void parseSolverSettings(const Fields& f, CapProblem& problem);

}  // namespace warpsurf::cli
