#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace warpsurf::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path outDir = ".";
  double tolScale = 1.0;                // multiplies every pass/fail tolerance
  std::optional<std::uint64_t> seed;    // overrides grid.seed for random grids
};

const std::vector<std::string>& commandNames();

/// Runs one subcommand. Human-readable summaries go to `out`, diagnostics to
/// `err`; machine-readable reports are written under options.outDir.
int runCommand(const std::string& name, const RunOptions& options, std::ostream& out, std::ostream& err);

int verifyCompat(const RunOptions& options, std::ostream& out, std::ostream& err);
int verifyLemmas(const RunOptions& options, std::ostream& out, std::ostream& err);
int solveCap(const RunOptions& options, std::ostream& out, std::ostream& err);
int sweep(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace warpsurf::cli
