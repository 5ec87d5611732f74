#include <iostream>

#include <CLI11.hpp>

#include "warpsurf_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace warpsurf::cli;

  CLI::App app{"warpsurf: surface geometry in warped products R x_f M^2(kappa)"};
  app.require_subcommand(1);

  RunOptions options;
  std::string outDir = ".";
  std::uint64_t seed = 0;

  const char* help[] = {
      "Gauss, Codazzi and structure-equation residuals of a catalog surface",
      "Conformal-chart identities and auxiliary Laplacians on a rotational surface",
      "Shoot a rotational cap and compare its height with the bound",
      "Height-bound table over prescribed curvatures and apex heights",
  };
  std::size_t i = 0;
  for (const auto& name : commandNames()) {
    CLI::App* sub = app.add_subcommand(name, help[i++]);
    sub->add_option("--config", options.config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", outDir, "output directory for reports")->capture_default_str();
    sub->add_option("--tol-scale", options.tolScale, "multiplier for every pass/fail tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized sample grids");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 usage errors are configuration errors as far as callers care.
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  options.outDir = outDir;
  if (chosen->count("--seed") > 0) options.seed = seed;
  return runCommand(chosen->get_name(), options, std::cout, std::cerr);
}
