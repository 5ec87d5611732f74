#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "warpsurf_cli/commands.hpp"
#include "warpsurf_cli/config.hpp"

namespace cli = warpsurf::cli;
namespace fs = std::filesystem;
using cli::json;

namespace {

class CommandTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("warpsurf_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  cli::RunOptions options(const std::string& configText, const std::string& out = "out") {
    const fs::path cfg = dir_ / "config.json";
    std::ofstream(cfg) << configText;
    cli::RunOptions o;
    o.config = cfg;
    o.outDir = dir_ / out;
    return o;
  }

  int run(const std::string& command, const cli::RunOptions& o) {
    out_.str("");
    err_.str("");
    return cli::runCommand(command, o, out_, err_);
  }

  static json readJson(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
  }

  static std::string readText(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const char* kSphereCompat = R"({"schema": "1", "surface": {"type": "sphere", "R": 1.0}})";

}  // namespace

TEST_F(CommandTest, CompatReportOnSphere) {
  auto o = options(kSphereCompat);
  ASSERT_EQ(run("verify-compat", o), cli::kExitOk) << err_.str();
  const json r = readJson(o.outDir / "compat_report.json");
  EXPECT_EQ(r["schema"], "1");
  EXPECT_EQ(r["command"], "verify-compat");
  EXPECT_TRUE(r["pass"].get<bool>());
  EXPECT_EQ(r["tolerances"]["gauss"], 1e-6);
  std::vector<std::string> labels;
  for (const auto& e : r["report"]["residuals"]) labels.push_back(e["eq"]);
  EXPECT_EQ(labels, (std::vector<std::string>{"gauss", "codazzi", "eq35", "eq33", "eq34"}));
}

TEST_F(CommandTest, TolScaleCanFailAPass) {
  auto o = options(kSphereCompat);
  o.tolScale = 1e-12;
  EXPECT_EQ(run("verify-compat", o), cli::kExitFailure);
  EXPECT_NE(out_.str().find("FAIL"), std::string::npos);
  o.tolScale = 0.0;
  EXPECT_EQ(run("verify-compat", o), cli::kExitConfig);
}

TEST_F(CommandTest, SeedOverrideChangesRandomGrid) {
  const char* cfg = R"({"schema": "1",
    "surface": {"type": "rotgraph", "profile": {"kind": "paraboloid", "a": 0.5, "b": 0.3, "rMin": 0.1, "rMax": 0.4}},
    "grid": {"random": 10, "seed": 7}})";
  auto a = options(cfg, "a");
  ASSERT_EQ(run("verify-compat", a), cli::kExitOk);
  auto b = options(cfg, "b");
  b.seed = 8;
  ASSERT_EQ(run("verify-compat", b), cli::kExitOk);
  const json ra = readJson(a.outDir / "compat_report.json"), rb = readJson(b.outDir / "compat_report.json");
  EXPECT_NE(ra["report"]["grid"], rb["report"]["grid"]);
  EXPECT_NE(ra["report"]["residuals"][0]["max"], rb["report"]["residuals"][0]["max"]);
}

TEST_F(CommandTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("verify-compat", options(R"({"schema": "1"})")), cli::kExitConfig);
  EXPECT_NE(err_.str().find("surface"), std::string::npos);
  EXPECT_EQ(run("verify-compat", options(R"({"schema": "1", "surface": {"type": "sphere"}, "typo": 1})")),
            cli::kExitConfig);
  EXPECT_EQ(run("verify-compat", options(R"({"schema": "1", "surface": "sphere"})")), cli::kExitConfig);
  EXPECT_EQ(run("solve-cap", options(R"({"schema": "1", "cap": {"mode": "cmc", "H": 1}})")), cli::kExitConfig);
  EXPECT_EQ(run("solve-cap", options(R"({"schema": "1", "cap": {"mode": "cmc", "H": -1, "apex": 1}})")),
            cli::kExitConfig);
  EXPECT_EQ(run("frobnicate", options(kSphereCompat)), cli::kExitConfig);
}

TEST_F(CommandTest, LemmaRuntimeErrorIsReported) {
  auto o = options(R"({"schema": "1", "surface": {"type": "rotgraph", "profile": {"kind": "catenoid", "c": 1.0}},
                      "chart": "II"})");
  EXPECT_EQ(run("verify-lemmas", o), cli::kExitFailure);
  const json r = readJson(o.outDir / "lemma_report.json");
  EXPECT_EQ(r["error"]["code"], "NotPositivelyCurved");
  EXPECT_FALSE(r["pass"].get<bool>());
}

TEST_F(CommandTest, SolveCapWritesVerdictAndProfile) {
  auto o = options(R"({"schema": "1", "command": "solve-cap", "cap": {"mode": "cmc", "H": 1.0, "apex": 1.0}})");
  ASSERT_EQ(run("solve-cap", o), cli::kExitOk) << err_.str();
  const json r = readJson(o.outDir / "height_verdict.json");
  const json& v = r["caps"][0]["verdict"];
  EXPECT_NEAR(v["measuredHeight"].get<double>(), 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(v["bound"].get<double>(), 1.0);
  EXPECT_NEAR(r["caps"][0]["profile"]["boundaryRadius"].get<double>(), 1.0, 1e-6);
  const std::string csv = readText(o.outDir / "cap_profile.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,u,uPrime,curvature");
}

TEST_F(CommandTest, MinimalModeWritesRigidity) {
  auto o = options(R"({"schema": "1", "warp": {"family": "Affine", "a": 1.0},
                      "cap": {"mode": "minimal", "apexHeights": [0.1, 0.5]}})");
  ASSERT_EQ(run("solve-cap", o), cli::kExitOk) << err_.str();
  const json r = readJson(o.outDir / "rigidity.json");
  EXPECT_EQ(r["rigidity"]["verdict"], "no such minimal surface");
  EXPECT_EQ(r["rigidity"]["compactCaps"], 0);
}

TEST_F(CommandTest, SweepIsOrderedAndDeterministic) {
  const char* cfg = R"({"schema": "1", "warp": {"family": "ExpScaled", "a": 1.0, "b": -1.0},
    "sweep": {"mode": "cmc", "values": [1.0, 2.0], "apexHeights": [0.2, 0.4, 0.6], "threads": 3}})";
  auto a = options(cfg, "a");
  ASSERT_EQ(run("sweep", a), cli::kExitOk) << err_.str();
  auto b = options(cfg, "b");
  ASSERT_EQ(run("sweep", b), cli::kExitOk);
  const std::string csv = readText(a.outDir / "sweep.csv");
  EXPECT_EQ(csv, readText(b.outDir / "sweep.csv"));
  EXPECT_EQ(readText(a.outDir / "sweep_summary.json"), readText(b.outDir / "sweep_summary.json"));

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "h0,target,measuredHeight,bound,pass,status");
  std::vector<std::pair<double, double>> keys;
  while (std::getline(lines, line)) {
    std::istringstream row(line);
    std::string h0, target;
    std::getline(row, h0, ',');
    std::getline(row, target, ',');
    keys.emplace_back(std::stod(target), std::stod(h0));
  }
  ASSERT_EQ(keys.size(), 6u);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_EQ(readJson(a.outDir / "sweep_summary.json")["rows"], 6);
}

TEST(CommandNames, FourSubcommands) {
  EXPECT_EQ(cli::commandNames(), (std::vector<std::string>{"verify-compat", "verify-lemmas", "solve-cap", "sweep"}));
}
