#include "warpsurf_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "warpsurf/compat.hpp"
#include "warpsurf/conformal.hpp"
#include "warpsurf/errors.hpp"
#include "warpsurf/graphsolve.hpp"
#include "warpsurf_cli/config.hpp"
#include "warpsurf_cli/report_json.hpp"

namespace warpsurf::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kHeightSlack = 1e-8;

json header(const std::string& command, const RunOptions& opt) {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["tolScale"] = opt.tolScale;
  return j;
}

json errorJson(const GeometryError& e) {
  return {{"code", std::string(toString(e.code()))}, {"message", e.what()}};
}

fs::path prepareOut(const RunOptions& opt) {
  std::error_code ec;
  fs::create_directories(opt.outDir, ec);
  if (ec) throw ConfigError("cannot create output directory " + opt.outDir.string() + ": " + ec.message());
  return opt.outDir;
}

fs::path baseDirOf(const RunOptions& opt) {
  const fs::path parent = opt.config.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

/// One tolerance check line for reports and the console.
struct Check {
  std::string label;
  double value;
  double tolerance;
  bool upper = true;  // value <= tolerance, else value >= tolerance

  // A lower-bound check on +inf (a convergence order whose residual already
  // sits at roundoff) passes; NaN never does.
  bool pass() const {
    if (std::isnan(value)) return false;
    return upper ? std::isfinite(value) && value <= tolerance : value >= tolerance;
  }
  json toJson() const {
    json v = std::isfinite(value) ? json(value) : json(nullptr);
    if (!upper && std::isinf(value) && value > 0) v = "converged";
    return {{"eq", label},
            {"value", v},
            {upper ? "tolerance" : "minimum", tolerance},
            {"pass", pass()}};
  }
};

bool summarize(const std::vector<Check>& checks, json& report, std::ostream& out) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back(c.toJson());
    all = all && c.pass();
    out << std::left << std::setw(14) << c.label << (c.upper ? " max=" : " got=") << fmt(c.value)
        << (c.upper ? " tol=" : " min=") << fmt(c.tolerance) << (c.pass() ? "  ok" : "  FAIL") << '\n';
  }
  report["checks"] = arr;
  report["pass"] = all;
  return all;
}

/// Runs the config phase; any failure there is an exit-2 config error.
template <class Parse>
bool parsePhase(Parse parse, std::ostream& err) {
  try {
    parse();
    return true;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const GeometryError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
  }
  return false;
}

// ---------------------------------------------------------------- compat

struct CompatConfig {
  AmbientSpace space{0, WarpFn{}};
  SurfaceSpec surface;
  std::optional<Immersion> immersion;
  GridSpec grid;
  CompatOptions options;
  std::map<std::string, double> tolerances;
};

CompatConfig parseCompat(const RunOptions& opt) {
  const json cfg = loadConfig(opt.config, "verify-compat");
  const Fields top(cfg, "config");
  top.has("schema");
  top.has("command");
  CompatConfig c;
  c.space = parseAmbient(top);
  c.surface = parseSurface(top.object("surface"), c.space, baseDirOf(opt));

  const std::string jets = top.text("jets", "exact");
  if (jets == "exact") {
    if (!c.surface.surface->immersion.hasExactJets()) throw ConfigError("surface has no exact jets");
    c.immersion = c.surface.surface->immersion;
  } else if (jets == "fd") {
    c.immersion = c.surface.surface->immersion.withFiniteDifferenceJets(top.number("fdStep", Immersion::kDefaultFdStep));
  } else {
    throw ConfigError("jets must be \"exact\" or \"fd\"");
  }
  c.options.orientation =
      top.has("orientation") ? parseOrientation(top.text("orientation")) : c.surface.defaultOrientation;
  c.options.step = top.number("step", 0.0);
  if (top.has("grid")) {
    const Fields g = top.object("grid");
    c.grid.nu = g.integer("nu", c.grid.nu);
    c.grid.nv = g.integer("nv", c.grid.nv);
    c.grid.marginFraction = g.number("margin", c.grid.marginFraction);
    c.grid.randomPoints = g.integer("random", c.grid.randomPoints);
    c.grid.seed = static_cast<std::uint64_t>(g.integer("seed", static_cast<int>(c.grid.seed)));
    g.finish();
  }
  if (opt.seed) c.grid.seed = *opt.seed;

  const double base = jets == "exact" ? 1e-6 : 1e-4;
  for (const char* k : {"gauss", "codazzi", "eq35", "eq33", "eq34"}) c.tolerances[k] = base;
  if (top.has("tolerances")) {
    const Fields t = top.object("tolerances");
    for (auto& [k, v] : c.tolerances) v = t.number(k, v);
    t.finish();
  }
  for (auto& [k, v] : c.tolerances) v *= opt.tolScale;
  top.finish();
  c.grid.points(c.immersion->domain());  // validates the grid
  return c;
}

// ---------------------------------------------------------------- lemmas

struct LemmaConfig {
  AmbientSpace space{0, WarpFn{}};
  SurfaceSpec surface;
  ChartKind kind = ChartKind::ConformalII;
  ChartOptions chartOptions;
  ChartGrid grid;
  LemmaOptions lemma;
  double tolerance = 1e-5;
  double algebraicTolerance = 1e-8;
  double minOrder = 1.8;
  bool convergence = true;
  bool auxiliary = true;
};

LemmaConfig parseLemmas(const RunOptions& opt) {
  const json cfg = loadConfig(opt.config, "verify-lemmas");
  const Fields top(cfg, "config");
  top.has("schema");
  top.has("command");
  LemmaConfig c;
  c.space = parseAmbient(top);
  c.surface = parseSurface(top.object("surface"), c.space, baseDirOf(opt));
  if (!c.surface.profile) throw ConfigError("verify-lemmas needs a rotational surface (sphere, rotgraph, profileCsv, solvedCap)");

  const std::string chart = top.text("chart", "II");
  if (chart == "II" || chart == "ConformalII") {
    c.kind = ChartKind::ConformalII;
  } else if (chart == "I" || chart == "IsothermalI") {
    c.kind = ChartKind::IsothermalI;
  } else {
    throw ConfigError("chart must be \"I\" or \"II\"");
  }
  if (top.has("orientation")) c.chartOptions.orientation = parseOrientation(top.text("orientation"));
  c.chartOptions.rLo = top.number("rLo", c.chartOptions.rLo);
  c.chartOptions.rHi = top.number("rHi", c.chartOptions.rHi);
  if (top.has("grid")) {
    const Fields g = top.object("grid");
    c.grid.ns = g.integer("ns", c.grid.ns);
    c.grid.ntheta = g.integer("ntheta", c.grid.ntheta);
    c.grid.marginFraction = g.number("margin", c.grid.marginFraction);
    g.finish();
  }
  c.lemma.fdStep = top.number("fdStep", c.lemma.fdStep);
  c.lemma.richardson = top.boolean("richardson", c.lemma.richardson);
  c.lemma.constancyTol = top.number("constancyTol", c.lemma.constancyTol);
  c.tolerance = top.number("tolerance", c.surface.solverProduced ? 1e-3 : 1e-5) * opt.tolScale;
  c.algebraicTolerance = top.number("algebraicTolerance", c.algebraicTolerance) * opt.tolScale;
  c.minOrder = top.number("minOrder", c.minOrder);
  c.convergence = top.boolean("convergence", c.convergence);
  c.auxiliary = top.boolean("auxiliary", c.auxiliary);
  top.finish();
  if (!(c.lemma.fdStep > 0.0)) throw ConfigError("fdStep must be positive");
  return c;
}

json orderJson(double order) {
  if (std::isinf(order) && order > 0) return "converged";
  return std::isfinite(order) ? json(order) : json(nullptr);
}

// ---------------------------------------------------------------- caps

struct CapConfig {
  CapProblem problem;
  std::vector<double> apexHeights;
  RigidityOptions rigidity;
};

CapConfig parseSolveCap(const RunOptions& opt) {
  const json cfg = loadConfig(opt.config, "solve-cap");
  const Fields top(cfg, "config");
  top.has("schema");
  top.has("command");
  CapConfig c;
  const AmbientSpace space = parseAmbient(top);
  const Fields cap = top.object("cap");
  c.problem = parseCapProblem(cap, space);
  const bool one = cap.has("apex"), many = cap.has("apexHeights");
  if (one && many) throw ConfigError("give either cap.apex or cap.apexHeights");
  if (one) c.apexHeights = {cap.number("apex")};
  if (many) c.apexHeights = cap.numbers("apexHeights");
  if (c.apexHeights.empty()) throw ConfigError("no apex heights given");
  if (c.problem.mode == CapMode::Minimal) {
    c.rigidity.rMax = c.problem.rMax;
    c.rigidity.heightMax = cap.number("heightMax", 20.0);
    c.rigidity.workingInterval = cap.number("workingInterval", c.rigidity.workingInterval);
  }
  cap.finish();
  top.finish();
  for (double h : c.apexHeights) {
    CapProblem p = c.problem;
    p.apexHeight = h;
    p.validate();
    if (c.problem.mode != CapMode::Minimal && !(h > 0.0)) throw ConfigError("apex heights must be positive");
  }
  return c;
}

struct SweepConfig {
  CapProblem problem;
  std::vector<double> values;
  std::vector<double> apexHeights;   // absolute, or
  std::vector<double> apexFractions; // fractions of the bound
  unsigned threads = 0;
};

SweepConfig parseSweep(const RunOptions& opt) {
  const json cfg = loadConfig(opt.config, "sweep");
  const Fields top(cfg, "config");
  top.has("schema");
  top.has("command");
  SweepConfig c;
  c.problem.space = parseAmbient(top);
  const Fields sw = top.object("sweep");
  c.problem.mode = parseCapMode(sw.text("mode"));
  if (c.problem.mode == CapMode::Minimal) throw ConfigError("sweeps compare against height bounds; use cmc or ke");
  c.values = sw.numbers("values");
  const int sources = int(sw.has("apexHeights")) + int(sw.has("apexFractions")) + int(sw.has("apexRange"));
  if (sources != 1) throw ConfigError("give exactly one of sweep.apexHeights, sweep.apexFractions, sweep.apexRange");
  if (sw.has("apexHeights")) c.apexHeights = sw.numbers("apexHeights");
  if (sw.has("apexFractions")) c.apexFractions = sw.numbers("apexFractions");
  if (sw.has("apexRange")) {
    const Fields r = sw.object("apexRange");
    const double from = r.number("from"), to = r.number("to");
    const int count = r.integer("count", 10);
    r.finish();
    if (count < 1) throw ConfigError("sweep.apexRange.count must be >= 1");
    for (int k = 0; k < count; ++k) c.apexHeights.push_back(count == 1 ? from : from + (to - from) * k / (count - 1));
  }
  c.threads = static_cast<unsigned>(std::max(0, sw.integer("threads", 0)));
  parseSolverSettings(sw, c.problem);
  sw.finish();
  top.finish();
  if (c.values.empty()) throw ConfigError("sweep.values is empty");
  if (c.apexHeights.empty() && c.apexFractions.empty()) throw ConfigError("empty apex range");
  for (double v : c.values) {
    CapProblem p = c.problem;
    p.target = v;
    p.validate();
  }
  for (double h : c.apexHeights) {
    if (!(h > 0.0)) throw ConfigError("apex heights must be positive");
  }
  for (double fr : c.apexFractions) {
    if (!(fr > 0.0)) throw ConfigError("apex fractions must be positive");
  }
  return c;
}

double boundFor(const CapProblem& p) {
  const double f0 = p.space.warp().eval(0.0);
  return p.mode == CapMode::CMC ? std::exp(f0) / p.target : std::exp(f0) / std::sqrt(p.target);
}

/// Evaluates fn(i) for i in [0, n) on a small worker pool; results keep
/// their index so the output order never depends on scheduling.
template <class T>
std::vector<T> parallelMap(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

const std::vector<std::string>& commandNames() {
  static const std::vector<std::string> names{"verify-compat", "verify-lemmas", "solve-cap", "sweep"};
  return names;
}

int verifyCompat(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  CompatConfig c;
  fs::path outDir;
  if (!parsePhase([&] { c = parseCompat(opt); outDir = prepareOut(opt); }, err)) return kExitConfig;

  json report = header("verify-compat", opt);
  report["ambient"] = ambientToJson(c.space);
  report["surface"] = c.surface.echo;
  report["tolerances"] = c.tolerances;
  int code = kExitOk;
  try {
    const CompatReport r = evaluateCompat(c.space, *c.immersion, c.grid, c.options);
    report["report"] = toJson(r);
    const std::vector<Check> checks{{"gauss", r.gauss.max, c.tolerances["gauss"]},
                                    {"codazzi", r.codazzi.max, c.tolerances["codazzi"]},
                                    {"eq35", r.eq35.max, c.tolerances["eq35"]},
                                    {"eq33", r.eq33.max, c.tolerances["eq33"]},
                                    {"eq34", r.eq34.max, c.tolerances["eq34"]}};
    if (!summarize(checks, report, out)) code = kExitFailure;
  } catch (const GeometryError& e) {
    report["error"] = errorJson(e);
    report["pass"] = false;
    err << "error: " << e.what() << '\n';
    code = kExitFailure;
  }
  writeJsonFile(outDir / "compat_report.json", report);
  return code;
}

int verifyLemmas(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  LemmaConfig c;
  fs::path outDir;
  if (!parsePhase([&] { c = parseLemmas(opt); outDir = prepareOut(opt); }, err)) return kExitConfig;

  json report = header("verify-lemmas", opt);
  report["ambient"] = ambientToJson(c.space);
  report["surface"] = c.surface.echo;
  report["tolerances"] = {{"identity", c.tolerance},
                          {"algebraic", c.algebraicTolerance},
                          {"minOrder", c.minOrder},
                          {"constancy", c.lemma.constancyTol}};
  int code = kExitOk;
  try {
    const ConformalChart chart = buildChart(c.space, *c.surface.profile, c.kind, c.chartOptions);
    report["chart"] = {{"kind", toString(chart.kind())},
                       {"orientation", chart.orientation().describe()},
                       {"rLo", chart.rLo()},
                       {"rHi", chart.rHi()},
                       {"sMin", chart.sMin()}};
    const LemmaResiduals lemma =
        c.kind == ChartKind::ConformalII ? checkLemma32(chart, c.grid, c.lemma) : checkLemma33(chart, c.grid, c.lemma);
    report["lemma"] = toJson(lemma);

    ResidualSet algebraic;
    for (const auto& [s, th] : c.grid.points(chart)) {
      const ImmersionJet jet = chart.jetAt(s, th);
      algebraic.merge(checkLemma31(complexify(fundamentalData(c.space, jet, chart.orientation()), jet)));
    }
    report["algebraic"] = toJson(algebraic);

    std::vector<Check> checks;
    for (const auto& label : identityLabels(c.kind)) {
      checks.push_back({label, lemma.residuals.at(label).max, c.tolerance});
    }
    for (const auto& [label, stat] : algebraic.entries()) checks.push_back({label, stat.max, c.algebraicTolerance});

    if (c.convergence) {
      const auto orders = convergenceOrders(chart, c.grid, c.lemma.fdStep);
      json oj;
      for (const auto& label : identityLabels(c.kind)) {
        const double o = orders.at(label);
        oj[label] = orderJson(o);
        checks.push_back({"order:" + label, o, c.minOrder, false});
      }
      report["convergence"] = oj;
    }

    if (c.auxiliary) {
      try {
        AuxLaplacianReport aux;
        if (c.kind == ChartKind::ConformalII) {
          aux = checkAuxLaplacianKe(chart, c.grid, c.lemma);
        } else {
          const double s0 = 0.5 * chart.sMin();
          const ImmersionJet jet = chart.jetAt(s0, 0.0);
          const double H = fundamentalData(c.space, jet, chart.orientation()).H;
          aux = std::abs(H) <= 1e-8 ? checkMinimalIdentity(chart, c.grid, c.lemma)
                                     : checkAuxLaplacianH(chart, c.grid, c.lemma);
        }
        report["auxiliary"] = toJson(aux);
        checks.push_back({aux.label, aux.maxDiff, c.tolerance});
      } catch (const GeometryError& e) {
        if (e.code() != ErrorCode::NotConstantKe && e.code() != ErrorCode::NotConstantH &&
            e.code() != ErrorCode::NotMinimal) {
          throw;
        }
        report["auxiliary"] = {{"skipped", e.what()}};
      }
    }
    if (!summarize(checks, report, out)) code = kExitFailure;
  } catch (const GeometryError& e) {
    report["error"] = errorJson(e);
    report["pass"] = false;
    err << "error: " << e.what() << '\n';
    code = kExitFailure;
  }
  writeJsonFile(outDir / "lemma_report.json", report);
  return code;
}

int solveCap(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  CapConfig c;
  fs::path outDir;
  if (!parsePhase([&] { c = parseSolveCap(opt); outDir = prepareOut(opt); }, err)) return kExitConfig;

  json report = header("solve-cap", opt);
  report["ambient"] = ambientToJson(c.problem.space);
  report["mode"] = toString(c.problem.mode);
  int code = kExitOk;
  try {
    if (c.problem.mode == CapMode::Minimal) {
      const RigidityReport r = minimalRigidityCheck(c.problem.space, c.apexHeights, c.rigidity);
      report["rigidity"] = toJson(r);
      report["pass"] = r.dichotomyHolds && r.fPrimeNonneg;
      out << "verdict: " << r.verdict << ", compact caps: " << r.compactCaps
          << (r.dichotomyHolds ? ", dichotomy holds" : ", dichotomy FAILS") << '\n';
      if (!r.fPrimeNonneg) out << "warning: f' < 0 somewhere on the working interval\n";
      if (!(r.dichotomyHolds && r.fPrimeNonneg)) code = kExitFailure;
      writeJsonFile(outDir / "rigidity.json", report);
      return code;
    }
    report["target"] = c.problem.target;
    report["tolerances"] = {{"heightSlack", kHeightSlack * opt.tolScale}, {"solver", c.problem.tolerance}};
    json caps = json::array();
    bool all = true;
    for (std::size_t i = 0; i < c.apexHeights.size(); ++i) {
      CapProblem p = c.problem;
      p.apexHeight = c.apexHeights[i];
      const CapProfile cap = shootCap(p);
      HeightVerdict v = heightVerdict(cap, p);
      v.pass = !v.reachedBoundary || v.measuredHeight <= v.bound + kHeightSlack * opt.tolScale;
      const std::string csv = c.apexHeights.size() == 1 ? "cap_profile.csv" : "cap_profile_" + std::to_string(i) + ".csv";
      std::ofstream f(outDir / csv);
      writeCapCsv(f, cap);
      json entry;
      entry["apexHeight"] = p.apexHeight;
      entry["profile"] = toJson(cap);
      entry["verdict"] = toJson(v);
      entry["csv"] = csv;
      caps.push_back(entry);
      all = all && v.pass;
      out << "h0=" << p.apexHeight << " " << toString(cap.outcome) << " height=" << std::setprecision(10)
          << v.measuredHeight << " bound=" << v.bound << (v.pass ? "  pass" : "  FAIL") << '\n';
    }
    report["caps"] = caps;
    report["pass"] = all;
    if (!all) code = kExitFailure;
  } catch (const GeometryError& e) {
    report["error"] = errorJson(e);
    report["pass"] = false;
    err << "error: " << e.what() << '\n';
    code = kExitFailure;
  }
  writeJsonFile(outDir / "height_verdict.json", report);
  return code;
}

int sweep(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  SweepConfig c;
  fs::path outDir;
  if (!parsePhase([&] { c = parseSweep(opt); outDir = prepareOut(opt); }, err)) return kExitConfig;

  struct Task {
    double target, apex;
  };
  std::vector<Task> tasks;
  for (double v : c.values) {
    CapProblem p = c.problem;
    p.target = v;
    if (c.apexFractions.empty()) {
      for (double h : c.apexHeights) tasks.push_back({v, h});
    } else {
      for (double fr : c.apexFractions) tasks.push_back({v, fr * boundFor(p)});
    }
  }
  const double slack = kHeightSlack * opt.tolScale;
  const auto rows = parallelMap<SweepRow>(tasks.size(), c.threads, [&](std::size_t i) {
    CapProblem p = c.problem;
    p.target = tasks[i].target;
    p.apexHeight = tasks[i].apex;
    SweepRow row{p.apexHeight, p.target, std::numeric_limits<double>::quiet_NaN(), boundFor(p), false, ""};
    try {
      const CapProfile cap = shootCap(p);
      const HeightVerdict v = heightVerdict(cap, p);
      row.measuredHeight = v.measuredHeight;
      row.pass = !v.reachedBoundary || v.measuredHeight <= v.bound + slack;
      row.status = toString(cap.outcome);
    } catch (const GeometryError& e) {
      row.status = std::string(toString(e.code()));
    }
    return row;
  });

  std::ofstream csv(outDir / "sweep.csv");
  writeSweepCsv(csv, rows);
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.pass; });
  const auto reached = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status == "BoundaryReached"; });
  json summary = header("sweep", opt);
  summary["ambient"] = ambientToJson(c.problem.space);
  summary["mode"] = toString(c.problem.mode);
  summary["tolerances"] = {{"heightSlack", slack}, {"solver", c.problem.tolerance}};
  summary["rows"] = rows.size();
  summary["reachedBoundary"] = reached;
  summary["failed"] = failed;
  summary["pass"] = failed == 0;
  writeJsonFile(outDir / "sweep_summary.json", summary);
  out << rows.size() << " caps, " << reached << " reached t = 0, " << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int runCommand(const std::string& name, const RunOptions& options, std::ostream& out, std::ostream& err) {
  if (!(options.tolScale > 0.0)) {
    err << "config error: --tol-scale must be positive\n";
    return kExitConfig;
  }
  if (name == "verify-compat") return verifyCompat(options, out, err);
  if (name == "verify-lemmas") return verifyLemmas(options, out, err);
  if (name == "solve-cap") return solveCap(options, out, err);
  if (name == "sweep") return sweep(options, out, err);
  err << "unknown command " << name << '\n';
  return kExitConfig;
}

}  // namespace warpsurf::cli
