#include "warpsurf_cli/config.hpp"

#include <fstream>
#include <sstream>

#include "warpsurf/errors.hpp"

namespace warpsurf::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

std::string typeName(const json& j) { return j.type_name(); }

}  // namespace

Fields::Fields(const json& object, std::string path) : object_(&object), path_(std::move(path)) {
  if (!object.is_object()) bad(path_ + " must be a JSON object, got " + typeName(object));
}

bool Fields::has(const std::string& key) const {
  const bool present = object_->contains(key);
  if (present) used_.insert(key);
  return present;
}

const json& Fields::get(const std::string& key) const {
  auto it = object_->find(key);
  if (it == object_->end()) bad("missing required key " + where(key));
  used_.insert(key);
  return *it;
}

double Fields::number(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_number()) bad(where(key) + " must be a number, got " + typeName(v));
  return v.get<double>();
}

double Fields::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int Fields::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const json& v = get(key);
  if (!v.is_number_integer()) bad(where(key) + " must be an integer, got " + typeName(v));
  return v.get<int>();
}

bool Fields::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = get(key);
  if (!v.is_boolean()) bad(where(key) + " must be true or false, got " + typeName(v));
  return v.get<bool>();
}

std::string Fields::text(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_string()) bad(where(key) + " must be a string, got " + typeName(v));
  return v.get<std::string>();
}

std::string Fields::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Fields::numbers(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_array()) bad(where(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) bad(where(key) + " must contain numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

Fields Fields::object(const std::string& key) const {
  const json& v = get(key);
  if (!v.is_object()) bad(where(key) + " must be an object, got " + typeName(v));
  return Fields(v, where(key));
}

void Fields::finish() const {
  std::vector<std::string> unknown;
  for (auto it = object_->begin(); it != object_->end(); ++it) {
    if (!used_.count(it.key())) unknown.push_back(it.key());
  }
  if (unknown.empty()) return;
  std::ostringstream os;
  os << "unknown key" << (unknown.size() > 1 ? "s" : "") << " in " << path_ << ":";
  for (const auto& k : unknown) os << " " << k;
  bad(os.str());
}

json loadConfig(const std::filesystem::path& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) bad("cannot open config " + path.string());
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    bad("malformed JSON in " + path.string() + ": " + e.what());
  }
  if (!cfg.is_object()) bad("config root must be an object");
  if (!cfg.contains("schema")) bad("config lacks the \"schema\" field");
  if (cfg["schema"] != kSchemaVersion) bad("unsupported schema " + cfg["schema"].dump() + ", expected \"1\"");
  if (cfg.contains("command") && cfg["command"] != command) {
    bad("config is for command " + cfg["command"].dump() + ", not " + command);
  }
  return cfg;
}

WarpFn parseWarp(const Fields& f) {
  const std::string family = f.text("family");
  WarpFn w;
  if (family == "Const") {
    w = WarpFn::constant(f.number("c", 0.0));
  } else if (family == "Affine") {
    w = WarpFn::affine(f.number("a"), f.number("b", 0.0));
  } else if (family == "ExpScaled") {
    w = WarpFn::expScaled(f.number("a"), f.number("b"));
  } else if (family == "Quadratic") {
    w = WarpFn::quadratic(f.number("a"), f.number("b", 0.0), f.number("c", 0.0));
  } else {
    bad("unknown warp family \"" + family + "\" in " + f.path());
  }
  f.finish();
  return w;
}

json warpToJson(const WarpFn& w) {
  json j;
  j["family"] = toString(w.family());
  switch (w.family()) {
    case WarpFn::Family::Const: j["c"] = w.c(); break;
    case WarpFn::Family::Affine:
    case WarpFn::Family::ExpScaled:
      j["a"] = w.a();
      j["b"] = w.b();
      break;
    case WarpFn::Family::Quadratic:
      j["a"] = w.a();
      j["b"] = w.b();
      j["c"] = w.c();
      break;
  }
  return j;
}

AmbientSpace parseAmbient(const Fields& top) {
  const bool nested = top.has("ambient");
  const bool flat = top.has("warp");
  if (nested && flat) bad("give either \"ambient\" or a top-level \"warp\", not both");
  if (!nested && !flat) return AmbientSpace(0, WarpFn{});
  if (flat) return AmbientSpace(0, parseWarp(top.object("warp")));
  const Fields amb = top.object("ambient");
  const int kappa = amb.integer("kappa", 0);
  if (kappa < -1 || kappa > 1) bad("ambient.kappa must be -1, 0 or 1");
  const WarpFn warp = amb.has("warp") ? parseWarp(amb.object("warp")) : WarpFn{};
  amb.finish();
  return AmbientSpace(kappa, warp);
}

json ambientToJson(const AmbientSpace& space) {
  json j;
  j["kappa"] = space.kappa();
  j["warp"] = warpToJson(space.warp());
  return j;
}

Orientation parseOrientation(const std::string& name) {
  if (name == "down") return Orientation::down();
  if (name == "up") return Orientation::up();
  if (name == "inward" || name == "parametric-") return Orientation::parametric(-1);
  if (name == "parametric+") return Orientation::parametric(1);
  bad("unknown orientation \"" + name + "\"");
}

namespace {

Profile parseProfile(const Fields& f) {
  const std::string kind = f.text("kind");
  Profile p = Profile::constant(0.0);
  if (kind == "constant") {
    p = Profile::constant(f.number("c", 0.0), f.number("rMin", 0.0), f.number("rMax", 1.0));
  } else if (kind == "paraboloid") {
    p = Profile::paraboloid(f.number("a"), f.number("b"), f.number("rMin", 0.0), f.number("rMax", 1.0));
  } else if (kind == "hemisphere") {
    p = Profile::hemisphere(f.number("R"), f.number("t0", 0.0), f.number("rMin", 0.0), f.number("rMax", -1.0));
  } else if (kind == "catenoid") {
    p = Profile::catenoid(f.number("c"), f.number("t0", 0.0), f.number("rMin", -1.0), f.number("rMax", -1.0));
  } else if (kind == "cosine") {
    p = Profile::cosine(f.number("a"), f.number("b"), f.number("w"), f.number("rMin", 0.0), f.number("rMax", 1.0));
  } else {
    bad("unknown profile kind \"" + kind + "\" in " + f.path());
  }
  f.finish();
  return p;
}

void requireFlatConstant(const AmbientSpace& space, const std::string& what) {
  if (space.kappa() != 0 || !space.warp().isConstant()) {
    bad(what + " is only available for kappa = 0 and a constant warp");
  }
}

}  // namespace

SurfaceSpec parseSurface(const Fields& f, const AmbientSpace& space, const std::filesystem::path& baseDir) {
  SurfaceSpec spec;
  spec.type = f.text("type");
  spec.echo["type"] = spec.type;
  try {
    if (spec.type == "slice") {
      const double t0 = f.number("t0", 0.0), half = f.number("halfWidth", 0.5);
      spec.surface = catalog::slice(t0, space.warp(), {-half, half, -half, half});
      spec.echo["t0"] = t0;
      spec.echo["halfWidth"] = half;
    } else if (spec.type == "sphere") {
      requireFlatConstant(space, "the sphere surface");
      const double R = f.number("R", 1.0), t0 = f.number("t0", 0.0);
      const double c = space.warp().eval(0.0);
      spec.surface = catalog::euclidSphere(R, t0, c);
      spec.profile = Profile::hemisphere(R, t0);  // rotational view for chart-based checks
      spec.echo["R"] = R;
      spec.echo["t0"] = t0;
    } else if (spec.type == "cylinder") {
      requireFlatConstant(space, "the cylinder surface");
      const double R = f.number("R", 1.0);
      spec.surface = catalog::cylinder(R, space.warp().eval(0.0));
      spec.defaultOrientation = Orientation::parametric(-1);
      spec.echo["R"] = R;
    } else if (spec.type == "rotgraph") {
      const Fields pf = f.object("profile");
      spec.profile = parseProfile(pf);
      spec.surface = catalog::rotationalGraph(*spec.profile);
      spec.echo["profile"] = spec.profile->name();
    } else if (spec.type == "profileCsv") {
      std::filesystem::path p = f.text("path");
      if (p.is_relative()) p = baseDir / p;
      const ProfileSamples s = readProfileCsv(p.string());
      spec.profile = profileFromSamples(s.r, s.u);
      spec.surface = catalog::rotationalGraph(*spec.profile);
      spec.solverProduced = true;
      spec.echo["path"] = f.text("path");
      spec.echo["samples"] = s.r.size();
    } else if (spec.type == "solvedCap") {
      CapProblem problem = parseCapProblem(f, space);
      problem.apexHeight = f.number("apex");
      problem.validate();
      const CapProfile cap = shootCap(problem);
      SolvedProfileOptions opts;
      opts.nodes = f.integer("nodes", opts.nodes);
      spec.profile = solvedProfile(problem, cap, opts);
      spec.surface = catalog::rotationalGraph(*spec.profile);
      spec.solverProduced = true;
      spec.echo["mode"] = toString(problem.mode);
      spec.echo["target"] = problem.target;
      spec.echo["apex"] = problem.apexHeight;
      spec.echo["outcome"] = toString(cap.outcome);
    } else {
      bad("unknown surface type \"" + spec.type + "\"");
    }
  } catch (const GeometryError& e) {
    bad(std::string("cannot build surface: ") + e.what());
  }
  f.finish();
  return spec;
}

CapMode parseCapMode(const std::string& name) {
  if (name == "cmc") return CapMode::CMC;
  if (name == "ke") return CapMode::ExtrinsicK;
  if (name == "minimal") return CapMode::Minimal;
  bad("unknown cap mode \"" + name + "\" (cmc, ke or minimal)");
}

void parseSolverSettings(const Fields& f, CapProblem& p) {
  p.rMax = f.number("rMax", p.rMax);
  p.arcMax = f.number("arcMax", p.arcMax);
  p.heightMax = f.number("heightMax", p.heightMax);
  p.tolerance = f.number("tolerance", p.tolerance);
  p.maxStep = f.number("maxStep", p.maxStep);
  const std::string stepper = f.text("stepper", "dopri5");
  if (stepper == "dopri5") {
    p.stepper = Stepper::Dopri5;
  } else if (stepper == "rk78") {
    p.stepper = Stepper::Fehlberg78;
  } else {
    bad("unknown stepper \"" + stepper + "\" (dopri5 or rk78)");
  }
}

CapProblem parseCapProblem(const Fields& f, const AmbientSpace& space) {
  CapProblem p;
  p.space = space;
  p.mode = parseCapMode(f.text("mode"));
  if (p.mode == CapMode::CMC) p.target = f.number("H");
  if (p.mode == CapMode::ExtrinsicK) p.target = f.number("Ke");
  parseSolverSettings(f, p);
  return p;
}

}  // namespace warpsurf::cli
