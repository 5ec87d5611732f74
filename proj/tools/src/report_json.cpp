#include "warpsurf_cli/report_json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "warpsurf/errors.hpp"

namespace warpsurf::cli {

namespace {

/// JSON has no NaN or infinity; both become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void writeNumber(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
  } else {
    out << v;
  }
}

}  // namespace

json toJson(const std::string& label, const ResidualStat& stat) {
  json j;
  j["eq"] = label;
  j["max"] = num(stat.max);
  j["mean"] = num(stat.mean());
  j["points"] = stat.points;
  return j;
}

json toJson(const ResidualSet& set) {
  json arr = json::array();
  for (const auto& [label, stat] : set.entries()) arr.push_back(toJson(label, stat));
  return arr;
}

json toJson(const CompatReport& r) {
  json j;
  j["grid"] = r.grid;
  j["jetMode"] = r.jetMode;
  j["orientation"] = r.orientation;
  j["step"] = r.step;
  j["residuals"] = json::array({toJson("gauss", r.gauss), toJson("codazzi", r.codazzi), toJson("eq35", r.eq35),
                                toJson("eq33", r.eq33), toJson("eq34", r.eq34)});
  j["diagnostics"] = json::array({toJson("codazzi_sign_flipped", r.codazziFlipped)});
  return j;
}

json toJson(const LemmaResiduals& lemma) {
  json j;
  j["chart"] = toString(lemma.kind);
  j["fdStep"] = lemma.fdStep;
  j["richardson"] = lemma.richardson;
  j["points"] = lemma.points;
  j["residuals"] = toJson(lemma.residuals);
  return j;
}

json toJson(const AuxLaplacianReport& aux) {
  json j;
  j["eq"] = aux.label;
  j["constant"] = num(aux.constant);
  j["spread"] = num(aux.spread);
  j["maxDiff"] = num(aux.maxDiff);
  j["minWitness"] = num(aux.minWitness);
  j["points"] = aux.points;
  return j;
}

json toJson(const WarpHypotheses& h) {
  json j;
  j["samples"] = h.samples;
  j["fNonneg"] = {{"holds", h.fNonneg}, {"min", num(h.minF)}, {"at", num(h.minFAt)}};
  j["fPrimeNonpos"] = {{"holds", h.fPrimeNonpos}, {"max", num(h.maxFPrime)}, {"at", num(h.maxFPrimeAt)}};
  j["fDoublePrimeNonneg"] = {
      {"holds", h.fDoublePrimeNonneg}, {"min", num(h.minFDoublePrime)}, {"at", num(h.minFDoublePrimeAt)}};
  return j;
}

json toJson(const HeightVerdict& v) {
  json j;
  j["measuredHeight"] = num(v.measuredHeight);
  j["bound"] = num(v.bound);
  j["margin"] = num(v.margin);
  j["reachedBoundary"] = v.reachedBoundary;
  j["hypotheses"] = toJson(v.hypotheses);
  j["pass"] = v.pass;
  return j;
}

json toJson(const RigidityReport& r) {
  json j;
  j["fPrimeNonneg"] = r.fPrimeNonneg;
  j["fPrimeVanishesAtZero"] = r.fPrimeVanishesAtZero;
  j["sliceIsSolution"] = r.sliceIsSolution;
  j["compactCaps"] = r.compactCaps;
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"apexHeight", e.apexHeight},
                       {"outcome", toString(e.outcome)},
                       {"compactCap", e.compactCap},
                       {"reason", e.reason}});
  }
  j["entries"] = entries;
  j["dichotomyHolds"] = r.dichotomyHolds;
  j["verdict"] = r.verdict;
  return j;
}

json toJson(const CapProfile& cap) {
  json j;
  j["outcome"] = toString(cap.outcome);
  j["reason"] = cap.reason;
  j["maxHeight"] = num(cap.maxHeight);
  j["boundaryRadius"] = num(cap.boundaryRadius);
  j["axisSecondDerivative"] = num(cap.axisSecond);
  j["maxCurvatureError"] = num(cap.maxCurvatureError);
  j["nodes"] = cap.rGrid.size();
  return j;
}

void writeCapCsv(std::ostream& out, const CapProfile& cap) {
  out << std::setprecision(17) << "r,u,uPrime,curvature\n";
  for (std::size_t i = 0; i < cap.rGrid.size(); ++i) {
    out << cap.rGrid[i] << ',' << cap.uValues[i] << ',' << cap.uPrime[i] << ',' << cap.curvature[i] << '\n';
  }
}

void writeSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << std::setprecision(17) << "h0,target,measuredHeight,bound,pass,status\n";
  for (const auto& r : rows) {
    out << r.apexHeight << ',' << r.target << ',';
    writeNumber(out, r.measuredHeight);
    out << ',' << r.bound << ',' << (r.pass ? "true" : "false") << ',' << r.status << '\n';
  }
}

void writeJsonFile(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::BadInput, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace warpsurf::cli
