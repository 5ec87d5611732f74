#include <benchmark/benchmark.h>

#include "warpsurf/compat.hpp"
#include "warpsurf/conformal.hpp"
#include "warpsurf/fundforms.hpp"
#include "warpsurf/graphsolve.hpp"

namespace ws = warpsurf;

namespace {

const ws::AmbientSpace kSpace(1, ws::WarpFn::expScaled(1.0, -1.0));

void BM_FundamentalData(benchmark::State& state) {
  const ws::Immersion imm = ws::rotGraph(ws::Profile::cosine(0.2, 0.1, 3.0, 0.1, 0.4));
  const ws::ImmersionJet jet = imm.jetAt(0.25, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(ws::fundamentalData(kSpace, jet));
}
BENCHMARK(BM_FundamentalData);

void BM_FiniteDifferenceJet(benchmark::State& state) {
  const ws::Immersion imm = ws::rotGraph(ws::Profile::cosine(0.2, 0.1, 3.0, 0.1, 0.4)).withFiniteDifferenceJets();
  for (auto _ : state) benchmark::DoNotOptimize(imm.jetAt(0.25, 0.7));
}
BENCHMARK(BM_FiniteDifferenceJet);

void BM_CompatPoint(benchmark::State& state) {
  const ws::Immersion imm = ws::rotGraph(ws::Profile::cosine(0.2, 0.1, 3.0, 0.1, 0.4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ws::gaussResidual(kSpace, imm, 0.25, 0.7));
    benchmark::DoNotOptimize(ws::structureResiduals(kSpace, imm, 0.25, 0.7));
  }
}
BENCHMARK(BM_CompatPoint);

void BM_ShootCap(benchmark::State& state) {
  ws::CapProblem p;
  p.mode = state.range(0) == 0 ? ws::CapMode::CMC : ws::CapMode::ExtrinsicK;
  p.target = 1.0;
  p.space = ws::AmbientSpace(0, ws::WarpFn::expScaled(1.0, -1.0));
  p.apexHeight = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(ws::shootCap(p));
}
BENCHMARK(BM_ShootCap)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_SphereChart(benchmark::State& state) {
  const ws::AmbientSpace flat(0, ws::WarpFn{});
  const ws::Profile sphere = ws::Profile::hemisphere(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ws::buildChart(flat, sphere, ws::ChartKind::ConformalII));
}
BENCHMARK(BM_SphereChart)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
