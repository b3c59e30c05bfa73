// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <memory>

#include "srploc/gcc.hpp"
#include "srploc/geometry.hpp"
#include "srploc/geometry_io.hpp"
#include "srploc/sim.hpp"
#include "srploc/srp.hpp"
#include "srploc/stft.hpp"

#ifndef SRPLOC_ARRAYS_DIR
#error "SRPLOC_ARRAYS_DIR must point at the bundled array files"
#endif

namespace {

const srploc::ArrayGeometry& robot_head() {
  static const srploc::ArrayGeometry geom =
      srploc::read_geometry(std::string(SRPLOC_ARRAYS_DIR) + "/robot_head_like_12ch.json");
  return geom;
}

const srploc::SignalBlock& block_512ms() {
  static const srploc::SignalBlock block = [] {
    srploc::SceneSpec scene{.geometry = robot_head(), .trajectory = {{0.0, 40.0, 10.0}}};
    scene.duration = 0.512;
    return srploc::render(scene).signal;
  }();
  return block;
}

void BM_Stft(benchmark::State& state) {
  srploc::StftAnalyzer analyzer(1024, 512);
  for (auto _ : state) benchmark::DoNotOptimize(analyzer.analyze(block_512ms()));
}
BENCHMARK(BM_Stft)->Unit(benchmark::kMillisecond);

void BM_LocalSpectrum(benchmark::State& state) {
  const auto spec = srploc::stft(block_512ms(), 1024);
  const auto pairs = srploc::derive_pairs(robot_head(), 16000.0, 343.0);
  const srploc::AoaAxis axis(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(srploc::local_spectrum(spec, pairs.front(), axis));
}
BENCHMARK(BM_LocalSpectrum)->Unit(benchmark::kMicrosecond);

void BM_ProcessorSetup(benchmark::State& state) {
  const auto pairs = srploc::derive_pairs(robot_head(), 16000.0, 343.0);
  auto grid = std::make_shared<const srploc::DoaGrid>(1.0, 1.0);
  for (auto _ : state) {
    srploc::SrpPhatProcessor proc(grid, pairs, {});
    benchmark::DoNotOptimize(proc.pairs().data());
  }
}
BENCHMARK(BM_ProcessorSetup)->Unit(benchmark::kMillisecond);

// One 512 ms block, 12 mics / 66 pairs, range(0) degree grid.
void BM_ProcessBlock(benchmark::State& state) {
  const double res = static_cast<double>(state.range(0));
  const auto spec = srploc::stft(block_512ms(), 1024);
  auto grid = std::make_shared<const srploc::DoaGrid>(res, res);
  const srploc::SrpPhatProcessor proc(grid, srploc::derive_pairs(robot_head(), 16000.0, 343.0), {});
  for (auto _ : state) benchmark::DoNotOptimize(proc.process(spec));
  state.counters["grid_points"] = static_cast<double>(grid->size());
}
BENCHMARK(BM_ProcessBlock)->Arg(1)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_FindPeak(benchmark::State& state) {
  const srploc::DoaGrid grid(1.0, 1.0);
  srploc::AngularSpectrum s;
  s.values.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) s.values[g] = static_cast<double>((g * 7919) % 10007);
  for (auto _ : state) benchmark::DoNotOptimize(srploc::find_peaks(s, grid));
}
BENCHMARK(BM_FindPeak)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
