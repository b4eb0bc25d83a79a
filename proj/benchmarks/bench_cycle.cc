#include <benchmark/benchmark.h>

#include "srgov/governor.h"
#include "srgov/harness/config.h"
#include "srgov/harness/episode.h"
#include "srgov/harness/mdp.h"
#include "srgov/random.h"
#include "srgov/srsm.h"

namespace {

using namespace srgov;

const srsm::LoopSetup& Loop() {
  static const srsm::LoopSetup setup = harness::BuildLoop(harness::RunConfig{});
  return setup;
}

void BM_RunCycle(benchmark::State& state) {
  const srsm::LoopSetup& setup = Loop();
  const auto sp = governor::Setpoint::AtPosition(Eigen::Vector3d(1.0, 1.0, 1.0));
  srsm::CycleOptions options;
  options.record_every = static_cast<int>(state.range(0));
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        srsm::RunCycle(setup, sp.state(), sp.state(), sp, rng, options));
  }
}
BENCHMARK(BM_RunCycle)->Arg(0)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_BaselineEpisode(benchmark::State& state) {
  const srsm::LoopSetup& setup = Loop();
  const harness::RunConfig cfg;
  const auto policy = governor::AlphaPolicy::Baseline();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        harness::RunEpisode(setup, cfg.mission, policy, harness::EpisodeOptions{}, seed++));
  }
}
BENCHMARK(BM_BaselineEpisode)->Unit(benchmark::kMillisecond);

}  // namespace
