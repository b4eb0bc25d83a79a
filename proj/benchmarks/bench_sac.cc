#include <benchmark/benchmark.h>

#include "srgov/random.h"
#include "srgov/sac/agent.h"
#include "srgov/sac/mlp.h"
#include "srgov/sac/replay_buffer.h"

namespace {

using namespace srgov;
using sac::Mat;
using sac::Vec;

Mat RandomMatrix(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.Uniform(-1.0, 1.0);
  }
  return m;
}

void BM_MlpForwardBackward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  Rng rng(1);
  const sac::Mlp net = sac::Mlp::Random({13, 256, 256, 1}, rng);
  const Mat x = RandomMatrix(13, batch, rng);
  const Mat d_out = Mat::Ones(1, batch);
  for (auto _ : state) {
    sac::Mlp::Cache cache;
    benchmark::DoNotOptimize(net.Forward(x, &cache));
    benchmark::DoNotOptimize(net.Backward(cache, d_out));
  }
}
BENCHMARK(BM_MlpForwardBackward)->Arg(1)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_AgentAct(benchmark::State& state) {
  Rng rng(2);
  const sac::Agent agent = sac::Agent::Create(12, 1, sac::SacConfig{}, rng);
  const Vec s = Vec::Constant(12, 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent.Act(s, false, rng));
  }
}
BENCHMARK(BM_AgentAct)->Unit(benchmark::kMicrosecond);

void BM_AgentUpdate(benchmark::State& state) {
  const sac::SacConfig cfg;
  Rng rng(3);
  sac::Agent agent = sac::Agent::Create(12, 1, cfg, rng);
  sac::ReplayBuffer buffer(4 * cfg.batch, 12, 1);
  for (int i = 0; i < 4 * cfg.batch; ++i) {
    buffer.Add(sac::Transition{RandomMatrix(12, 1, rng), RandomMatrix(1, 1, rng),
                               rng.Uniform(-1.0, 0.0), RandomMatrix(12, 1, rng),
                               false});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(agent.Update(buffer.Sample(cfg.batch, rng), rng));
  }
}
BENCHMARK(BM_AgentUpdate)->Unit(benchmark::kMillisecond);

}  // namespace
