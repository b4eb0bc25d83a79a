#include <benchmark/benchmark.h>

#include "srgov/control.h"
#include "srgov/harness/config.h"
#include "srgov/numkit.h"
#include "srgov/plant.h"

namespace {

using namespace srgov;

struct Design {
  plant::QuadParams params;
  plant::LinearModel model = plant::HoverLinearization(params);
  control::DesignWeights weights =
      control::QuadrotorWeights(control::QuadWeightConfig{});
};

const Design& GetDesign() {
  static const Design design;
  return design;
}

void BM_SolveLyapunov(benchmark::State& state) {
  const Design& d = GetDesign();
  const control::GainSet gains = control::DesignGains(d.model, d.weights);
  const numkit::Mat a_cl = d.model.a - d.model.b * gains.k();
  const auto q = numkit::SymPosDef::Identity(plant::kStateDim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(numkit::SolveLyapunov(a_cl, q));
  }
}
BENCHMARK(BM_SolveLyapunov);

void BM_SolveRiccatiOde(benchmark::State& state) {
  const Design& d = GetDesign();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        numkit::SolveRiccatiOde(d.model.a, d.model.b, d.weights.q_k, d.weights.r_k));
  }
}
BENCHMARK(BM_SolveRiccatiOde)->Unit(benchmark::kMillisecond);

void BM_DesignGains(benchmark::State& state) {
  const Design& d = GetDesign();
  for (auto _ : state) {
    benchmark::DoNotOptimize(control::DesignGains(d.model, d.weights));
  }
}
BENCHMARK(BM_DesignGains)->Unit(benchmark::kMillisecond);

void BM_Rk4NonlinearPlant(benchmark::State& state) {
  const Design& d = GetDesign();
  auto f = [&](const plant::VehicleState& x, const plant::ControlInput& u) {
    return plant::NonlinearDerivative(d.params, x, u);
  };
  plant::VehicleState x = plant::VehicleState::Zero();
  x(6) = 0.01;
  const plant::ControlInput u = plant::ControlInput::Constant(1e-3);
  for (auto _ : state) {
    x = numkit::Rk4Step(f, x, u, 1e-6);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Rk4NonlinearPlant);

}  // namespace
