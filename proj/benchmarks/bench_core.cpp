#include <benchmark/benchmark.h>

#include <numbers>

#include "zbw/dynamics.hpp"
#include "zbw/frenet.hpp"
#include "zbw/spinor.hpp"

using namespace zbw;

namespace {

Multivector sample(double seed) {
  Multivector a;
  for (std::size_t k = 0; k < kBladeCount; ++k) a[k] = std::sin(seed + 0.7 * static_cast<double>(k));
  return a;
}

void BM_GeometricProduct(benchmark::State& state) {
  const Multivector a = sample(0.1), b = sample(1.3);
  for (auto _ : state) {
    Multivector c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_GeometricProduct);

void BM_ExpBivectorClosedForm(benchmark::State& state) {
  const Multivector B = gamma(1) * gamma(2) * 0.8;
  for (auto _ : state) {
    Multivector R = exp_bivector(B);
    benchmark::DoNotOptimize(R);
  }
}
BENCHMARK(BM_ExpBivectorClosedForm);

void BM_ExpBivectorGeneral(benchmark::State& state) {
  const Multivector B = gamma(0) * gamma(1) * 0.4 + gamma(2) * gamma(3) * 0.3 + gamma(1) * gamma(3) * 0.2;
  for (auto _ : state) {
    Multivector R = exp_bivector(B);
    benchmark::DoNotOptimize(R);
  }
}
BENCHMARK(BM_ExpBivectorGeneral);

void BM_Inverse(benchmark::State& state) {
  const Multivector a = sample(0.4);
  for (auto _ : state) {
    Multivector b = inverse(a);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_Inverse);

void BM_Rk4StepFree(benchmark::State& state) {
  BZState s = default_scenario(1.0).initial_state();
  const EMField f = EMField::free();
  for (auto _ : state) {
    s = step_rk4(s, f, 1e-3);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4StepFree);

void BM_Rk4StepConstantField(benchmark::State& state) {
  BZState s = default_scenario(1.0).initial_state();
  const EMField f = EMField::constant(gamma(1) * gamma(2) * 0.1, 1.0);
  for (auto _ : state) {
    s = step_rk4(s, f, 1e-3);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4StepConstantField);

// Whole free run with diagnostics, tau in [0, 10 pi] at h = 1e-3.
void BM_SimulateFreeHelix(benchmark::State& state) {
  const ScenarioConfig cfg = default_scenario(1.0);
  for (auto _ : state) {
    Trajectory t = simulate(cfg);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_SimulateFreeHelix)->Unit(benchmark::kMillisecond);

void BM_FrenetFrames(benchmark::State& state) {
  ScenarioConfig cfg = default_scenario(1.0);
  cfg.tau_end = 2 * std::numbers::pi;
  const Trajectory t = simulate(cfg);
  std::vector<Multivector> v;
  for (const auto& d : t.diagnostics) v.push_back(d.v);
  for (auto _ : state) {
    FrenetTrack track = frenet_frames_from_velocity(v, 0.0, t.h);
    Curvatures K = curvatures_from_frame(track.frames, t.h);
    benchmark::DoNotOptimize(K);
  }
}
BENCHMARK(BM_FrenetFrames)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
