/*
 Copyright 2026 The lqgsi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include <benchmark/benchmark.h>

#include "lqgsi/lqr.hpp"
#include "lqgsi/reference_systems.hpp"
#include "lqgsi/scalar.hpp"
#include "lqgsi/sdp.hpp"
#include "lqgsi/sim.hpp"
#include "lqgsi/synthesis.hpp"

namespace {

using namespace lqgsi;

Mat one(double v) { return Mat::Constant(1, 1, v); }

SystemModel scalar_model() {
  return SystemModel::stationary(one(2), one(1), one(1), one(1), one(1), one(1));
}

CostModel scalar_cost(double gamma) {
  CostModel c;
  c.Q = {one(1)};
  c.R = {one(1)};
  c.gamma = gamma;
  return c;
}

// Budget halfway between the minimum achievable cost and the no-communication
// cost, so every horizon lands in the interesting regime.
double midpoint_budget(const SystemModel& model, CostModel cost) {
  cost.gamma = 1e12;
  const CostBounds b = solve(model, cost).bounds;
  return 0.5 * (b.gamma_min + b.gamma_nocomm);
}

void BM_ScalarClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scalar::rate_scalar(2, 1, 1, 1, 1, 10));
}
BENCHMARK(BM_ScalarClosedForm);

void BM_ScalarSolve(benchmark::State& state) {
  const SystemModel m = scalar_model();
  const CostModel c = scalar_cost(10);
  for (auto _ : state) benchmark::DoNotOptimize(solve(m, c).objective_nats);
}
BENCHMARK(BM_ScalarSolve)->Unit(benchmark::kMillisecond);

// Argument is 10 * rho; 0 removes the side observation entirely.
void BM_PlantSolve(benchmark::State& state) {
  const SystemModel m = reference::snr_model(static_cast<double>(state.range(0)) / 10.0);
  const CostModel c = reference::unit_cost(40);
  for (auto _ : state) benchmark::DoNotOptimize(solve(m, c).objective_nats);
}
BENCHMARK(BM_PlantSolve)->Arg(0)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ScalarFiniteSolve(benchmark::State& state) {
  SystemModel m = scalar_model();
  m.horizon = Horizon::finite(static_cast<int>(state.range(0)));
  CostModel c = scalar_cost(0);
  c.gamma = midpoint_budget(m, c);
  for (auto _ : state) benchmark::DoNotOptimize(solve(m, c).objective_nats);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScalarFiniteSolve)->RangeMultiplier(2)->Range(4, 64)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_PlantFiniteSolve(benchmark::State& state) {
  SystemModel m = reference::snr_model(1.0);
  m.horizon = Horizon::finite(static_cast<int>(state.range(0)));
  CostModel c = reference::unit_cost(0);
  c.gamma = midpoint_budget(m, c);
  for (auto _ : state) benchmark::DoNotOptimize(solve(m, c).objective_nats);
}
BENCHMARK(BM_PlantFiniteSolve)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PlantDare(benchmark::State& state) {
  const Mat I = Mat::Identity(4, 4);
  const Mat A = reference::plant_A();
  const Mat B = reference::plant_B();
  for (auto _ : state) benchmark::DoNotOptimize(solve_dare(A, B, I, I).S(0, 0));
}
BENCHMARK(BM_PlantDare);

void BM_Simulate(benchmark::State& state) {
  const SystemModel m = reference::snr_model(1.0);
  const CostModel c = reference::unit_cost(40);
  const Policy policy = assemble(m, c, solve(m, c));
  SimConfig cfg;
  cfg.steps = state.range(0);
  cfg.burn_in = 100;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(m, policy, cfg).avg_cost);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
