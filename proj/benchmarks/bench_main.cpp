// Copyright 2026 The linbandit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "linbandit/environment.hpp"
#include "linbandit/estimator.hpp"
#include "linbandit/linalg.hpp"
#include "linbandit/policy.hpp"
#include "linbandit/random.hpp"

namespace {

using namespace linbandit;
using linalg::Vec;

Vec RandomUnit(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = normal(rng);
  x *= 1.0 / linalg::Norm2(x);
  return x;
}

void BM_RidgeSolve(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  estimator::ArmState arm(d);
  for (std::size_t k = 0; k < 4 * d; ++k) arm.Record(RandomUnit(rng, d), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(arm.RidgeSolve(false));
}
BENCHMARK(BM_RidgeSolve)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Record(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  estimator::ArmState arm(d);
  const Vec x = RandomUnit(rng, d);
  for (auto _ : state) arm.Record(x, 0.5);
}
BENCHMARK(BM_Record)->Arg(4)->Arg(16)->Arg(64);

// One exploit decision with K = 6; every arm's estimate is re-solved.
void BM_ExploitStep(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const std::size_t num_arms = 6;
  policy::EpsGreedyConfig cfg{num_arms, d, 32 * num_arms, 0};
  cfg.cache_estimates = state.range(1) != 0;
  policy::EpsGreedyPolicy policy(cfg);
  Rng rng = MakeRng(3, Stream::kPolicy);
  std::mt19937_64 ctx(3);
  while (policy.t() <= cfg.p) {
    const Vec x = RandomUnit(ctx, d);
    policy.Feed(policy.Step(x, rng), x, x[0]);
  }
  const Vec x = RandomUnit(ctx, d);
  for (auto _ : state) {
    const policy::Action a = policy.StepWithCoin(x, false, rng);
    policy.Feed(a, x, 0.0);
  }
}
BENCHMARK(BM_ExploitStep)
    ->ArgsProduct({{8, 16, 32, 64}, {0, 1}})
    ->ArgNames({"d", "cached"});

void BM_UcbWidth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::vector<policy::Sample> history;
  for (std::size_t k = 0; k < n; ++k) history.push_back({RandomUnit(rng, 3), 0.1});
  const Vec x = RandomUnit(rng, 3);
  for (auto _ : state) benchmark::DoNotOptimize(policy::UcbWidth(1000, history, x));
}
BENCHMARK(BM_UcbWidth)->DenseRange(6, 12, 2);

void BM_SampleContext(benchmark::State& state) {
  environment::EnvironmentSpec spec;
  spec.dim = static_cast<std::size_t>(state.range(0));
  spec.num_arms = 1;
  spec.thetas = {Vec(spec.dim)};
  Rng rng = MakeRng(5, Stream::kEnvironment);
  for (auto _ : state) benchmark::DoNotOptimize(environment::SampleContext(spec, rng));
}
BENCHMARK(BM_SampleContext)->Arg(3)->Arg(32);

}  // namespace
BENCHMARK_MAIN();
