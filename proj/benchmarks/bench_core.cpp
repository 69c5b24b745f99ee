// Copyright 2026 The lsmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "lsmix/metrics.hpp"
#include "lsmix/mixture.hpp"
#include "lsmix/mwde.hpp"
#include "lsmix/pmle.hpp"
#include "lsmix/sample.hpp"

namespace {

using lsmix::Family;
using lsmix::MixingDistribution;

const MixingDistribution& truth() {
  static const MixingDistribution g({0.3, 0.5, 0.2}, {-2.0, 0.0, 2.0}, {1.0, 1.0, 1.0});
  return g;
}

lsmix::SortedSample make_sample(std::size_t n) { return lsmix::SortedSample(lsmix::sample(truth(), Family::normal(), n, 11)); }

void BM_W2ValueAndGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const lsmix::SortedSample s = make_sample(n);
  const lsmix::W2Objective obj(s, state.range(1) ? Family::logistic() : Family::normal());
  const std::vector<double> x = lsmix::UnconstrainedParams::from_mixing(truth()).flatten();
  std::vector<double> grad(x.size());
  for (auto _ : state) benchmark::DoNotOptimize(obj.value_and_gradient(x, grad));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_W2ValueAndGradient)->Args({1000, 0})->Args({10000, 0})->Args({1000, 1})->Args({10000, 1});

void BM_MixtureQuantile(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    t += 0.618033988749895;
    t -= static_cast<double>(static_cast<long>(t));
    benchmark::DoNotOptimize(lsmix::mixture_quantile(truth(), Family::normal(), 0.001 + 0.998 * t));
  }
}
BENCHMARK(BM_MixtureQuantile);

void BM_EmStep(benchmark::State& state) {
  const lsmix::SortedSample s = make_sample(static_cast<std::size_t>(state.range(0)));
  const lsmix::PenaltyConfig pen = lsmix::PenaltyConfig::for_sample(s);
  for (auto _ : state) benchmark::DoNotOptimize(lsmix::em_step(truth(), s, Family::normal(), pen));
}
BENCHMARK(BM_EmStep)->Arg(1000)->Arg(10000);

void BM_FitMwde(benchmark::State& state) {
  const lsmix::SortedSample s = make_sample(static_cast<std::size_t>(state.range(0)));
  lsmix::MwdeConfig cfg;
  cfg.n_starts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lsmix::fit_mwde(s, Family::normal(), 3, cfg));
}
BENCHMARK(BM_FitMwde)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_L2Distance(benchmark::State& state) {
  const MixingDistribution h({0.5, 0.5}, {-1.0, 1.5}, {0.8, 1.2});
  const Family f = state.range(0) ? Family::gumbel() : Family::normal();
  for (auto _ : state) benchmark::DoNotOptimize(lsmix::l2_mixture_distance(truth(), h, f));
}
BENCHMARK(BM_L2Distance)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
