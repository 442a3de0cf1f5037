//
// Copyright 2026 The SCG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Serial reference path vs the OpenMP path of the Monte-Carlo kernels. The
// last argument selects the policy: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "scg/evaluate.h"
#include "scg/sim.h"

namespace scg {
namespace {

ExecutionPolicy PolicyOf(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecutionPolicy::kSerial : ExecutionPolicy::kParallel;
}

void BM_Coverage(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(CheckCoverage(0.35, 150, 0.05, 20000, Seed{1}, PolicyOf(state)));
  }
}
BENCHMARK(BM_Coverage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Controllability(benchmark::State& state) {
  SyntheticWorldConfig c = DefaultMixedWorld();
  c.n = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CheckControllability(c, 500, PolicyOf(state)));
  }
}
BENCHMARK(BM_Controllability)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RandomSplits(benchmark::State& state) {
  const SyntheticWorldConfig c = DefaultMixedWorld();
  const SyntheticWorld world = SynthWorld(c, Seed{3});
  const std::vector<CalibrationRecord> labeled = LabelWorld(world, StoppingRule(c.entailment()));
  std::vector<BundleEntry> bundle;
  for (const CalibrationRecord& r : labeled) {
    bundle.push_back({r.problem_id, r.candidate_id, r.score, r.label, r.label});
  }
  SplitConfig cfg;
  cfg.trials = 200;
  cfg.policy = PolicyOf(state);
  const Learner learner = [](std::span<const CalibrationRecord> r) {
    return LearnScg(r, 0.3, 0.1, 0.05);
  };
  for (auto _ : state) benchmark::DoNotOptimize(RunRandomSplits(bundle, learner, cfg));
}
BENCHMARK(BM_RandomSplits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace scg

BENCHMARK_MAIN();
