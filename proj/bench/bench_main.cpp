// Copyright 2026 The cloudsched Authors
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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "../tests/oracle.hpp"
#include "cloudsched/engine.hpp"
#include "cloudsched/experiment.hpp"
#include "cloudsched/schedulers.hpp"

namespace {

using namespace cloudsched;

RunConfig sweep_base(int64_t horizon) {
  RunConfig rc;
  rc.cluster = reference_cluster();
  rc.scheduler = SchedulerKind::kAlg1;
  rc.costs.model = CostModel::kAffine;
  rc.costs.c = {2.0, 6.0, 3.0};
  rc.costs.V = 5.0;
  rc.costs.U = 10.0;
  rc.horizon = horizon;
  rc.warmup = horizon / 5;
  return rc;
}

const std::vector<double> kRhos = {0.5, 0.6, 0.7, 0.8, 0.9, 0.95};

void BM_SweepSerial(benchmark::State& state) {
  const RunConfig base = sweep_base(state.range(0));
  for (auto _ : state) {
    auto rows = sweep_serial(base, SweepAxis::kRho, kRhos, 2);
    benchmark::DoNotOptimize(rows);
  }
  state.SetItemsProcessed(state.iterations() * kRhos.size() * 2 *
                          state.range(0));
}
BENCHMARK(BM_SweepSerial)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& state) {
  const RunConfig base = sweep_base(state.range(0));
  for (auto _ : state) {
    auto rows = sweep(base, SweepAxis::kRho, kRhos, 2);
    benchmark::DoNotOptimize(rows);
  }
  state.SetItemsProcessed(state.iterations() * kRhos.size() * 2 *
                          state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}
BENCHMARK(BM_SweepParallel)->Arg(5000)->Unit(benchmark::kMillisecond);

std::vector<testing_util::Instance> instances() {
  std::mt19937_64 rng(42);
  std::vector<testing_util::Instance> out;
  for (int i = 0; i < 256; ++i) out.push_back(testing_util::random_instance(rng));
  return out;
}

void BM_SolverFast(benchmark::State& state) {
  const auto insts = instances();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = insts[i++ % insts.size()];
    const ClusterModel cluster = ClusterModel::identical(1, inst.set, inst.size);
    SchedulerState s(cluster);
    s.prev[0] = inst.n_prev;
    benchmark::DoNotOptimize(alg1_decide(inst.q, s, cluster, inst.costs));
  }
}
BENCHMARK(BM_SolverFast);

void BM_SolverBruteForce(benchmark::State& state) {
  const auto insts = instances();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = insts[i++ % insts.size()];
    benchmark::DoNotOptimize(brute_force_argmax(
        inst.set, inst.size, inst.q, testing_util::alg1_score(inst)));
  }
}
BENCHMARK(BM_SolverBruteForce);

// One server of the reference cluster: M = 3, S = 10, queues up to 50.
std::vector<testing_util::Instance> reference_instances() {
  const ClusterModel cluster = reference_cluster();
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int64_t> queue(0, 50);
  std::vector<testing_util::Instance> out;
  for (int i = 0; i < 64; ++i) {
    testing_util::Instance inst;
    inst.set = cluster.feasible(0);
    inst.types = cluster.vm_types();
    inst.size = cluster.max_job_size();
    inst.q = ClassMatrix(inst.types, inst.size);
    for (auto& v : inst.q.flat()) v = queue(rng);
    inst.n_prev = testing_util::spread(inst.set[i % inst.set.size()],
                                       inst.size, rng);
    inst.z_prev = ClassMatrix(inst.types, inst.size);
    inst.costs.model = CostModel::kAffine;
    inst.costs.c = {2.0, 6.0, 3.0};
    inst.costs.V = 5.0;
    inst.costs.U = 10.0;
    out.push_back(inst);
  }
  return out;
}

void BM_ReferenceSolverFast(benchmark::State& state) {
  const auto insts = reference_instances();
  const ClusterModel cluster = ClusterModel::identical(
      1, insts[0].set, insts[0].size);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = insts[i++ % insts.size()];
    SchedulerState s(cluster);
    s.prev[0] = inst.n_prev;
    benchmark::DoNotOptimize(alg1_decide(inst.q, s, cluster, inst.costs));
  }
}
BENCHMARK(BM_ReferenceSolverFast);

void BM_ReferenceSolverBruteForce(benchmark::State& state) {
  const auto insts = reference_instances();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = insts[i++ % insts.size()];
    benchmark::DoNotOptimize(brute_force_argmax(
        inst.set, inst.size, inst.q, testing_util::alg1_score(inst)));
  }
  state.counters["configs"] =
      static_cast<double>(resolved_config_count(insts[0].set, insts[0].size));
}
BENCHMARK(BM_ReferenceSolverBruteForce);

// Simulation throughput per scheduler on the reference cluster at rho 0.8.
void BM_Slots(benchmark::State& state) {
  RunConfig rc = sweep_base(state.range(1));
  rc.scheduler = static_cast<SchedulerKind>(state.range(0));
  if (rc.scheduler != SchedulerKind::kAlg1) {
    rc.costs.model = CostModel::kBinary;
    rc.costs.c.clear();
    rc.costs.alpha = 0.1;
  }
  rc.check_invariants = false;
  for (auto _ : state) benchmark::DoNotOptimize(run(rc));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(to_string(rc.scheduler));
}
BENCHMARK(BM_Slots)
    ->ArgsProduct({{0, 1, 2, 3, 4, 5}, {5000}})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
