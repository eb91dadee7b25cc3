#include <benchmark/benchmark.h>

#include "jobshop/dispatch.hpp"
#include "jobshop/env.hpp"
#include "jobshop/generator.hpp"
#include "jobshop/harness.hpp"
#include "jobshop/mcts.hpp"
#include "jobshop/rng.hpp"
#include "jobshop/schedule.hpp"

namespace {

using namespace jobshop;

Instance scaled_instance(int min_jobs, int max_jobs, int min_machines,
                         int max_machines, std::uint64_t seed) {
  GeneratorConfig cfg = default_config();
  cfg.min_jobs = min_jobs;
  cfg.max_jobs = max_jobs;
  cfg.min_machines = min_machines;
  cfg.max_machines = max_machines;
  return generate(cfg, seed);
}

const Instance& full_scale() {
  static const Instance inst = generate(default_config(), 1);
  return inst;
}

const Instance& mid_scale() {
  static const Instance inst = scaled_instance(80, 80, 12, 12, 3);
  return inst;
}

void BM_Generate(benchmark::State& state) {
  const GeneratorConfig cfg = default_config();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const Instance inst = generate(cfg, seed++);
    benchmark::DoNotOptimize(inst.op_count());
  }
}
BENCHMARK(BM_Generate);

void BM_ComputeTimes(benchmark::State& state) {
  const Instance& inst = full_scale();
  const AbsoluteSchedule greedy = greedy_dispatch(inst, OpRule::fifo);
  const RelativeSchedule rel = to_relative(greedy, inst);
  for (auto _ : state) {
    const AbsoluteSchedule abs = compute_times(rel, inst);
    benchmark::DoNotOptimize(abs.completion.data());
  }
  state.SetItemsProcessed(state.iterations() * inst.op_count());
}
BENCHMARK(BM_ComputeTimes);

void BM_GreedyDispatch(benchmark::State& state) {
  const Instance& inst = full_scale();
  const OpRule rule = static_cast<OpRule>(state.range(0));
  for (auto _ : state) {
    const AbsoluteSchedule abs = greedy_dispatch(inst, rule);
    benchmark::DoNotOptimize(abs.completion.data());
  }
  state.SetItemsProcessed(state.iterations() * inst.op_count());
}
BENCHMARK(BM_GreedyDispatch)
    ->Arg(static_cast<int>(OpRule::fifo))
    ->Arg(static_cast<int>(OpRule::spt))
    ->Arg(static_cast<int>(OpRule::lwr));

// One full random playout, append semantics (action type 1).
void BM_RolloutAppend(benchmark::State& state) {
  const Instance& inst = mid_scale();
  const EnvConfig cfg = preset("1.4");
  const EnvState initial = make_initial_state(inst);
  const auto actions = legal_actions(initial, cfg);
  Rng rng(5);
  for (auto _ : state) {
    EnvState s = initial;
    while (!is_terminal(s))
      step_inplace(s, actions[rng.below(actions.size())], cfg, inst);
    benchmark::DoNotOptimize(s.completion.data());
  }
  state.SetItemsProcessed(state.iterations() * inst.op_count());
}
BENCHMARK(BM_RolloutAppend);

// One full random playout with gap insertion (action type 4).
void BM_RolloutGapInsert(benchmark::State& state) {
  const Instance& inst = mid_scale();
  const EnvConfig cfg = preset("4.1");
  const EnvState initial = make_initial_state(inst);
  const auto actions = legal_actions(initial, cfg);
  Rng rng(5);
  for (auto _ : state) {
    EnvState s = initial;
    while (!is_terminal(s))
      step_inplace(s, actions[rng.below(actions.size())], cfg, inst);
    benchmark::DoNotOptimize(s.completion.data());
  }
  state.SetItemsProcessed(state.iterations() * inst.op_count());
}
BENCHMARK(BM_RolloutGapInsert);

void BM_SearchIterations(benchmark::State& state) {
  const Instance& inst = mid_scale();
  const EnvConfig env = preset("4.1");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SearchConfig cfg;
    cfg.max_iterations = state.range(0);
    cfg.rollouts = 30;
    cfg.seed = seed++;
    const SearchResult result = search(inst, env, cfg);
    benchmark::DoNotOptimize(result.best_objective);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SearchIterations)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_OracleExact(benchmark::State& state) {
  Rng rng(17);
  const Instance inst = [] {
    Rng r(17);
    return jobshop::Instance("bench-oracle", 3,
                             {[] {
                                Job j;
                                for (int k = 0; k < 3; ++k)
                                  j.operations.push_back({0, 0, k % 3, 3 + k});
                                return j;
                              }(),
                              [] {
                                Job j;
                                for (int k = 0; k < 3; ++k)
                                  j.operations.push_back({0, 0, (k + 1) % 3, 2 + k});
                                return j;
                              }(),
                              [] {
                                Job j;
                                for (int k = 0; k < 3; ++k)
                                  j.operations.push_back({0, 0, (k + 2) % 3, 4});
                                return j;
                              }()});
  }();
  for (auto _ : state) {
    const OracleResult result = oracle_exact(inst);
    benchmark::DoNotOptimize(result.nodes_explored);
  }
}
BENCHMARK(BM_OracleExact);

}  // namespace

BENCHMARK_MAIN();
