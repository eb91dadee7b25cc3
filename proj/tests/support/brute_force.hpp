#pragma once

// Independent reference oracles. These deliberately avoid compute_times,
// greedy_dispatch and oracle_exact: timing is rebuilt from scratch with the
// plain "start at max(machine tail, job tail)" recurrence so the library
// paths are checked against a second route.

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/rational.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop::testing {

namespace detail {

struct BruteForce {
  const Instance& inst;
  std::vector<int> next;
  std::vector<std::int64_t> machine_tail;
  std::vector<std::int64_t> job_tail;
  Rational best{std::numeric_limits<std::int64_t>::max()};
  std::uint64_t leaves = 0;

  explicit BruteForce(const Instance& instance)
      : inst(instance),
        next(static_cast<size_t>(instance.job_count()), 0),
        machine_tail(static_cast<size_t>(instance.machine_count()), 0),
        job_tail(static_cast<size_t>(instance.job_count()), 0) {}

  void run(int remaining) {
    if (remaining == 0) {
      Rational objective(0);
      for (const Job& job : inst.jobs())
        objective +=
            job.weight * Rational(job_tail[static_cast<size_t>(job.job_id)]);
      best = std::min(best, objective);
      ++leaves;
      return;
    }
    for (std::int32_t j = 0; j < inst.job_count(); ++j) {
      const size_t js = static_cast<size_t>(j);
      if (next[js] >= static_cast<int>(inst.job(j).operations.size())) continue;
      const Operation& op = inst.job(j).operations[static_cast<size_t>(next[js])];
      const size_t m = static_cast<size_t>(op.machine_id);
      const std::int64_t old_m = machine_tail[m];
      const std::int64_t old_j = job_tail[js];
      const std::int64_t end = std::max(old_m, old_j) + op.duration;
      machine_tail[m] = end;
      job_tail[js] = end;
      next[js] += 1;
      run(remaining - 1);
      machine_tail[m] = old_m;
      job_tail[js] = old_j;
      next[js] -= 1;
    }
  }
};

}  // namespace detail

// Minimum weighted completion over every dispatch sequence, enumerated
// exhaustively with no pruning. Exponential; keep op counts <= 9.
inline Rational brute_force_optimum(const Instance& inst,
                                    std::uint64_t* leaves = nullptr) {
  detail::BruteForce bf(inst);
  bf.run(inst.op_count());
  if (inst.op_count() == 0) bf.best = Rational(0);
  if (leaves) *leaves = bf.leaves;
  return bf.best;
}

// Minimum objective over every feasible complete relative schedule,
// enumerated as the product of per-machine permutations and timed with
// compute_times (infeasible orders are skipped). A second, structurally
// different route to the same optimum.
inline Rational min_over_relative_schedules(const Instance& inst) {
  std::vector<std::vector<std::int32_t>> ops_on(
      static_cast<size_t>(inst.machine_count()));
  for (std::int32_t f = 0; f < inst.op_count(); ++f)
    ops_on[static_cast<size_t>(inst.op(f).machine_id)].push_back(f);
  for (auto& ops : ops_on) std::sort(ops.begin(), ops.end());

  Rational best(std::numeric_limits<std::int64_t>::max());
  RelativeSchedule rel(inst.machine_count());
  bool found = false;

  const std::function<void(size_t)> walk = [&](size_t machine) {
    if (machine == ops_on.size()) {
      try {
        const AbsoluteSchedule abs = compute_times(rel, inst);
        const Rational objective = objective_weighted_completion(abs, inst);
        if (!found || objective < best) best = objective;
        found = true;
      } catch (const CycleError&) {
      }
      return;
    }
    std::vector<std::int32_t> perm = ops_on[machine];
    std::sort(perm.begin(), perm.end());
    do {
      rel.machine_sequences[machine] = perm;
      walk(machine + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  walk(0);
  return found ? best : Rational(0);
}

}  // namespace jobshop::testing
