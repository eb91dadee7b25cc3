#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/rational.hpp"

namespace jobshop {

// Order-only view of a (possibly partial) schedule: per machine, the
// processing order of the operations assigned to it. Timing is implied.
struct RelativeSchedule {
  std::vector<std::vector<std::int32_t>> machine_sequences;

  explicit RelativeSchedule(std::int32_t machine_count = 0)
      : machine_sequences(static_cast<size_t>(machine_count)) {}

  std::int32_t scheduled_count() const;
  bool operator==(const RelativeSchedule&) const = default;
};

// Timed view: completion time per scheduled operation, kUnscheduled for the
// rest. start(op) = completion(op) - duration(op).
struct AbsoluteSchedule {
  static constexpr std::int64_t kUnscheduled = -1;

  std::vector<std::int64_t> completion;

  AbsoluteSchedule() = default;
  explicit AbsoluteSchedule(std::int32_t op_count)
      : completion(static_cast<size_t>(op_count), kUnscheduled) {}
  explicit AbsoluteSchedule(std::vector<std::int64_t> completion_times)
      : completion(std::move(completion_times)) {}

  bool is_scheduled(std::int32_t flat) const {
    return completion[static_cast<size_t>(flat)] != kUnscheduled;
  }
  std::int32_t scheduled_count() const;
  bool complete(const Instance& inst) const {
    return scheduled_count() == inst.op_count();
  }

  bool operator==(const AbsoluteSchedule&) const = default;
};

// Semi-active timing of a relative schedule: every operation starts at the
// max of its machine predecessor's and job predecessor's completion times.
// Runs one forward pass over the merged precedence digraph (job chains +
// machine chains), O(ops + arcs).
//
// Requires every scheduled operation's job predecessor to be scheduled too;
// throws ValidationError otherwise. Throws CycleError when the machine
// order contradicts job precedence.
AbsoluteSchedule compute_times(const RelativeSchedule& rel,
                               const Instance& inst);

// Per-machine sequences ordered by completion time. Two operations on one
// machine can never tie (no overlap), so the order is unique.
RelativeSchedule to_relative(const AbsoluteSchedule& abs, const Instance& inst);

// Sum over jobs of weight * completion time of the job's last operation.
// Throws ValidationError if the schedule is incomplete.
Rational objective_weighted_completion(const AbsoluteSchedule& abs,
                                       const Instance& inst);

// Same objective over a raw completion table (rollout hot path).
Rational objective_weighted_completion(std::span<const std::int64_t> completion,
                                       const Instance& inst);

// [r_min, r_max] of the weighted objective used for reward normalization:
// r_min assumes all jobs run in parallel, each finishing at its own work
// content; r_max runs jobs back to back in instance order.
struct RewardBounds {
  Rational r_min;
  Rational r_max;
};

RewardBounds reward_bounds(const Instance& inst);

// Affine map sending r_max -> 0 and r_min -> 1, clamped to [0, 1]:
//   (r_max - objective) / (r_max - r_min).
// Degenerate bounds (r_min == r_max) give 1. Exact rational arithmetic.
Rational normalized_reward(const Rational& objective,
                           const RewardBounds& bounds);

// Empty result iff the schedule respects start >= 0, job precedence and
// machine exclusivity for the operations it covers.
std::vector<std::string> validate_schedule(const AbsoluteSchedule& abs,
                                           const Instance& inst);

// {"<op_id>": completion, ...}, ids in ascending order.
std::string schedule_to_json(const AbsoluteSchedule& abs, const Instance& inst);

// "op_id,job,machine,start,end" rows, ascending op id. Suited for external
// Gantt tooling.
std::string schedule_to_csv(const AbsoluteSchedule& abs, const Instance& inst);

}  // namespace jobshop
