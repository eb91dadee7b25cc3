#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "jobshop/error.hpp"
#include "jobshop/rng.hpp"
#include "jobshop/schedule.hpp"
#include "support/brute_force.hpp"
#include "support/test_instances.hpp"

using namespace jobshop;
using jobshop::testing::brute_force_optimum;
using jobshop::testing::make_i2;
using jobshop::testing::random_instance;
using jobshop::testing::random_partial_relative;

namespace {

// I2 flat ids: 0 = (J0,0) M0/3, 1 = (J0,1) M1/2, 2 = (J1,0) M1/2,
// 3 = (J1,1) M0/4.
RelativeSchedule i2_optimal_rel() {
  RelativeSchedule rel(2);
  rel.machine_sequences[0] = {0, 3};
  rel.machine_sequences[1] = {2, 1};
  return rel;
}

RelativeSchedule i2_fifo_rel() {
  RelativeSchedule rel(2);
  rel.machine_sequences[0] = {0, 3};
  rel.machine_sequences[1] = {1, 2};
  return rel;
}

}  // namespace

TEST_CASE("semi-active timing of the crossing schedule") {
  const Instance i2 = make_i2();
  const AbsoluteSchedule abs = compute_times(i2_optimal_rel(), i2);
  CHECK(abs.completion[0] == 3);
  CHECK(abs.completion[2] == 2);
  CHECK(abs.completion[1] == 5);
  CHECK(abs.completion[3] == 7);
  CHECK(validate_schedule(abs, i2).empty());
}

TEST_CASE("single operation alone completes at its duration") {
  const Instance inst = testing::make_instance("one", 1, {{{0, 5}}});
  RelativeSchedule rel(1);
  rel.machine_sequences[0] = {0};
  CHECK(compute_times(rel, inst).completion[0] == 5);
}

TEST_CASE("contradictory machine order raises a cycle error") {
  const Instance i2 = make_i2();
  RelativeSchedule rel(2);
  rel.machine_sequences[0] = {3, 0};  // J1's second op before J0's first
  rel.machine_sequences[1] = {1, 2};  // J0's second op before J1's first
  CHECK_THROWS_AS(compute_times(rel, i2), CycleError);
}

TEST_CASE("scheduling an op before its job predecessor is invalid") {
  const Instance i2 = make_i2();
  RelativeSchedule rel(2);
  rel.machine_sequences[1] = {1};  // (J0,1) without (J0,0)
  CHECK_THROWS_AS(compute_times(rel, i2), ValidationError);
}

TEST_CASE("relative view of a timed schedule sorts by completion") {
  const Instance i2 = make_i2();
  const AbsoluteSchedule abs = compute_times(i2_optimal_rel(), i2);
  CHECK(to_relative(abs, i2) == i2_optimal_rel());

  const AbsoluteSchedule empty(i2.op_count());
  const RelativeSchedule rel = to_relative(empty, i2);
  for (const auto& seq : rel.machine_sequences) CHECK(seq.empty());
}

TEST_CASE("round trip: semi-active schedules are fixed points") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng);
    const RelativeSchedule rel = random_partial_relative(rng, inst);
    const AbsoluteSchedule abs = compute_times(rel, inst);
    CHECK(to_relative(abs, inst) == rel);
    CHECK(validate_schedule(abs, inst).empty());
  }
}

TEST_CASE("left shift: recomputing a right-shifted schedule never hurts") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng);
    const RelativeSchedule rel =
        random_partial_relative(rng, inst, /*allow_partial=*/false);
    const AbsoluteSchedule tight = compute_times(rel, inst);

    // Right-shift with random slack, replaying the same order.
    AbsoluteSchedule shifted(inst.op_count());
    std::vector<std::int64_t> machine_tail(
        static_cast<size_t>(inst.machine_count()), 0);
    std::vector<std::int64_t> job_tail(static_cast<size_t>(inst.job_count()),
                                       0);
    std::vector<std::int32_t> order(static_cast<size_t>(inst.op_count()));
    {
      // schedule in completion order of the tight schedule
      for (std::int32_t f = 0; f < inst.op_count(); ++f) order[static_cast<size_t>(f)] = f;
      std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return tight.completion[static_cast<size_t>(a)] <
               tight.completion[static_cast<size_t>(b)];
      });
    }
    for (const std::int32_t f : order) {
      const Operation& op = inst.op(f);
      const std::int64_t start =
          std::max(machine_tail[static_cast<size_t>(op.machine_id)],
                   job_tail[static_cast<size_t>(op.job_id)]) +
          static_cast<std::int64_t>(rng.below(4));  // idle time
      shifted.completion[static_cast<size_t>(f)] = start + op.duration;
      machine_tail[static_cast<size_t>(op.machine_id)] = start + op.duration;
      job_tail[static_cast<size_t>(op.job_id)] = start + op.duration;
    }
    REQUIRE(validate_schedule(shifted, inst).empty());

    const RelativeSchedule same_order = to_relative(shifted, inst);
    const AbsoluteSchedule recomputed = compute_times(same_order, inst);
    for (std::int32_t f = 0; f < inst.op_count(); ++f)
      CHECK(recomputed.completion[static_cast<size_t>(f)] <=
            shifted.completion[static_cast<size_t>(f)]);
    CHECK(objective_weighted_completion(recomputed, inst) <=
          objective_weighted_completion(shifted, inst));
  }
}

TEST_CASE("weighted completion objective on the documented schedules") {
  const Instance i2 = make_i2();
  const AbsoluteSchedule best = compute_times(i2_optimal_rel(), i2);
  CHECK(objective_weighted_completion(best, i2) == Rational(12));
  // brute force confirms 12 is the optimum over all dispatch sequences
  CHECK(brute_force_optimum(i2) == Rational(12));

  const AbsoluteSchedule fifo = compute_times(i2_fifo_rel(), i2);
  CHECK(objective_weighted_completion(fifo, i2) == Rational(16));

  const Instance weighted = make_i2({Rational(2), Rational(1)});
  const AbsoluteSchedule w = compute_times(i2_optimal_rel(), weighted);
  CHECK(objective_weighted_completion(w, weighted) == Rational(17));
}

TEST_CASE("objective requires a complete schedule") {
  const Instance i2 = make_i2();
  RelativeSchedule partial(2);
  partial.machine_sequences[0] = {0};
  const AbsoluteSchedule abs = compute_times(partial, i2);
  CHECK_THROWS_AS(objective_weighted_completion(abs, i2), ValidationError);
}

TEST_CASE("reward bounds for parallel and sequential processing") {
  const RewardBounds unit = reward_bounds(make_i2());
  CHECK(unit.r_min == Rational(11));
  CHECK(unit.r_max == Rational(16));

  const RewardBounds weighted =
      reward_bounds(make_i2({Rational(2), Rational(1)}));
  CHECK(weighted.r_min == Rational(16));
  CHECK(weighted.r_max == Rational(21));

  const Instance single = testing::make_instance(
      "one", 1, {{{0, 3}, {0, 4}}}, {Rational(3)});
  const RewardBounds degenerate = reward_bounds(single);
  CHECK(degenerate.r_min == Rational(21));
  CHECK(degenerate.r_max == Rational(21));
}

TEST_CASE("normalized reward maps bounds to the unit interval") {
  const RewardBounds bounds{Rational(11), Rational(16)};
  CHECK(normalized_reward(Rational(12), bounds) == Rational(4, 5));
  CHECK(normalized_reward(Rational(16), bounds) == Rational(0));
  CHECK(normalized_reward(Rational(11), bounds) == Rational(1));
  CHECK(normalized_reward(Rational(99), bounds) == Rational(0));  // clamp
  // degenerate single-job bounds
  CHECK(normalized_reward(Rational(21), RewardBounds{Rational(21), Rational(21)}) ==
        Rational(1));
}

TEST_CASE("normalized reward is monotone decreasing in the objective") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t r_min = rng.uniform_int(0, 50);
    const RewardBounds bounds{Rational(r_min),
                              Rational(r_min + rng.uniform_int(1, 50))};
    const Rational a(rng.uniform_int(r_min, 120));
    const Rational b = a + Rational(rng.uniform_int(0, 20));
    const Rational ra = normalized_reward(a, bounds);
    const Rational rb = normalized_reward(b, bounds);
    CHECK(ra >= rb);
    CHECK(ra >= Rational(0));
    CHECK(ra <= Rational(1));
  }
}

TEST_CASE("schedule validation catches overlap and precedence breaks") {
  const Instance i2 = make_i2();
  AbsoluteSchedule abs = compute_times(i2_optimal_rel(), i2);

  AbsoluteSchedule overlap = abs;
  overlap.completion[3] = 6;  // op 3 occupies [2,6) over op 0's [0,3)
  CHECK(validate_schedule(overlap, i2).size() == 1);

  AbsoluteSchedule late = abs;
  late.completion[1] = 4;  // needs completion(op0) + 2 = 5
  CHECK(validate_schedule(late, i2).size() == 1);

  AbsoluteSchedule negative = abs;
  negative.completion[0] = 2;  // start would be -1
  CHECK_FALSE(validate_schedule(negative, i2).empty());
}

TEST_CASE("schedule exports carry ids, times and machines") {
  const Instance i2 = make_i2();
  const AbsoluteSchedule abs = compute_times(i2_optimal_rel(), i2);
  const std::string json = schedule_to_json(abs, i2);
  CHECK(json.find("\"0\": 3") != std::string::npos);
  CHECK(json.find("\"3\": 7") != std::string::npos);
  const std::string csv = schedule_to_csv(abs, i2);
  CHECK(csv.find("op_id,job,machine,start,end") == 0);
  CHECK(csv.find("3,1,0,3,7") != std::string::npos);
}
