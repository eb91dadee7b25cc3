#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jobshop/dispatch.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/rational.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop {

enum class StateRepr { absolute, relative };

// Sequential decision process over partial schedules. Four action flavors:
//   1: append the operation chosen by an operation-level rule
//   2: append every operation of the job chosen by a job-level rule
//   3: gap-insert the operation chosen by an operation-level rule
//   4: gap-insert every operation of the chosen job
// Types 1/3 take op rules, 2/4 job rules; 3/4 additionally carry a gap
// percentage and require the relative representation.
struct EnvConfig {
  StateRepr state_repr = StateRepr::absolute;
  int action_type = 1;
  std::vector<OpRule> op_rules;
  std::vector<JobRule> job_rules;
  std::vector<Rational> percents;  // each in (0, 1]
  std::string preset_name;

  int action_count() const;
  bool uses_gaps() const { return action_type == 3 || action_type == 4; }
  bool job_level() const { return action_type == 2 || action_type == 4; }
  void validate() const;  // throws ValidationError
};

// One action of the configured space. rule_index/percent_index refer to the
// config's lists; percent_index is -1 for action types 1 and 2.
struct EnvAction {
  std::int32_t rule_index = 0;
  std::int32_t percent_index = -1;

  bool operator==(const EnvAction&) const = default;
};

std::string action_to_string(const EnvAction& a, const EnvConfig& cfg);

// Partial schedule plus cached semi-active completion times. The cache
// always equals compute_times(rel) for the current partial order.
struct EnvState {
  RelativeSchedule rel;
  DispatchState dispatch;
  std::vector<std::int64_t> completion;      // kUnscheduled when absent
  std::vector<std::int32_t> machine_position;  // index of op in its sequence
  std::int32_t t = 0;

  std::int64_t machine_tail(std::int32_t m) const {
    const auto& seq = rel.machine_sequences[static_cast<size_t>(m)];
    return seq.empty() ? 0 : completion[static_cast<size_t>(seq.back())];
  }
};

EnvState make_initial_state(const Instance& inst);

bool is_terminal(const EnvState& state);

// The configured action list; identical at every nonterminal state (rule-
// major, percent-minor for gap types). Throws ValidationError on terminal
// states.
std::vector<EnvAction> legal_actions(const EnvState& state,
                                     const EnvConfig& cfg);

// Pure transition: applies the action to a copy of `state`.
EnvState step(const EnvState& state, const EnvAction& action,
              const EnvConfig& cfg, const Instance& inst);

// In-place variant used on states the caller owns (rollouts clone once and
// step many times).
void step_inplace(EnvState& state, const EnvAction& action,
                  const EnvConfig& cfg, const Instance& inst);

// Places `op` on its machine using the first-fitting-gap rule: scanning the
// machine's idle intervals in start order, an interval [g_s, g_e) is usable
// for g_e - max(g_s, r) >= p * duration, where r is the completion time of
// the operation's job predecessor. The open interval after the last
// operation always qualifies, so insertion degenerates to an append when no
// gap fits. Operations after the insertion point may shift right once times
// are recomputed.
//
// Requires the job predecessor to be scheduled; throws ValidationError
// otherwise.
RelativeSchedule gap_insert(const RelativeSchedule& rel, std::int32_t op,
                            const Rational& p, const Instance& inst);

// Normalized reward of a terminal state's schedule. Throws ValidationError
// on nonterminal states.
Rational terminal_reward(const EnvState& state, const Instance& inst);

// Weighted-completion objective of a terminal state (exact).
Rational terminal_objective(const EnvState& state, const Instance& inst);

// Number of decisions to reach a terminal state: op count for types 1/3,
// job count for types 2/4.
std::int32_t episode_length(const EnvConfig& cfg, const Instance& inst);

// Named environment presets ("1.1".."1.4", "2.1".."2.3", "3",
// "4.1".."4.8", "5.1".."5.6"). Preset 3 pairs operation-level FIFO with
// percents [0.3, 0.6, 0.8]; it is constructible but expensive since every
// insertion may shift the whole tail of a machine.
EnvConfig preset(std::string_view name);  // throws ValidationError

const std::vector<std::string>& preset_names();

// Custom configs: {"state_repr": "relative", "action_type": 4,
// "rules": ["LWF"], "percents": [0.6, 0.8, 1.0]}.
EnvConfig env_config_from_json(std::string_view text);
std::string env_config_to_json(const EnvConfig& cfg);

}  // namespace jobshop
