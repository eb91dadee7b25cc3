#include "jobshop/env.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "jobshop/error.hpp"

namespace jobshop {

int EnvConfig::action_count() const {
  const int rules = job_level() ? static_cast<int>(job_rules.size())
                                : static_cast<int>(op_rules.size());
  return uses_gaps() ? rules * static_cast<int>(percents.size()) : rules;
}

void EnvConfig::validate() const {
  if (action_type < 1 || action_type > 4)
    throw ValidationError("action_type must be in 1..4");
  if (job_level()) {
    if (job_rules.empty())
      throw ValidationError("action types 2 and 4 need job-level rules");
    if (!op_rules.empty())
      throw ValidationError("action types 2 and 4 take no operation rules");
  } else {
    if (op_rules.empty())
      throw ValidationError("action types 1 and 3 need operation-level rules");
    if (!job_rules.empty())
      throw ValidationError("action types 1 and 3 take no job rules");
  }
  if (uses_gaps()) {
    if (percents.empty())
      throw ValidationError("action types 3 and 4 need a percent set");
    if (state_repr != StateRepr::relative)
      throw ValidationError(
          "gap insertion needs the relative state representation");
    for (const Rational& p : percents)
      if (p <= Rational(0) || p > Rational(1))
        throw ValidationError("percents must lie in (0, 1]");
  } else if (!percents.empty()) {
    throw ValidationError("action types 1 and 2 take no percent set");
  }
}

std::string action_to_string(const EnvAction& a, const EnvConfig& cfg) {
  std::string out =
      cfg.job_level()
          ? std::string(job_rule_name(cfg.job_rules[static_cast<size_t>(a.rule_index)]))
          : std::string(op_rule_name(cfg.op_rules[static_cast<size_t>(a.rule_index)]));
  if (a.percent_index >= 0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g",
                  to_double(cfg.percents[static_cast<size_t>(a.percent_index)]));
    out += '@';
    out += buf;
  }
  return out;
}

EnvState make_initial_state(const Instance& inst) {
  EnvState state;
  state.rel = RelativeSchedule(inst.machine_count());
  state.dispatch = DispatchState(inst);
  state.completion.assign(static_cast<size_t>(inst.op_count()),
                          AbsoluteSchedule::kUnscheduled);
  state.machine_position.assign(static_cast<size_t>(inst.op_count()), -1);
  return state;
}

bool is_terminal(const EnvState& state) { return state.dispatch.finished(); }

std::vector<EnvAction> legal_actions(const EnvState& state,
                                     const EnvConfig& cfg) {
  if (is_terminal(state))
    throw ValidationError("no legal actions in a terminal state");
  std::vector<EnvAction> actions;
  actions.reserve(static_cast<size_t>(cfg.action_count()));
  const int rules = cfg.job_level() ? static_cast<int>(cfg.job_rules.size())
                                    : static_cast<int>(cfg.op_rules.size());
  for (int r = 0; r < rules; ++r) {
    if (cfg.uses_gaps()) {
      for (int p = 0; p < static_cast<int>(cfg.percents.size()); ++p)
        actions.push_back(EnvAction{r, p});
    } else {
      actions.push_back(EnvAction{r, -1});
    }
  }
  return actions;
}

namespace {

std::int64_t job_pred_completion(const EnvState& state, const Instance& inst,
                                 std::int32_t f) {
  return inst.op(f).op_index > 0 ? state.completion[static_cast<size_t>(f) - 1]
                                 : 0;
}

void append_op(EnvState& state, const Instance& inst, std::int32_t f) {
  const Operation& op = inst.op(f);
  auto& seq = state.rel.machine_sequences[static_cast<size_t>(op.machine_id)];
  const std::int64_t start =
      std::max(state.machine_tail(op.machine_id),
               job_pred_completion(state, inst, f));
  state.completion[static_cast<size_t>(f)] = start + op.duration;
  state.machine_position[static_cast<size_t>(f)] =
      static_cast<std::int32_t>(seq.size());
  seq.push_back(f);
  state.dispatch.mark_scheduled(f);
}

// First position in the sequence whose preceding idle interval can hold a
// p-fraction of the operation, measured from the job-ready time r. The
// position one past the end is the always-succeeding append.
std::int32_t gap_position(const std::vector<std::int32_t>& seq,
                          const std::vector<std::int64_t>& completion,
                          const Instance& inst, std::int64_t ready,
                          std::int64_t duration, const Rational& p) {
  std::int64_t prev_end = 0;
  for (size_t i = 0; i < seq.size(); ++i) {
    const Operation& occupant = inst.op(seq[i]);
    const std::int64_t gap_end =
        completion[static_cast<size_t>(seq[i])] - occupant.duration;
    const std::int64_t usable = gap_end - std::max(prev_end, ready);
    // usable >= p * duration, kept in integers.
    if (usable > 0 &&
        usable * p.denominator() >= p.numerator() * duration)
      return static_cast<std::int32_t>(i);
    prev_end = completion[static_cast<size_t>(seq[i])];
  }
  return static_cast<std::int32_t>(seq.size());
}

void insert_op_with_gap(EnvState& state, const Instance& inst, std::int32_t f,
                        const Rational& p) {
  const Operation& op = inst.op(f);
  auto& seq = state.rel.machine_sequences[static_cast<size_t>(op.machine_id)];
  const std::int64_t ready = job_pred_completion(state, inst, f);
  const std::int32_t pos =
      gap_position(seq, state.completion, inst, ready, op.duration, p);

  seq.insert(seq.begin() + pos, f);
  for (size_t i = static_cast<size_t>(pos); i < seq.size(); ++i)
    state.machine_position[static_cast<size_t>(seq[i])] =
        static_cast<std::int32_t>(i);
  const std::int64_t machine_pred =
      pos > 0 ? state.completion[static_cast<size_t>(seq[static_cast<size_t>(pos) - 1])]
              : 0;
  state.completion[static_cast<size_t>(f)] =
      std::max(ready, machine_pred) + op.duration;
  state.dispatch.mark_scheduled(f);

  // Ripple the delay. Completions only grow (the new machine predecessor
  // finishes later than the old one), so a monotone worklist converges.
  std::vector<std::int32_t> work;
  if (static_cast<size_t>(pos) + 1 < seq.size())
    work.push_back(seq[static_cast<size_t>(pos) + 1]);
  while (!work.empty()) {
    const std::int32_t y = work.back();
    work.pop_back();
    const Operation& oy = inst.op(y);
    const auto& yseq =
        state.rel.machine_sequences[static_cast<size_t>(oy.machine_id)];
    const std::int32_t ypos = state.machine_position[static_cast<size_t>(y)];
    const std::int64_t machine_part =
        ypos > 0
            ? state.completion[static_cast<size_t>(yseq[static_cast<size_t>(ypos) - 1])]
            : 0;
    const std::int64_t fresh =
        std::max(job_pred_completion(state, inst, y), machine_part) +
        oy.duration;
    if (fresh == state.completion[static_cast<size_t>(y)]) continue;
    state.completion[static_cast<size_t>(y)] = fresh;
    if (static_cast<size_t>(ypos) + 1 < yseq.size())
      work.push_back(yseq[static_cast<size_t>(ypos) + 1]);
    const std::int32_t succ = y + 1;
    if (oy.op_index + 1 <
            static_cast<std::int32_t>(inst.job(oy.job_id).operations.size()) &&
        state.completion[static_cast<size_t>(succ)] !=
            AbsoluteSchedule::kUnscheduled)
      work.push_back(succ);
  }
}

}  // namespace

void step_inplace(EnvState& state, const EnvAction& action,
                  const EnvConfig& cfg, const Instance& inst) {
  if (is_terminal(state)) throw ValidationError("step in a terminal state");
  const int rules = cfg.job_level() ? static_cast<int>(cfg.job_rules.size())
                                    : static_cast<int>(cfg.op_rules.size());
  const bool percent_ok =
      cfg.uses_gaps()
          ? action.percent_index >= 0 &&
                action.percent_index < static_cast<int>(cfg.percents.size())
          : action.percent_index == -1;
  if (action.rule_index < 0 || action.rule_index >= rules || !percent_ok)
    throw ValidationError("illegal action for this environment");

  switch (cfg.action_type) {
    case 1:
      append_op(state, inst,
                select_operation(state.dispatch,
                                 cfg.op_rules[static_cast<size_t>(action.rule_index)]));
      break;
    case 2: {
      const std::int32_t j = select_job(
          state.dispatch, cfg.job_rules[static_cast<size_t>(action.rule_index)]);
      while (!state.dispatch.job_finished(j))
        append_op(state, inst, state.dispatch.ready_op(j));
      break;
    }
    case 3:
      insert_op_with_gap(
          state, inst,
          select_operation(state.dispatch,
                           cfg.op_rules[static_cast<size_t>(action.rule_index)]),
          cfg.percents[static_cast<size_t>(action.percent_index)]);
      break;
    case 4: {
      const std::int32_t j = select_job(
          state.dispatch, cfg.job_rules[static_cast<size_t>(action.rule_index)]);
      const Rational& p = cfg.percents[static_cast<size_t>(action.percent_index)];
      while (!state.dispatch.job_finished(j))
        insert_op_with_gap(state, inst, state.dispatch.ready_op(j), p);
      break;
    }
    default:
      throw ValidationError("action_type must be in 1..4");
  }
  state.t += 1;
}

EnvState step(const EnvState& state, const EnvAction& action,
              const EnvConfig& cfg, const Instance& inst) {
  EnvState next = state;
  step_inplace(next, action, cfg, inst);
  return next;
}

RelativeSchedule gap_insert(const RelativeSchedule& rel, std::int32_t op,
                            const Rational& p, const Instance& inst) {
  if (p <= Rational(0) || p > Rational(1))
    throw ValidationError("percent must lie in (0, 1]");
  const AbsoluteSchedule abs = compute_times(rel, inst);
  const Operation& o = inst.op(op);
  if (abs.is_scheduled(op))
    throw ValidationError("operation is already scheduled");
  if (o.op_index > 0 && !abs.is_scheduled(op - 1))
    throw ValidationError("job predecessor is unscheduled");
  const std::int64_t ready =
      o.op_index > 0 ? abs.completion[static_cast<size_t>(op) - 1] : 0;
  RelativeSchedule out = rel;
  auto& seq = out.machine_sequences[static_cast<size_t>(o.machine_id)];
  const std::int32_t pos =
      gap_position(seq, abs.completion, inst, ready, o.duration, p);
  seq.insert(seq.begin() + pos, op);
  return out;
}

Rational terminal_objective(const EnvState& state, const Instance& inst) {
  if (!is_terminal(state))
    throw ValidationError("objective of a nonterminal state");
  return objective_weighted_completion(
      std::span<const std::int64_t>(state.completion), inst);
}

Rational terminal_reward(const EnvState& state, const Instance& inst) {
  return normalized_reward(terminal_objective(state, inst),
                           reward_bounds(inst));
}

std::int32_t episode_length(const EnvConfig& cfg, const Instance& inst) {
  return cfg.job_level() ? inst.job_count() : inst.op_count();
}

namespace {

EnvConfig make_preset(std::string_view name, StateRepr repr, int type,
                      std::vector<OpRule> op_rules,
                      std::vector<JobRule> job_rules,
                      std::vector<Rational> percents) {
  EnvConfig cfg;
  cfg.state_repr = repr;
  cfg.action_type = type;
  cfg.op_rules = std::move(op_rules);
  cfg.job_rules = std::move(job_rules);
  cfg.percents = std::move(percents);
  cfg.preset_name = std::string(name);
  return cfg;
}

const std::vector<Rational>& high_percents() {
  static const std::vector<Rational> p = {Rational(3, 5), Rational(4, 5),
                                          Rational(1)};
  return p;
}

const std::vector<Rational>& low_percents() {
  static const std::vector<Rational> p = {Rational(3, 10), Rational(3, 5),
                                          Rational(4, 5)};
  return p;
}

}  // namespace

EnvConfig preset(std::string_view name) {
  using JR = JobRule;
  using OR = OpRule;
  const StateRepr abs = StateRepr::absolute;
  const StateRepr rel = StateRepr::relative;
  if (name == "1.1")
    return make_preset(name, abs, 1, {OR::fifo, OR::lwr, OR::mwr}, {}, {});
  if (name == "1.2")
    return make_preset(name, abs, 1, {OR::fifo, OR::lor, OR::mor}, {}, {});
  if (name == "1.3")
    return make_preset(name, abs, 1, {OR::fifo, OR::spt, OR::lpt}, {}, {});
  if (name == "1.4")
    return make_preset(name, abs, 1, {OR::lwr, OR::lor, OR::spt}, {}, {});
  if (name == "2.1")
    return make_preset(name, abs, 2, {}, {JR::fifo, JR::sjf, JR::ljf}, {});
  if (name == "2.2")
    return make_preset(name, abs, 2, {}, {JR::fifo, JR::lwf, JR::mwf}, {});
  if (name == "2.3")
    return make_preset(name, abs, 2, {}, {JR::fifo, JR::sjf, JR::lwf}, {});
  // Gap insertion with operation-level FIFO; workable only on small
  // instances since every insertion may shift a machine's whole tail.
  if (name == "3")
    return make_preset(name, rel, 3, {OR::fifo}, {}, low_percents());
  if (name == "4.1")
    return make_preset(name, rel, 4, {}, {JR::lwf}, high_percents());
  if (name == "4.2")
    return make_preset(name, rel, 4, {}, {JR::lwf}, low_percents());
  if (name == "4.3")
    return make_preset(name, rel, 4, {}, {JR::mwf}, high_percents());
  if (name == "4.4")
    return make_preset(name, rel, 4, {}, {JR::mwf}, low_percents());
  if (name == "4.5")
    return make_preset(name, rel, 4, {}, {JR::sjf}, high_percents());
  if (name == "4.6")
    return make_preset(name, rel, 4, {}, {JR::sjf}, low_percents());
  if (name == "4.7")
    return make_preset(name, rel, 4, {}, {JR::ljf}, high_percents());
  if (name == "4.8")
    return make_preset(name, rel, 4, {}, {JR::ljf}, low_percents());
  if (name == "5.1")
    return make_preset(name, rel, 4, {}, {JR::lwf, JR::mwf}, high_percents());
  if (name == "5.2")
    return make_preset(name, rel, 4, {}, {JR::lwf, JR::mwf}, low_percents());
  if (name == "5.3")
    return make_preset(name, rel, 4, {}, {JR::sjf, JR::ljf}, high_percents());
  if (name == "5.4")
    return make_preset(name, rel, 4, {}, {JR::sjf, JR::ljf}, low_percents());
  if (name == "5.5")
    return make_preset(name, rel, 4, {}, {JR::lwf, JR::sjf}, high_percents());
  if (name == "5.6")
    return make_preset(name, rel, 4, {}, {JR::lwf, JR::sjf}, low_percents());
  throw ValidationError("unknown environment preset: " + std::string(name));
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "1.1", "1.2", "1.3", "1.4", "2.1", "2.2", "2.3", "3",
      "4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7", "4.8",
      "5.1", "5.2", "5.3", "5.4", "5.5", "5.6"};
  return names;
}

EnvConfig env_config_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  try {
    if (doc.contains("preset")) return preset(doc.at("preset").get<std::string>());
    EnvConfig cfg;
    const std::string repr = doc.value("state_repr", std::string("absolute"));
    if (repr == "absolute") {
      cfg.state_repr = StateRepr::absolute;
    } else if (repr == "relative") {
      cfg.state_repr = StateRepr::relative;
    } else {
      throw ValidationError("state_repr must be absolute or relative");
    }
    cfg.action_type = doc.at("action_type").get<int>();
    for (const auto& r : doc.at("rules")) {
      const auto name = r.get<std::string>();
      if (cfg.action_type == 2 || cfg.action_type == 4)
        cfg.job_rules.push_back(parse_job_rule(name));
      else
        cfg.op_rules.push_back(parse_op_rule(name));
    }
    if (doc.contains("percents"))
      for (const auto& p : doc.at("percents"))
        cfg.percents.push_back(p.is_string()
                                   ? rational_from_string(p.get<std::string>())
                                   : rational_from_decimal(p.dump()));
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string env_config_to_json(const EnvConfig& cfg) {
  nlohmann::ordered_json doc;
  if (!cfg.preset_name.empty()) doc["preset"] = cfg.preset_name;
  doc["state_repr"] =
      cfg.state_repr == StateRepr::absolute ? "absolute" : "relative";
  doc["action_type"] = cfg.action_type;
  doc["rules"] = nlohmann::ordered_json::array();
  if (cfg.job_level())
    for (const JobRule r : cfg.job_rules) doc["rules"].push_back(job_rule_name(r));
  else
    for (const OpRule r : cfg.op_rules) doc["rules"].push_back(op_rule_name(r));
  if (cfg.uses_gaps()) {
    doc["percents"] = nlohmann::ordered_json::array();
    for (const Rational& p : cfg.percents) doc["percents"].push_back(to_string(p));
  }
  return doc.dump(2) + "\n";
}

}  // namespace jobshop
