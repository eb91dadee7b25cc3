#include "jobshop/dispatch.hpp"

#include <algorithm>

#include "jobshop/error.hpp"

namespace jobshop {

std::string_view job_rule_name(JobRule r) {
  switch (r) {
    case JobRule::fifo: return "FIFO_J";
    case JobRule::lwf: return "LWF";
    case JobRule::mwf: return "MWF";
    case JobRule::sjf: return "SJF";
    case JobRule::ljf: return "LJF";
  }
  return "?";
}

std::string_view op_rule_name(OpRule r) {
  switch (r) {
    case OpRule::fifo: return "FIFO_O";
    case OpRule::lwr: return "LWR";
    case OpRule::mwr: return "MWR";
    case OpRule::lor: return "LOR";
    case OpRule::mor: return "MOR";
    case OpRule::spt: return "SPT";
    case OpRule::lpt: return "LPT";
  }
  return "?";
}

JobRule parse_job_rule(std::string_view name) {
  if (name == "FIFO" || name == "FIFO_J") return JobRule::fifo;
  if (name == "LWF") return JobRule::lwf;
  if (name == "MWF") return JobRule::mwf;
  if (name == "SJF") return JobRule::sjf;
  if (name == "LJF") return JobRule::ljf;
  throw ValidationError("unknown job-level rule: " + std::string(name));
}

OpRule parse_op_rule(std::string_view name) {
  if (name == "FIFO" || name == "FIFO_O") return OpRule::fifo;
  if (name == "LWR") return OpRule::lwr;
  if (name == "MWR") return OpRule::mwr;
  if (name == "LOR") return OpRule::lor;
  if (name == "MOR") return OpRule::mor;
  if (name == "SPT") return OpRule::spt;
  if (name == "LPT") return OpRule::lpt;
  throw ValidationError("unknown operation-level rule: " + std::string(name));
}

const std::vector<JobRule>& all_job_rules() {
  static const std::vector<JobRule> rules = {JobRule::fifo, JobRule::lwf,
                                             JobRule::mwf, JobRule::sjf,
                                             JobRule::ljf};
  return rules;
}

const std::vector<OpRule>& all_op_rules() {
  static const std::vector<OpRule> rules = {
      OpRule::fifo, OpRule::lwr, OpRule::mwr, OpRule::lor,
      OpRule::mor,  OpRule::spt, OpRule::lpt};
  return rules;
}

DispatchState::DispatchState(const Instance& inst) : inst_(&inst) {
  const size_t n = static_cast<size_t>(inst.job_count());
  next_index_.assign(n, 0);
  remaining_work_.reserve(n);
  remaining_ops_.reserve(n);
  for (const Job& job : inst.jobs()) {
    remaining_work_.push_back(job.total_work());
    remaining_ops_.push_back(static_cast<std::int32_t>(job.operations.size()));
  }
}

void DispatchState::mark_scheduled(std::int32_t flat) {
  const Operation& op = instance().op(flat);
  const size_t j = static_cast<size_t>(op.job_id);
  if (next_index_[j] != op.op_index)
    throw ValidationError("operation scheduled out of job order");
  next_index_[j] += 1;
  remaining_work_[j] -= op.duration;
  remaining_ops_[j] -= 1;
  scheduled_ += 1;
}

void DispatchState::unmark_scheduled(std::int32_t flat) {
  const Operation& op = instance().op(flat);
  const size_t j = static_cast<size_t>(op.job_id);
  if (next_index_[j] != op.op_index + 1)
    throw ValidationError("can only unschedule a job's latest operation");
  next_index_[j] -= 1;
  remaining_work_[j] += op.duration;
  remaining_ops_[j] += 1;
  scheduled_ -= 1;
}

namespace {

// Scanning jobs in ascending id visits ready ops in ascending flat id, so a
// strict compare gives the lowest-id tie-break for free.
template <typename Key>
std::int32_t argmin_ready(const DispatchState& state, Key key) {
  const Instance& inst = state.instance();
  std::int32_t best = -1;
  std::int64_t best_key = 0;
  for (std::int32_t j = 0; j < inst.job_count(); ++j) {
    const std::int32_t ready = state.ready_op(j);
    if (ready < 0) continue;
    const std::int64_t k = key(j, ready);
    if (best < 0 || k < best_key) {
      best = ready;
      best_key = k;
    }
  }
  return best;
}

}  // namespace

std::int32_t select_operation(const DispatchState& state, OpRule rule) {
  const Instance& inst = state.instance();
  std::int32_t choice = -1;
  switch (rule) {
    case OpRule::fifo:
      choice = argmin_ready(state, [](std::int32_t, std::int32_t ready) {
        return static_cast<std::int64_t>(ready);
      });
      break;
    case OpRule::lwr:
      choice = argmin_ready(state, [&](std::int32_t j, std::int32_t) {
        return state.remaining_work(j);
      });
      break;
    case OpRule::mwr:
      choice = argmin_ready(state, [&](std::int32_t j, std::int32_t) {
        return -state.remaining_work(j);
      });
      break;
    case OpRule::lor:
      choice = argmin_ready(state, [&](std::int32_t j, std::int32_t) {
        return static_cast<std::int64_t>(state.remaining_ops(j));
      });
      break;
    case OpRule::mor:
      choice = argmin_ready(state, [&](std::int32_t j, std::int32_t) {
        return -static_cast<std::int64_t>(state.remaining_ops(j));
      });
      break;
    case OpRule::spt:
      choice = argmin_ready(state, [&](std::int32_t, std::int32_t ready) {
        return inst.op(ready).duration;
      });
      break;
    case OpRule::lpt:
      choice = argmin_ready(state, [&](std::int32_t, std::int32_t ready) {
        return -inst.op(ready).duration;
      });
      break;
  }
  if (choice < 0) throw ValidationError("ready set is empty");
  return choice;
}

std::int32_t select_job(const DispatchState& state, JobRule rule) {
  const Instance& inst = state.instance();
  std::int32_t best = -1;
  std::int64_t best_key = 0;
  for (std::int32_t j = 0; j < inst.job_count(); ++j) {
    if (state.job_started(j) || state.job_finished(j)) continue;
    std::int64_t key = 0;
    switch (rule) {
      case JobRule::fifo: key = j; break;
      case JobRule::lwf: key = state.remaining_work(j); break;
      case JobRule::mwf: key = -state.remaining_work(j); break;
      case JobRule::sjf: key = state.remaining_ops(j); break;
      case JobRule::ljf: key = -state.remaining_ops(j); break;
    }
    if (best < 0 || key < best_key) {
      best = j;
      best_key = key;
    }
  }
  if (best < 0) throw ValidationError("no selectable job");
  return best;
}

namespace {

// Shared append loop; `pick` returns the next flat op id to append.
template <typename Pick>
AbsoluteSchedule dispatch_loop(const Instance& inst, Pick pick) {
  DispatchState state(inst);
  AbsoluteSchedule abs(inst.op_count());
  std::vector<std::int64_t> machine_tail(
      static_cast<size_t>(inst.machine_count()), 0);
  std::vector<std::int64_t> job_tail(static_cast<size_t>(inst.job_count()), 0);
  while (!state.finished()) {
    const std::int32_t f = pick(state);
    const Operation& op = inst.op(f);
    const std::int64_t start =
        std::max(machine_tail[static_cast<size_t>(op.machine_id)],
                 job_tail[static_cast<size_t>(op.job_id)]);
    const std::int64_t end = start + op.duration;
    abs.completion[static_cast<size_t>(f)] = end;
    machine_tail[static_cast<size_t>(op.machine_id)] = end;
    job_tail[static_cast<size_t>(op.job_id)] = end;
    state.mark_scheduled(f);
  }
  return abs;
}

}  // namespace

AbsoluteSchedule greedy_dispatch(const Instance& inst, OpRule rule) {
  return dispatch_loop(inst, [rule](const DispatchState& state) {
    return select_operation(state, rule);
  });
}

AbsoluteSchedule greedy_dispatch(const Instance& inst, JobRule rule) {
  std::int32_t current_job = -1;
  return dispatch_loop(inst, [rule, &current_job](const DispatchState& state) {
    if (current_job < 0 || state.job_finished(current_job))
      current_job = select_job(state, rule);
    return state.ready_op(current_job);
  });
}

}  // namespace jobshop
