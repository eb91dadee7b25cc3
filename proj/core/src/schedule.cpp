#include "jobshop/schedule.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "jobshop/error.hpp"

namespace jobshop {

std::int32_t RelativeSchedule::scheduled_count() const {
  size_t n = 0;
  for (const auto& seq : machine_sequences) n += seq.size();
  return static_cast<std::int32_t>(n);
}

std::int32_t AbsoluteSchedule::scheduled_count() const {
  std::int32_t n = 0;
  for (const std::int64_t c : completion)
    if (c != kUnscheduled) ++n;
  return n;
}

AbsoluteSchedule compute_times(const RelativeSchedule& rel,
                               const Instance& inst) {
  const std::int32_t n = inst.op_count();
  if (static_cast<std::int32_t>(rel.machine_sequences.size()) !=
      inst.machine_count())
    throw ValidationError("relative schedule has wrong machine count");

  // Position of every scheduled op within its machine sequence; doubles as
  // the membership test.
  std::vector<std::int32_t> pos(static_cast<size_t>(n), -1);
  std::int32_t scheduled = 0;
  for (size_t m = 0; m < rel.machine_sequences.size(); ++m) {
    const auto& seq = rel.machine_sequences[m];
    for (size_t i = 0; i < seq.size(); ++i) {
      const std::int32_t f = seq[i];
      if (f < 0 || f >= n)
        throw ValidationError("operation id out of range");
      if (pos[static_cast<size_t>(f)] != -1)
        throw ValidationError("operation appears twice");
      if (inst.op(f).machine_id != static_cast<std::int32_t>(m))
        throw ValidationError("operation sequenced on the wrong machine");
      pos[static_cast<size_t>(f)] = static_cast<std::int32_t>(i);
      ++scheduled;
    }
  }

  AbsoluteSchedule abs(n);
  std::vector<std::int8_t> indegree(static_cast<size_t>(n), 0);
  for (std::int32_t f = 0; f < n; ++f) {
    if (pos[static_cast<size_t>(f)] == -1) continue;
    const Operation& op = inst.op(f);
    if (op.op_index > 0) {
      if (pos[static_cast<size_t>(f) - 1] == -1)
        throw ValidationError("job predecessor of a scheduled op is unscheduled");
      ++indegree[static_cast<size_t>(f)];
    }
    if (pos[static_cast<size_t>(f)] > 0) ++indegree[static_cast<size_t>(f)];
  }

  std::vector<std::int32_t> stack;
  stack.reserve(static_cast<size_t>(scheduled));
  for (std::int32_t f = 0; f < n; ++f)
    if (pos[static_cast<size_t>(f)] != -1 && indegree[static_cast<size_t>(f)] == 0)
      stack.push_back(f);

  std::int32_t processed = 0;
  while (!stack.empty()) {
    const std::int32_t f = stack.back();
    stack.pop_back();
    ++processed;
    const Operation& op = inst.op(f);
    std::int64_t start = 0;
    if (op.op_index > 0)
      start = std::max(start, abs.completion[static_cast<size_t>(f) - 1]);
    const auto& seq =
        rel.machine_sequences[static_cast<size_t>(op.machine_id)];
    const std::int32_t p = pos[static_cast<size_t>(f)];
    if (p > 0)
      start = std::max(
          start, abs.completion[static_cast<size_t>(seq[static_cast<size_t>(p) - 1])]);
    abs.completion[static_cast<size_t>(f)] = start + op.duration;

    if (p + 1 < static_cast<std::int32_t>(seq.size())) {
      const std::int32_t succ = seq[static_cast<size_t>(p) + 1];
      if (--indegree[static_cast<size_t>(succ)] == 0) stack.push_back(succ);
    }
    const std::int32_t job_succ = f + 1;
    if (op.op_index + 1 <
            static_cast<std::int32_t>(inst.job(op.job_id).operations.size()) &&
        pos[static_cast<size_t>(job_succ)] != -1) {
      if (--indegree[static_cast<size_t>(job_succ)] == 0)
        stack.push_back(job_succ);
    }
  }

  if (processed < scheduled)
    throw CycleError("machine order contradicts job precedence");
  return abs;
}

RelativeSchedule to_relative(const AbsoluteSchedule& abs,
                             const Instance& inst) {
  RelativeSchedule rel(inst.machine_count());
  for (std::int32_t f = 0; f < inst.op_count(); ++f)
    if (abs.is_scheduled(f))
      rel.machine_sequences[static_cast<size_t>(inst.op(f).machine_id)]
          .push_back(f);
  for (auto& seq : rel.machine_sequences)
    std::sort(seq.begin(), seq.end(), [&](std::int32_t a, std::int32_t b) {
      return abs.completion[static_cast<size_t>(a)] <
             abs.completion[static_cast<size_t>(b)];
    });
  return rel;
}

Rational objective_weighted_completion(std::span<const std::int64_t> completion,
                                       const Instance& inst) {
  for (const std::int64_t c : completion)
    if (c == AbsoluteSchedule::kUnscheduled)
      throw ValidationError("objective requires a complete schedule");
  if (inst.integral_weights()) {
    std::int64_t sum = 0;
    for (const Job& job : inst.jobs()) {
      if (job.operations.empty()) continue;
      sum += job.weight.numerator() *
             completion[static_cast<size_t>(inst.last_op(job.job_id))];
    }
    return Rational(sum);
  }
  Rational sum(0);
  for (const Job& job : inst.jobs()) {
    if (job.operations.empty()) continue;
    sum += job.weight *
           Rational(completion[static_cast<size_t>(inst.last_op(job.job_id))]);
  }
  return sum;
}

Rational objective_weighted_completion(const AbsoluteSchedule& abs,
                                       const Instance& inst) {
  if (static_cast<std::int32_t>(abs.completion.size()) != inst.op_count())
    throw ValidationError("objective requires a complete schedule");
  return objective_weighted_completion(
      std::span<const std::int64_t>(abs.completion), inst);
}

RewardBounds reward_bounds(const Instance& inst) {
  RewardBounds bounds{Rational(0), Rational(0)};
  std::int64_t sequential_completion = 0;
  for (const Job& job : inst.jobs()) {
    const std::int64_t work = job.total_work();
    sequential_completion += work;
    bounds.r_min += job.weight * Rational(work);
    bounds.r_max += job.weight * Rational(sequential_completion);
  }
  return bounds;
}

Rational normalized_reward(const Rational& objective,
                           const RewardBounds& bounds) {
  if (bounds.r_min == bounds.r_max) return Rational(1);
  const Rational value =
      (bounds.r_max - objective) / (bounds.r_max - bounds.r_min);
  if (value < Rational(0)) return Rational(0);
  if (value > Rational(1)) return Rational(1);
  return value;
}

std::vector<std::string> validate_schedule(const AbsoluteSchedule& abs,
                                           const Instance& inst) {
  std::vector<std::string> violations;
  if (static_cast<std::int32_t>(abs.completion.size()) != inst.op_count()) {
    violations.push_back("completion table has wrong size");
    return violations;
  }
  auto op_name = [&](std::int32_t f) {
    const Operation& op = inst.op(f);
    return "op " + std::to_string(f) + " (job " + std::to_string(op.job_id) +
           ", index " + std::to_string(op.op_index) + ")";
  };
  std::vector<std::vector<std::int32_t>> per_machine(
      static_cast<size_t>(inst.machine_count()));
  for (std::int32_t f = 0; f < inst.op_count(); ++f) {
    if (!abs.is_scheduled(f)) continue;
    const Operation& op = inst.op(f);
    const std::int64_t completion = abs.completion[static_cast<size_t>(f)];
    if (completion - op.duration < 0)
      violations.push_back(op_name(f) + ": negative start time");
    if (op.op_index > 0) {
      if (!abs.is_scheduled(f - 1)) {
        violations.push_back(op_name(f) + ": job predecessor unscheduled");
      } else if (completion <
                 abs.completion[static_cast<size_t>(f) - 1] + op.duration) {
        violations.push_back(op_name(f) + ": violates job precedence");
      }
    }
    per_machine[static_cast<size_t>(op.machine_id)].push_back(f);
  }
  for (size_t m = 0; m < per_machine.size(); ++m) {
    auto& ops = per_machine[m];
    std::sort(ops.begin(), ops.end(), [&](std::int32_t a, std::int32_t b) {
      const std::int64_t sa = abs.completion[static_cast<size_t>(a)] -
                              inst.op(a).duration;
      const std::int64_t sb = abs.completion[static_cast<size_t>(b)] -
                              inst.op(b).duration;
      return sa < sb;
    });
    for (size_t i = 1; i < ops.size(); ++i) {
      const std::int64_t prev_end =
          abs.completion[static_cast<size_t>(ops[i - 1])];
      const std::int64_t start = abs.completion[static_cast<size_t>(ops[i])] -
                                 inst.op(ops[i]).duration;
      if (start < prev_end)
        violations.push_back("machine " + std::to_string(m) + ": " +
                             op_name(ops[i - 1]) + " overlaps " +
                             op_name(ops[i]));
    }
  }
  return violations;
}

std::string schedule_to_json(const AbsoluteSchedule& abs,
                             const Instance& inst) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::int32_t f = 0; f < inst.op_count(); ++f)
    if (abs.is_scheduled(f))
      doc[std::to_string(f)] = abs.completion[static_cast<size_t>(f)];
  return doc.dump(2) + "\n";
}

std::string schedule_to_csv(const AbsoluteSchedule& abs,
                            const Instance& inst) {
  std::ostringstream out;
  out << "op_id,job,machine,start,end\n";
  for (std::int32_t f = 0; f < inst.op_count(); ++f) {
    if (!abs.is_scheduled(f)) continue;
    const Operation& op = inst.op(f);
    const std::int64_t end = abs.completion[static_cast<size_t>(f)];
    out << f << ',' << op.job_id << ',' << op.machine_id << ','
        << (end - op.duration) << ',' << end << '\n';
  }
  return out.str();
}

}  // namespace jobshop
