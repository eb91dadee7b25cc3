#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop {

// Job-level priority rules. A job is selectable while none of its
// operations are scheduled; selecting it schedules the whole job.
enum class JobRule { fifo, lwf, mwf, sjf, ljf };

// Operation-level priority rules over the ready set (the first unscheduled
// operation of every unfinished job).
enum class OpRule { fifo, lwr, mwr, lor, mor, spt, lpt };

// Canonical names: FIFO_J, LWF, MWF, SJF, LJF / FIFO_O, LWR, MWR, LOR,
// MOR, SPT, LPT. Parsers also accept plain "FIFO" since the level is clear
// from context.
std::string_view job_rule_name(JobRule r);
std::string_view op_rule_name(OpRule r);
JobRule parse_job_rule(std::string_view name);   // throws ValidationError
OpRule parse_op_rule(std::string_view name);     // throws ValidationError
const std::vector<JobRule>& all_job_rules();
const std::vector<OpRule>& all_op_rules();

// Per-job progress bookkeeping shared by the greedy dispatcher, the
// environments and search rollouts. Cloning is cheap (three flat arrays).
class DispatchState {
 public:
  DispatchState() = default;
  explicit DispatchState(const Instance& inst);

  const Instance& instance() const { return *inst_; }
  bool finished() const { return scheduled_ == instance().op_count(); }
  std::int32_t scheduled_ops() const { return scheduled_; }

  bool job_started(std::int32_t j) const { return next_index_[static_cast<size_t>(j)] > 0; }
  bool job_finished(std::int32_t j) const {
    return next_index_[static_cast<size_t>(j)] ==
           static_cast<std::int32_t>(instance().job(j).operations.size());
  }
  // Flat id of the job's ready operation; -1 when the job is finished.
  std::int32_t ready_op(std::int32_t j) const {
    if (job_finished(j)) return -1;
    return instance().flat_id(j, next_index_[static_cast<size_t>(j)]);
  }
  std::int64_t remaining_work(std::int32_t j) const { return remaining_work_[static_cast<size_t>(j)]; }
  std::int32_t remaining_ops(std::int32_t j) const { return remaining_ops_[static_cast<size_t>(j)]; }

  // Marks the job's ready operation as scheduled. `flat` must equal
  // ready_op(job) of its job.
  void mark_scheduled(std::int32_t flat);

  // Backtracking support: undoes mark_scheduled. `flat` must be the most
  // recently scheduled operation of its job.
  void unmark_scheduled(std::int32_t flat);

 private:
  const Instance* inst_ = nullptr;
  std::vector<std::int32_t> next_index_;
  std::vector<std::int64_t> remaining_work_;
  std::vector<std::int32_t> remaining_ops_;
  std::int32_t scheduled_ = 0;
};

// Argmin/argmax of the rule key over the ready set; ties break to the
// lowest flat id. Throws ValidationError when nothing is ready.
std::int32_t select_operation(const DispatchState& state, OpRule rule);

// Rule key over jobs with no scheduled operations; ties break to the
// lowest job id. Throws ValidationError when no job is selectable.
std::int32_t select_job(const DispatchState& state, JobRule rule);

// Repeatedly applies the rule and appends the chosen operation (or every
// operation of the chosen job, in order) to its machine sequence.
// Deterministic; result equals compute_times of the final machine order.
AbsoluteSchedule greedy_dispatch(const Instance& inst, OpRule rule);
AbsoluteSchedule greedy_dispatch(const Instance& inst, JobRule rule);

}  // namespace jobshop
