#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jobshop/rational.hpp"

namespace jobshop {

// One processing step of a job: runs for `duration` time units on machine
// `machine_id`. Operations of a job execute strictly in op_index order.
// Two operations of the same job may share a machine (recirculation).
struct Operation {
  std::int32_t job_id = 0;
  std::int32_t op_index = 0;
  std::int32_t machine_id = 0;
  std::int64_t duration = 0;

  bool operator==(const Operation&) const = default;
};

struct Job {
  std::int32_t job_id = 0;
  Rational weight{1};
  std::vector<Operation> operations;

  // Total processing time of the job (sum of operation durations).
  std::int64_t total_work() const;

  bool operator==(const Job&) const = default;
};

// Immutable problem instance. Construction renumbers job_id/op_index by
// position and assigns each operation a flat id in (job_id, op_index)
// lexicographic order; flat ids are a bijection onto 0..op_count()-1.
class Instance {
 public:
  Instance() = default;
  Instance(std::string name, std::int32_t machine_count, std::vector<Job> jobs);

  const std::string& name() const { return name_; }
  std::int32_t machine_count() const { return machine_count_; }
  const std::vector<Job>& jobs() const { return jobs_; }
  const Job& job(std::int32_t j) const { return jobs_[static_cast<size_t>(j)]; }
  std::int32_t job_count() const { return static_cast<std::int32_t>(jobs_.size()); }
  std::int32_t op_count() const { return static_cast<std::int32_t>(flat_.size()); }

  std::int32_t flat_id(std::int32_t job, std::int32_t op_index) const {
    return op_offset_[static_cast<size_t>(job)] + op_index;
  }
  const Operation& op(std::int32_t flat) const {
    return flat_[static_cast<size_t>(flat)];
  }
  // Flat id of a job's last operation.
  std::int32_t last_op(std::int32_t job) const {
    return op_offset_[static_cast<size_t>(job) + 1] - 1;
  }

  // True when every job weight is an integer; objective sums then stay in
  // plain 64-bit arithmetic on the hot paths.
  bool integral_weights() const { return integral_weights_; }

  bool operator==(const Instance& other) const {
    return name_ == other.name_ && machine_count_ == other.machine_count_ &&
           jobs_ == other.jobs_;
  }

 private:
  std::string name_;
  std::int32_t machine_count_ = 0;
  std::vector<Job> jobs_;
  std::vector<std::int32_t> op_offset_;  // per job, first flat id; size n+1
  std::vector<Operation> flat_;
  bool integral_weights_ = true;
};

enum class InstanceFormat { json, taillard };

// Parses the canonical JSON form
//   {"name": ..., "machine_count": m, "jobs": [{"weight": w, "ops":
//    [{"machine": k, "duration": d}, ...]}, ...]}
// or the rectangular text form ("n m" header, then one line per job with
// m "machine duration" pairs; weights default to 1).
// Throws ParseError for syntax problems and ValidationError when the
// parsed instance violates an invariant.
Instance parse_instance(std::string_view text, InstanceFormat format);

// Canonical JSON document; parse_instance(serialize_instance(i), json) == i,
// and serialization is byte-stable across cycles.
std::string serialize_instance(const Instance& inst);

// Empty result iff all instance invariants hold. Violations are messages,
// one per offending field.
std::vector<std::string> validate(const Instance& inst);

struct InstanceStats {
  std::int32_t job_count = 0;
  std::int32_t machine_count = 0;
  std::int32_t op_count = 0;
  std::int32_t ops_per_job_min = 0;
  std::int32_t ops_per_job_max = 0;
  std::vector<std::int64_t> machine_load;  // sum of durations per machine
};

InstanceStats instance_stats(const Instance& inst);

}  // namespace jobshop
