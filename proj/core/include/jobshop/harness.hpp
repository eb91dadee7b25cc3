#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jobshop/dispatch.hpp"
#include "jobshop/env.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/mcts.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop {

struct OracleResult {
  Rational objective;
  AbsoluteSchedule schedule;
  std::uint64_t nodes_explored = 0;
};

// Exhaustive depth-first branch over ready operations with a weighted-
// completion lower bound for pruning. Minimizes over semi-active schedules,
// a class that always contains an optimum for this objective (it is regular:
// non-decreasing in every completion time). Throws ValidationError when
// op count exceeds the cap.
OracleResult oracle_exact(const Instance& inst, std::int32_t op_cap = 9);

// One way to run an instance: a greedy rule, a search, or the exact oracle.
struct MethodSpec {
  enum class Kind { op_rule, job_rule, mcts, oracle };
  Kind kind = Kind::op_rule;
  OpRule op_rule = OpRule::fifo;
  JobRule job_rule = JobRule::fifo;
  EnvConfig env;
  SearchConfig search;
  std::int32_t oracle_cap = 9;

  static MethodSpec baseline(OpRule r);
  static MethodSpec baseline(JobRule r);
  static MethodSpec mcts_method(EnvConfig env, SearchConfig search);
  static MethodSpec oracle(std::int32_t cap = 9);

  // Stable identifier, e.g. "pdr:SPT", "mcts:4.1:c0.7:k30:r6:i500",
  // "oracle".
  std::string id() const;
};

struct RunRecord {
  std::string key;  // content hash of (instance, method id, seed)
  std::string instance;
  std::string method;
  std::uint64_t seed = 0;
  Rational objective;
  double normalized_reward = 0.0;
  double wall_time_ms = 0.0;
};

// Executes one record per (instance, method, seed), appending to csv_path
// as results arrive. Records already present in the file (by key) are
// skipped, so interrupted batches resume. A record that fails (e.g. oracle
// cap exceeded) is reported on stderr and the batch continues. `threads`
// > 1 runs records concurrently; output order follows completion.
std::vector<RunRecord> run_batch(const std::vector<Instance>& instances,
                                 const std::vector<MethodSpec>& methods,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::filesystem::path& csv_path,
                                 int threads = 1);

std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(std::string_view text);

// Best objective per (instance, method) across seeds.
std::vector<RunRecord> aggregate_best(const std::vector<RunRecord>& records);

// y(x) = fraction of instances on which the method's objective is within a
// factor x of the best objective any method achieved on that instance.
// Curves are non-decreasing right-continuous steps reaching 1 at the
// method's worst ratio.
struct ProfileCurve {
  std::string method;
  std::vector<std::pair<double, double>> points;  // (ratio, fraction)

  double value_at(double x) const;
};

// Requires one record per (instance, method) (aggregate_best first) and
// every method to cover every instance. Throws ValidationError on empty
// input, duplicates, or missing coverage.
std::vector<ProfileCurve> performance_profiles(
    const std::vector<RunRecord>& records);

std::string profiles_to_csv(const std::vector<ProfileCurve>& curves);

struct MethodSummary {
  std::string method;
  Rational mean_objective;
  std::int64_t runs = 0;
};

// Mean objective per method, ascending. Throws ValidationError on empty
// input. `scale` only affects CSV formatting (e.g. 1e8 to shrink large
// totals), never the stored exact means.
std::vector<MethodSummary> summarize(const std::vector<RunRecord>& records);
std::string summary_to_csv(const std::vector<MethodSummary>& rows,
                           double scale = 1.0);

// Runs one search and renders the result JSON used by the `solve`
// subcommand. `include_timing` = false omits wall_time_ms so identical
// (instance, flags, seed) runs are byte-identical.
std::string solve_to_json(const Instance& inst, const EnvConfig& env_cfg,
                          const SearchConfig& search_cfg, bool include_timing);

}  // namespace jobshop
