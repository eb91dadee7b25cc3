#include "jobshop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jobshop/error.hpp"

namespace jobshop {

namespace {

struct OracleSearch {
  const Instance& inst;
  DispatchState state;
  std::vector<std::int64_t> completion;
  std::vector<std::int64_t> machine_tail;
  std::vector<std::int64_t> job_tail;
  Rational incumbent;
  std::vector<std::int64_t> best_completion;
  std::uint64_t nodes = 0;

  explicit OracleSearch(const Instance& instance)
      : inst(instance),
        state(instance),
        completion(static_cast<size_t>(instance.op_count()),
                   AbsoluteSchedule::kUnscheduled),
        machine_tail(static_cast<size_t>(instance.machine_count()), 0),
        job_tail(static_cast<size_t>(instance.job_count()), 0),
        incumbent(std::numeric_limits<std::int64_t>::max()) {}

  // job_tail + remaining work lower-bounds every job's final completion
  // (machines can only add waiting), so this prunes safely.
  Rational lower_bound() const {
    Rational bound(0);
    for (const Job& job : inst.jobs()) {
      const size_t j = static_cast<size_t>(job.job_id);
      bound += job.weight *
               Rational(job_tail[j] + state.remaining_work(job.job_id));
    }
    return bound;
  }

  void dfs() {
    ++nodes;
    if (state.finished()) {
      const Rational objective = lower_bound();  // exact when finished
      if (objective < incumbent) {
        incumbent = objective;
        best_completion = completion;
      }
      return;
    }
    for (std::int32_t j = 0; j < inst.job_count(); ++j) {
      const std::int32_t f = state.ready_op(j);
      if (f < 0) continue;
      const Operation& op = inst.op(f);
      const size_t m = static_cast<size_t>(op.machine_id);
      const std::int64_t old_machine = machine_tail[m];
      const std::int64_t old_job = job_tail[static_cast<size_t>(j)];
      const std::int64_t end = std::max(old_machine, old_job) + op.duration;

      completion[static_cast<size_t>(f)] = end;
      machine_tail[m] = end;
      job_tail[static_cast<size_t>(j)] = end;
      state.mark_scheduled(f);
      if (lower_bound() < incumbent) dfs();
      state.unmark_scheduled(f);
      completion[static_cast<size_t>(f)] = AbsoluteSchedule::kUnscheduled;
      machine_tail[m] = old_machine;
      job_tail[static_cast<size_t>(j)] = old_job;
    }
  }
};

}  // namespace

OracleResult oracle_exact(const Instance& inst, std::int32_t op_cap) {
  if (inst.op_count() > op_cap)
    throw ValidationError("instance has " + std::to_string(inst.op_count()) +
                          " operations; the exact oracle caps at " +
                          std::to_string(op_cap));
  OracleSearch dfs(inst);
  dfs.dfs();
  OracleResult result;
  result.objective = dfs.incumbent;
  result.schedule.completion = dfs.best_completion.empty() && inst.op_count() == 0
                                   ? std::vector<std::int64_t>{}
                                   : dfs.best_completion;
  result.nodes_explored = dfs.nodes;
  if (inst.op_count() == 0) result.objective = Rational(0);
  return result;
}

MethodSpec MethodSpec::baseline(OpRule r) {
  MethodSpec spec;
  spec.kind = Kind::op_rule;
  spec.op_rule = r;
  return spec;
}

MethodSpec MethodSpec::baseline(JobRule r) {
  MethodSpec spec;
  spec.kind = Kind::job_rule;
  spec.job_rule = r;
  return spec;
}

MethodSpec MethodSpec::mcts_method(EnvConfig env, SearchConfig search) {
  MethodSpec spec;
  spec.kind = Kind::mcts;
  spec.env = std::move(env);
  spec.search = search;
  return spec;
}

MethodSpec MethodSpec::oracle(std::int32_t cap) {
  MethodSpec spec;
  spec.kind = Kind::oracle;
  spec.oracle_cap = cap;
  return spec;
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string short_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buf);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return std::string(buf);
}

}  // namespace

std::string MethodSpec::id() const {
  switch (kind) {
    case Kind::op_rule:
      return "pdr:" + std::string(op_rule_name(op_rule));
    case Kind::job_rule:
      return "pdr:" + std::string(job_rule_name(job_rule));
    case Kind::oracle:
      return "oracle";
    case Kind::mcts: {
      std::string env_tag = env.preset_name.empty()
                                ? "custom-" +
                                      short_hex(fnv1a(env_config_to_json(env)))
                                          .substr(8)
                                : env.preset_name;
      std::string out = "mcts:" + env_tag + ":c" +
                        format_double(search.exploration_c) + ":k" +
                        std::to_string(search.rollouts) + ":r" +
                        std::to_string(search.advance_period);
      if (search.max_iterations)
        out += ":i" + std::to_string(*search.max_iterations);
      if (search.time_limit_seconds)
        out += ":t" + format_double(*search.time_limit_seconds);
      return out;
    }
  }
  return "?";
}

namespace {

std::string record_key(const Instance& inst, const std::string& method_id,
                       std::uint64_t seed) {
  const std::string blob = serialize_instance(inst) + '\x1f' + method_id +
                           '\x1f' + std::to_string(seed);
  return short_hex(fnv1a(blob));
}

RunRecord execute(const Instance& inst, const MethodSpec& method,
                  std::uint64_t seed) {
  RunRecord record;
  record.instance = inst.name();
  record.method = method.id();
  record.seed = seed;
  record.key = record_key(inst, record.method, seed);
  const RewardBounds bounds = reward_bounds(inst);
  const auto start = std::chrono::steady_clock::now();
  switch (method.kind) {
    case MethodSpec::Kind::op_rule: {
      const AbsoluteSchedule abs = greedy_dispatch(inst, method.op_rule);
      record.objective = objective_weighted_completion(abs, inst);
      break;
    }
    case MethodSpec::Kind::job_rule: {
      const AbsoluteSchedule abs = greedy_dispatch(inst, method.job_rule);
      record.objective = objective_weighted_completion(abs, inst);
      break;
    }
    case MethodSpec::Kind::oracle: {
      record.objective = oracle_exact(inst, method.oracle_cap).objective;
      break;
    }
    case MethodSpec::Kind::mcts: {
      SearchConfig cfg = method.search;
      cfg.seed = seed;
      record.objective = search(inst, method.env, cfg).best_objective;
      break;
    }
  }
  record.wall_time_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  record.normalized_reward =
      to_double(normalized_reward(record.objective, bounds));
  return record;
}

constexpr std::string_view kCsvComment = "# jobshop run records v1";
constexpr std::string_view kCsvHeader =
    "key,instance,method,seed,objective,normalized_reward,wall_time_ms";

std::string record_to_line(const RunRecord& r) {
  std::ostringstream out;
  char buf[64];
  out << r.key << ',' << r.instance << ',' << r.method << ',' << r.seed << ','
      << to_string(r.objective) << ',';
  std::snprintf(buf, sizeof(buf), "%.10g", r.normalized_reward);
  out << buf << ',';
  std::snprintf(buf, sizeof(buf), "%.6g", r.wall_time_ms);
  out << buf;
  return out.str();
}

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << kCsvComment << '\n' << kCsvHeader << '\n';
  for (const RunRecord& r : records) out << record_to_line(r) << '\n';
  return out.str();
}

std::vector<RunRecord> records_from_csv(std::string_view text) {
  std::vector<RunRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' ||
        line.rfind("key,", 0) == 0)
      continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw ParseError("run record line needs 7 fields: " + line);
    RunRecord r;
    r.key = fields[0];
    r.instance = fields[1];
    r.method = fields[2];
    r.seed = std::stoull(fields[3]);
    r.objective = rational_from_string(fields[4]);
    r.normalized_reward = std::stod(fields[5]);
    r.wall_time_ms = std::stod(fields[6]);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> run_batch(const std::vector<Instance>& instances,
                                 const std::vector<MethodSpec>& methods,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::filesystem::path& csv_path,
                                 int threads) {
  struct Task {
    const Instance* inst;
    const MethodSpec* method;
    std::uint64_t seed;
  };

  std::vector<std::string> existing_keys;
  if (!csv_path.empty() && std::filesystem::exists(csv_path)) {
    std::ifstream in(csv_path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    for (const RunRecord& r : records_from_csv(buffer.str()))
      existing_keys.push_back(r.key);
  }
  std::sort(existing_keys.begin(), existing_keys.end());

  std::vector<Task> tasks;
  for (const Instance& inst : instances)
    for (const MethodSpec& method : methods)
      for (const std::uint64_t seed : seeds) {
        const std::string key = record_key(inst, method.id(), seed);
        if (!std::binary_search(existing_keys.begin(), existing_keys.end(),
                                key))
          tasks.push_back(Task{&inst, &method, seed});
      }

  std::ofstream out;
  if (!csv_path.empty()) {
    const bool fresh = !std::filesystem::exists(csv_path) ||
                       std::filesystem::file_size(csv_path) == 0;
    out.open(csv_path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot open " + csv_path.string());
    if (fresh) out << kCsvComment << '\n' << kCsvHeader << '\n';
  }

  std::vector<RunRecord> results;
  std::mutex sink_mutex;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      try {
        RunRecord record = execute(*task.inst, *task.method, task.seed);
        const std::lock_guard<std::mutex> lock(sink_mutex);
        if (out.is_open()) out << record_to_line(record) << '\n' << std::flush;
        results.push_back(std::move(record));
      } catch (const Error& e) {
        const std::lock_guard<std::mutex> lock(sink_mutex);
        std::cerr << "run_batch: " << task.inst->name() << " / "
                  << task.method->id() << " / seed " << task.seed
                  << " failed: " << e.what() << '\n';
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return results;
}

std::vector<RunRecord> aggregate_best(const std::vector<RunRecord>& records) {
  std::vector<RunRecord> out;
  std::map<std::pair<std::string, std::string>, size_t> index;
  for (const RunRecord& r : records) {
    const auto key = std::make_pair(r.instance, r.method);
    const auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.size());
      out.push_back(r);
    } else if (r.objective < out[it->second].objective) {
      out[it->second] = r;
    }
  }
  return out;
}

double ProfileCurve::value_at(double x) const {
  double y = 0.0;
  for (const auto& [ratio, fraction] : points) {
    if (ratio > x) break;
    y = fraction;
  }
  return y;
}

std::vector<ProfileCurve> performance_profiles(
    const std::vector<RunRecord>& records) {
  if (records.empty())
    throw ValidationError("performance profiles need at least one record");

  std::vector<std::string> instances;
  std::vector<std::string> methods;
  std::map<std::pair<std::string, std::string>, Rational> objective;
  for (const RunRecord& r : records) {
    const auto key = std::make_pair(r.instance, r.method);
    if (objective.count(key))
      throw ValidationError("duplicate record for instance " + r.instance +
                            ", method " + r.method +
                            " (aggregate best-of-seeds first)");
    objective.emplace(key, r.objective);
    if (std::find(instances.begin(), instances.end(), r.instance) ==
        instances.end())
      instances.push_back(r.instance);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
  }
  for (const std::string& method : methods)
    for (const std::string& inst : instances)
      if (!objective.count({inst, method}))
        throw ValidationError("method " + method + " has no record for " +
                              inst);

  std::map<std::string, Rational> best;
  for (const std::string& inst : instances) {
    Rational b = objective.at({inst, methods.front()});
    for (const std::string& method : methods)
      b = std::min(b, objective.at({inst, method}));
    best.emplace(inst, b);
  }

  std::vector<ProfileCurve> curves;
  const double n = static_cast<double>(instances.size());
  for (const std::string& method : methods) {
    std::vector<double> ratios;
    ratios.reserve(instances.size());
    for (const std::string& inst : instances) {
      const Rational& obj = objective.at({inst, method});
      const Rational& b = best.at(inst);
      if (obj == b) {
        ratios.push_back(1.0);
      } else if (b == Rational(0)) {
        ratios.push_back(std::numeric_limits<double>::infinity());
      } else {
        ratios.push_back(to_double(obj / b));
      }
    }
    std::sort(ratios.begin(), ratios.end());
    ProfileCurve curve;
    curve.method = method;
    for (size_t i = 0; i < ratios.size(); ++i) {
      const double y = static_cast<double>(i + 1) / n;
      if (!curve.points.empty() && curve.points.back().first == ratios[i])
        curve.points.back().second = y;
      else
        curve.points.emplace_back(ratios[i], y);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::string profiles_to_csv(const std::vector<ProfileCurve>& curves) {
  std::ostringstream out;
  out << "# jobshop performance profiles v1\n";
  out << "method,ratio,fraction\n";
  char buf[64];
  for (const ProfileCurve& curve : curves)
    for (const auto& [ratio, fraction] : curve.points) {
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g", ratio, fraction);
      out << curve.method << ',' << buf << '\n';
    }
  return out.str();
}

std::vector<MethodSummary> summarize(const std::vector<RunRecord>& records) {
  if (records.empty())
    throw ValidationError("summary needs at least one record");
  std::vector<MethodSummary> rows;
  std::map<std::string, size_t> index;
  for (const RunRecord& r : records) {
    const auto it = index.find(r.method);
    if (it == index.end()) {
      index.emplace(r.method, rows.size());
      rows.push_back(MethodSummary{r.method, r.objective, 1});
    } else {
      rows[it->second].mean_objective += r.objective;
      rows[it->second].runs += 1;
    }
  }
  for (MethodSummary& row : rows)
    row.mean_objective /= Rational(row.runs);
  std::sort(rows.begin(), rows.end(),
            [](const MethodSummary& a, const MethodSummary& b) {
              return a.mean_objective < b.mean_objective;
            });
  return rows;
}

std::string summary_to_csv(const std::vector<MethodSummary>& rows,
                           double scale) {
  std::ostringstream out;
  out << "# jobshop method summary v1\n";
  out << "method,mean_objective,runs\n";
  char buf[64];
  for (const MethodSummary& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g",
                  to_double(row.mean_objective) / scale);
    out << row.method << ',' << buf << ',' << row.runs << '\n';
  }
  return out.str();
}

std::string solve_to_json(const Instance& inst, const EnvConfig& env_cfg,
                          const SearchConfig& search_cfg,
                          bool include_timing) {
  const SearchResult result = search(inst, env_cfg, search_cfg);
  nlohmann::ordered_json doc;
  doc["instance"] = inst.name();
  doc["env"] = env_cfg.preset_name.empty() ? "custom" : env_cfg.preset_name;
  doc["seed"] = search_cfg.seed;
  if (result.best_objective.denominator() == 1)
    doc["objective"] = result.best_objective.numerator();
  else
    doc["objective"] = to_string(result.best_objective);
  doc["normalized_reward"] = result.best_normalized_reward;
  doc["iterations"] = result.iterations;
  doc["nodes"] = result.nodes_created;
  if (include_timing) doc["wall_time_ms"] = result.wall_time_ms;
  return doc.dump(2) + "\n";
}

}  // namespace jobshop
