#include "jobshop/instance.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "jobshop/error.hpp"

namespace jobshop {

std::int64_t Job::total_work() const {
  std::int64_t sum = 0;
  for (const Operation& op : operations) sum += op.duration;
  return sum;
}

Instance::Instance(std::string name, std::int32_t machine_count,
                   std::vector<Job> jobs)
    : name_(std::move(name)),
      machine_count_(machine_count),
      jobs_(std::move(jobs)) {
  op_offset_.reserve(jobs_.size() + 1);
  op_offset_.push_back(0);
  for (size_t j = 0; j < jobs_.size(); ++j) {
    Job& job = jobs_[j];
    job.job_id = static_cast<std::int32_t>(j);
    for (size_t k = 0; k < job.operations.size(); ++k) {
      Operation& op = job.operations[k];
      op.job_id = job.job_id;
      op.op_index = static_cast<std::int32_t>(k);
      flat_.push_back(op);
    }
    op_offset_.push_back(static_cast<std::int32_t>(flat_.size()));
    if (job.weight.denominator() != 1) integral_weights_ = false;
  }
}

namespace {

using nlohmann::ordered_json;

Rational weight_from_json(const ordered_json& value) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number_float()) {
    // nlohmann emits the shortest round-trip decimal; parsing that text
    // keeps denominators small (0.1 -> 1/10, not a 2^52 dyadic).
    return rational_from_decimal(value.dump());
  }
  if (value.is_string()) return rational_from_string(value.get<std::string>());
  throw ParseError("weight must be a number or a \"p/q\" string");
}

ordered_json weight_to_json(const Rational& w) {
  if (w.denominator() == 1) return ordered_json(w.numerator());
  return ordered_json(to_string(w));
}

void position_of(std::string_view text, size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

Instance parse_json_instance(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 0, column = 0;
    position_of(text, e.byte > 0 ? e.byte - 1 : 0, line, column);
    throw ParseError(e.what(), line, column);
  }
  try {
    if (!doc.is_object()) throw ParseError("top level must be an object");
    const std::string name = doc.value("name", std::string{});
    if (!doc.contains("machine_count"))
      throw ParseError("missing machine_count");
    const auto machine_count = doc.at("machine_count").get<std::int64_t>();
    if (!doc.contains("jobs") || !doc.at("jobs").is_array())
      throw ParseError("missing jobs array");
    std::vector<Job> jobs;
    jobs.reserve(doc.at("jobs").size());
    for (const auto& jnode : doc.at("jobs")) {
      Job job;
      if (jnode.contains("weight")) job.weight = weight_from_json(jnode.at("weight"));
      if (!jnode.contains("ops") || !jnode.at("ops").is_array())
        throw ParseError("job missing ops array");
      for (const auto& onode : jnode.at("ops")) {
        Operation op;
        op.machine_id = onode.at("machine").get<std::int32_t>();
        op.duration = onode.at("duration").get<std::int64_t>();
        job.operations.push_back(op);
      }
      jobs.push_back(std::move(job));
    }
    Instance inst(name, static_cast<std::int32_t>(machine_count),
                  std::move(jobs));
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

Instance parse_taillard_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("empty document", line_no);
  std::istringstream header(line);
  std::int64_t n = 0, m = 0;
  if (!(header >> n >> m))
    throw ParseError("expected \"<jobs> <machines>\" header", line_no);
  if (n < 0 || m <= 0) throw ParseError("nonpositive header counts", line_no);

  std::vector<Job> jobs;
  jobs.reserve(static_cast<size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    if (!next_line())
      throw ParseError("expected " + std::to_string(n) + " job lines", line_no);
    std::istringstream row(line);
    Job job;
    for (std::int64_t k = 0; k < m; ++k) {
      std::int64_t machine = 0, duration = 0;
      if (!(row >> machine >> duration))
        throw ParseError("expected " + std::to_string(m) +
                             " machine/duration pairs",
                         line_no);
      Operation op;
      op.machine_id = static_cast<std::int32_t>(machine);
      op.duration = duration;
      job.operations.push_back(op);
    }
    std::int64_t extra = 0;
    if (row >> extra) throw ParseError("trailing values on job line", line_no);
    jobs.push_back(std::move(job));
  }
  return Instance("", static_cast<std::int32_t>(m), std::move(jobs));
}

}  // namespace

Instance parse_instance(std::string_view text, InstanceFormat format) {
  Instance inst = format == InstanceFormat::json ? parse_json_instance(text)
                                                 : parse_taillard_instance(text);
  const auto violations = validate(inst);
  if (!violations.empty()) throw ValidationError(violations.front());
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  ordered_json doc;
  doc["name"] = inst.name();
  doc["machine_count"] = inst.machine_count();
  doc["jobs"] = ordered_json::array();
  for (const Job& job : inst.jobs()) {
    ordered_json jnode;
    jnode["weight"] = weight_to_json(job.weight);
    jnode["ops"] = ordered_json::array();
    for (const Operation& op : job.operations) {
      jnode["ops"].push_back({{"machine", op.machine_id},
                              {"duration", op.duration}});
    }
    doc["jobs"].push_back(std::move(jnode));
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> violations;
  if (inst.machine_count() <= 0)
    violations.push_back("machine_count must be positive");
  for (const Job& job : inst.jobs()) {
    const std::string prefix = "job " + std::to_string(job.job_id);
    if (job.operations.empty())
      violations.push_back(prefix + ": empty operation list");
    if (job.weight < Rational(0))
      violations.push_back(prefix + ": negative weight");
    for (const Operation& op : job.operations) {
      const std::string where =
          prefix + " op " + std::to_string(op.op_index);
      if (op.duration < 1)
        violations.push_back(where + ": duration must be >= 1");
      if (op.machine_id < 0 || op.machine_id >= inst.machine_count())
        violations.push_back(where + ": machine id " +
                             std::to_string(op.machine_id) +
                             " out of range [0, " +
                             std::to_string(inst.machine_count()) + ")");
    }
  }
  return violations;
}

InstanceStats instance_stats(const Instance& inst) {
  InstanceStats stats;
  stats.job_count = inst.job_count();
  stats.machine_count = inst.machine_count();
  stats.op_count = inst.op_count();
  stats.machine_load.assign(static_cast<size_t>(inst.machine_count()), 0);
  stats.ops_per_job_min = inst.job_count() == 0
                              ? 0
                              : std::numeric_limits<std::int32_t>::max();
  for (const Job& job : inst.jobs()) {
    const auto n = static_cast<std::int32_t>(job.operations.size());
    stats.ops_per_job_min = std::min(stats.ops_per_job_min, n);
    stats.ops_per_job_max = std::max(stats.ops_per_job_max, n);
    for (const Operation& op : job.operations)
      stats.machine_load[static_cast<size_t>(op.machine_id)] += op.duration;
  }
  return stats;
}

}  // namespace jobshop
