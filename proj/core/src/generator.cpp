#include "jobshop/generator.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "jobshop/error.hpp"
#include "jobshop/rng.hpp"

namespace jobshop {

void GeneratorConfig::validate() const {
  if (min_jobs < 1 || min_jobs > max_jobs)
    throw ValidationError("job count range is empty");
  if (min_machines < 1 || min_machines > max_machines)
    throw ValidationError("machine count range is empty");
  if (type_noise < 0) throw ValidationError("type_noise must be >= 0");
  if (machine_types.empty())
    throw ValidationError("need at least one machine type");
  double type_weight = 0;
  for (const MachineTypeSpec& t : machine_types) {
    if (t.weight < 0) throw ValidationError("machine type weight must be >= 0");
    if (t.mean_duration <= 0)
      throw ValidationError("machine type mean duration must be positive");
    if (t.std_duration < 0)
      throw ValidationError("machine type std duration must be >= 0");
    type_weight += t.weight;
  }
  if (type_weight <= 0)
    throw ValidationError("machine type weights must not all be zero");
  if (job_templates.empty())
    throw ValidationError("need at least one job template");
  double template_weight = 0;
  for (const JobTemplateSpec& t : job_templates) {
    if (t.weight < 0) throw ValidationError("job template weight must be >= 0");
    if (t.size_mean <= 0)
      throw ValidationError("job template size mean must be positive");
    if (t.size_std < 0)
      throw ValidationError("job template size std must be >= 0");
    template_weight += t.weight;
  }
  if (template_weight <= 0)
    throw ValidationError("job template weights must not all be zero");
}

GeneratorConfig default_config() {
  GeneratorConfig cfg;
  cfg.min_jobs = 600;
  cfg.max_jobs = 1000;
  cfg.min_machines = 50;
  cfg.max_machines = 70;
  cfg.type_noise = 0.25;
  // Duration scales a decade apart keep per-machine loads strongly
  // unbalanced even though operations land on types proportionally.
  cfg.machine_types = {
      {"light", 0.35, 12.0, 4.0},
      {"standard", 0.45, 45.0, 15.0},
      {"heavy", 0.15, 180.0, 60.0},
      {"bottleneck", 0.05, 400.0, 120.0},
  };
  // Mixture mean ~7.3 operations per job after clamping to [1, 20].
  cfg.job_templates = {
      {"common", 0.7, 6.5, 3.0},
      {"unique", 0.3, 9.5, 5.5},
  };
  return cfg;
}

namespace {

size_t sample_discrete(const std::vector<double>& weights, double total,
                       Rng& rng) {
  const double u = rng.uniform01() * total;
  double cum = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return i;
  }
  return weights.size() - 1;  // u == total under rounding
}

}  // namespace

Instance generate(const GeneratorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);

  const auto job_count =
      static_cast<std::int32_t>(rng.uniform_int(cfg.min_jobs, cfg.max_jobs));
  const auto machine_count = static_cast<std::int32_t>(
      rng.uniform_int(cfg.min_machines, cfg.max_machines));

  // Perturbed type distribution, shared by machine typing and operation
  // placement.
  std::vector<double> type_prob(cfg.machine_types.size());
  double prob_total = 0;
  for (size_t t = 0; t < cfg.machine_types.size(); ++t) {
    const double noise = 1.0 + rng.uniform(-cfg.type_noise, cfg.type_noise);
    type_prob[t] = std::max(0.0, cfg.machine_types[t].weight * noise);
    prob_total += type_prob[t];
  }
  if (prob_total <= 0) {
    type_prob.assign(cfg.machine_types.size(), 1.0);
    prob_total = static_cast<double>(cfg.machine_types.size());
  }

  std::vector<std::vector<std::int32_t>> machines_of_type(
      cfg.machine_types.size());
  for (std::int32_t m = 0; m < machine_count; ++m)
    machines_of_type[sample_discrete(type_prob, prob_total, rng)].push_back(m);

  // Operations can only land on types that received a machine.
  std::vector<double> placeable_prob = type_prob;
  double placeable_total = 0;
  for (size_t t = 0; t < placeable_prob.size(); ++t) {
    if (machines_of_type[t].empty()) placeable_prob[t] = 0;
    placeable_total += placeable_prob[t];
  }
  if (placeable_total <= 0) {
    for (size_t t = 0; t < placeable_prob.size(); ++t)
      placeable_prob[t] = machines_of_type[t].empty() ? 0.0 : 1.0;
    placeable_total = 0;
    for (const double p : placeable_prob) placeable_total += p;
  }

  std::vector<double> template_weight(cfg.job_templates.size());
  double template_total = 0;
  for (size_t t = 0; t < cfg.job_templates.size(); ++t) {
    template_weight[t] = std::max(0.0, cfg.job_templates[t].weight);
    template_total += template_weight[t];
  }

  std::vector<Job> jobs(static_cast<size_t>(job_count));
  for (Job& job : jobs) {
    const JobTemplateSpec& tmpl =
        cfg.job_templates[sample_discrete(template_weight, template_total, rng)];
    const auto size = static_cast<std::int32_t>(std::clamp<std::int64_t>(
        std::llround(rng.normal(tmpl.size_mean, tmpl.size_std)), 1, 20));
    job.operations.resize(static_cast<size_t>(size));
    for (Operation& op : job.operations) {
      const size_t t = sample_discrete(placeable_prob, placeable_total, rng);
      const auto& machines = machines_of_type[t];
      op.machine_id = machines[rng.below(machines.size())];
      const MachineTypeSpec& mt = cfg.machine_types[t];
      op.duration = std::max<std::int64_t>(
          1, std::llround(rng.normal(mt.mean_duration, mt.std_duration)));
    }
  }

  return Instance(cfg.name_prefix + "-" + std::to_string(seed), machine_count,
                  std::move(jobs));
}

namespace {

using nlohmann::ordered_json;

ordered_json config_to_node(const GeneratorConfig& cfg) {
  ordered_json doc;
  doc["min_jobs"] = cfg.min_jobs;
  doc["max_jobs"] = cfg.max_jobs;
  doc["min_machines"] = cfg.min_machines;
  doc["max_machines"] = cfg.max_machines;
  doc["type_noise"] = cfg.type_noise;
  doc["name_prefix"] = cfg.name_prefix;
  doc["machine_types"] = ordered_json::array();
  for (const MachineTypeSpec& t : cfg.machine_types)
    doc["machine_types"].push_back({{"name", t.name},
                                    {"weight", t.weight},
                                    {"mean_duration", t.mean_duration},
                                    {"std_duration", t.std_duration}});
  doc["job_templates"] = ordered_json::array();
  for (const JobTemplateSpec& t : cfg.job_templates)
    doc["job_templates"].push_back({{"kind", t.kind},
                                    {"weight", t.weight},
                                    {"size_mean", t.size_mean},
                                    {"size_std", t.size_std}});
  return doc;
}

}  // namespace

std::string generator_config_to_json(const GeneratorConfig& cfg) {
  return config_to_node(cfg).dump(2) + "\n";
}

GeneratorConfig generator_config_from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  try {
    GeneratorConfig cfg = default_config();
    cfg.machine_types.clear();
    cfg.job_templates.clear();
    cfg.min_jobs = doc.value("min_jobs", 600);
    cfg.max_jobs = doc.value("max_jobs", 1000);
    cfg.min_machines = doc.value("min_machines", 50);
    cfg.max_machines = doc.value("max_machines", 70);
    cfg.type_noise = doc.value("type_noise", 0.25);
    cfg.name_prefix = doc.value("name_prefix", std::string("synth"));
    for (const auto& t : doc.at("machine_types"))
      cfg.machine_types.push_back({t.value("name", std::string{}),
                                   t.at("weight").get<double>(),
                                   t.at("mean_duration").get<double>(),
                                   t.value("std_duration", 0.0)});
    for (const auto& t : doc.at("job_templates"))
      cfg.job_templates.push_back({t.value("kind", std::string("common")),
                                   t.at("weight").get<double>(),
                                   t.at("size_mean").get<double>(),
                                   t.value("size_std", 0.0)});
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

std::vector<Instance> generate_suite(const GeneratorConfig& cfg,
                                     std::int32_t count,
                                     std::uint64_t base_seed,
                                     const std::filesystem::path& out_dir) {
  if (count < 1) throw ValidationError("suite needs at least one instance");
  std::vector<Instance> instances;
  instances.reserve(static_cast<size_t>(count));
  for (std::int32_t i = 0; i < count; ++i)
    instances.push_back(generate(cfg, base_seed + static_cast<std::uint64_t>(i)));

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
      throw Error("cannot create directory " + out_dir.string() + ": " +
                  ec.message());
    ordered_json manifest;
    manifest["config"] = config_to_node(cfg);
    manifest["base_seed"] = base_seed;
    manifest["count"] = count;
    manifest["instances"] = ordered_json::array();
    for (std::int32_t i = 0; i < count; ++i) {
      const Instance& inst = instances[static_cast<size_t>(i)];
      const std::string filename = inst.name() + ".json";
      std::ofstream out(out_dir / filename, std::ios::binary);
      if (!out) throw Error("cannot write " + (out_dir / filename).string());
      out << serialize_instance(inst);
      const InstanceStats stats = instance_stats(inst);
      manifest["instances"].push_back(
          {{"file", filename},
           {"seed", base_seed + static_cast<std::uint64_t>(i)},
           {"name", inst.name()},
           {"jobs", stats.job_count},
           {"machines", stats.machine_count},
           {"operations", stats.op_count}});
    }
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) throw Error("cannot write manifest.json");
    out << manifest.dump(2) + "\n";
  }
  return instances;
}

}  // namespace jobshop
