#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jobshop/instance.hpp"

namespace jobshop {

// A class of machines sharing duration characteristics. `weight` is the
// unnormalized probability that a machine belongs to the type and that an
// operation lands on a machine of the type.
struct MachineTypeSpec {
  std::string name;
  double weight = 1.0;
  double mean_duration = 1.0;
  double std_duration = 0.0;
};

// A class of jobs ("common" orders vs rarer "unique" ones). Operation
// counts are drawn from a Gaussian and clamped to [1, 20].
struct JobTemplateSpec {
  std::string kind;  // "common" | "unique"
  double weight = 1.0;
  double size_mean = 1.0;
  double size_std = 0.0;
};

struct GeneratorConfig {
  std::int32_t min_jobs = 600;
  std::int32_t max_jobs = 1000;
  std::int32_t min_machines = 50;
  std::int32_t max_machines = 70;
  std::vector<MachineTypeSpec> machine_types;
  std::vector<JobTemplateSpec> job_templates;
  double type_noise = 0.25;  // multiplicative noise on type probabilities
  std::string name_prefix = "synth";

  void validate() const;  // throws ValidationError
};

// Shipped defaults calibrated to a large industrial shape: ~800 jobs on
// ~60 machines, ~7.3 operations per job, and machine types whose duration
// scales differ enough that per-machine loads are strongly unbalanced.
GeneratorConfig default_config();

GeneratorConfig generator_config_from_json(std::string_view text);
std::string generator_config_to_json(const GeneratorConfig& cfg);

// Deterministic synthesis:
//   1. job and machine counts drawn uniformly from the configured ranges;
//   2. machine-type probabilities perturbed by (1 + U[-noise, noise]) and
//      renormalized, then each machine assigned a type by sampling;
//   3. per job: a template (by weight), a clamped Gaussian operation count,
//      and per operation a machine (type by the noisy distribution, then
//      uniform within the type) and a Gaussian duration rounded to an
//      integer >= 1.
// All weights are 1. Equal (cfg, seed) yields an equal instance.
Instance generate(const GeneratorConfig& cfg, std::uint64_t seed);

// Instances for seeds base_seed .. base_seed + count - 1. When out_dir is
// nonempty, writes one JSON file per instance plus a manifest.json listing
// files, seeds and basic stats.
std::vector<Instance> generate_suite(const GeneratorConfig& cfg,
                                     std::int32_t count,
                                     std::uint64_t base_seed,
                                     const std::filesystem::path& out_dir = {});

}  // namespace jobshop
