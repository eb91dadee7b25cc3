// Command-line front end: instance generation, MCTS solving, greedy
// baselines, the exact oracle and result reporting.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jobshop/dispatch.hpp"
#include "jobshop/env.hpp"
#include "jobshop/error.hpp"
#include "jobshop/generator.hpp"
#include "jobshop/harness.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/mcts.hpp"
#include "jobshop/schedule.hpp"

namespace {

using namespace jobshop;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// stdout unless --out was given.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

Instance load_instance(const std::string& path, const std::string& format) {
  const InstanceFormat fmt =
      format == "taillard" ? InstanceFormat::taillard : InstanceFormat::json;
  return parse_instance(read_file(path), fmt);
}

nlohmann::ordered_json objective_node(const Rational& objective) {
  if (objective.denominator() == 1)
    return nlohmann::ordered_json(objective.numerator());
  return nlohmann::ordered_json(to_string(objective));
}

std::string profiles_to_json(const std::vector<ProfileCurve>& curves) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const ProfileCurve& curve : curves) {
    nlohmann::ordered_json node;
    node["method"] = curve.method;
    node["points"] = nlohmann::ordered_json::array();
    for (const auto& [ratio, fraction] : curve.points)
      node["points"].push_back({ratio, fraction});
    doc.push_back(std::move(node));
  }
  return doc.dump(2) + "\n";
}

std::string summary_to_json(const std::vector<MethodSummary>& rows,
                            double scale) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const MethodSummary& row : rows)
    doc.push_back({{"method", row.method},
                   {"mean_objective", to_double(row.mean_objective) / scale},
                   {"runs", row.runs}});
  return doc.dump(2) + "\n";
}

EnvConfig resolve_env(const std::string& preset_name,
                      const std::string& config_path) {
  if (!config_path.empty()) return env_config_from_json(read_file(config_path));
  return preset(preset_name);
}

struct SolveOptions {
  std::string instance_path;
  std::string instance_format = "json";
  std::string env_preset = "1.4";
  std::string env_config_path;
  std::int64_t iters = -1;
  double time_limit = -1;
  std::uint64_t seed = 0;
  int rollouts = 30;
  int advance = 6;
  double exploration = 0.7;
  bool each_rollout = false;
  bool no_timing = false;
  std::string schedule_out;
  std::string out_path;
};

int run_solve(const SolveOptions& opt) {
  const Instance inst = load_instance(opt.instance_path, opt.instance_format);
  const EnvConfig env = resolve_env(opt.env_preset, opt.env_config_path);
  SearchConfig cfg;
  cfg.exploration_c = opt.exploration;
  cfg.rollouts = opt.rollouts;
  cfg.advance_period = opt.advance;
  cfg.seed = opt.seed;
  cfg.backprop_each_rollout = opt.each_rollout;
  if (opt.iters >= 0) cfg.max_iterations = opt.iters;
  if (opt.time_limit > 0) cfg.time_limit_seconds = opt.time_limit;
  if (opt.iters < 0 && opt.time_limit <= 0)
    throw Error("solve needs --iters and/or --time-limit");

  if (!opt.schedule_out.empty()) {
    const SearchResult result = search(inst, env, cfg);
    write_file(opt.schedule_out, schedule_to_csv(result.best_schedule, inst));
  }
  emit(solve_to_json(inst, env, cfg, !opt.no_timing), opt.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Job-shop scheduling toolkit: weighted-completion-time "
               "instances, MCTS environments, greedy rules and an exact "
               "oracle for tiny cases"};
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Generate synthetic instances");
  std::string gen_config, gen_out;
  int gen_count = 1;
  std::uint64_t gen_seed = 0;
  bool gen_dump_default = false;
  gen->add_option("--config", gen_config, "Generator config JSON");
  gen->add_option("--count", gen_count, "Number of instances");
  gen->add_option("--seed", gen_seed, "Base seed");
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_flag("--dump-default-config", gen_dump_default,
                "Print the built-in generator config and exit");

  // solve ------------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "Run the tree search");
  SolveOptions solve_opt;
  solve_cmd->add_option("--instance", solve_opt.instance_path, "Instance file")
      ->required();
  solve_cmd->add_option("--instance-format", solve_opt.instance_format,
                        "json or taillard")
      ->check(CLI::IsMember({"json", "taillard"}));
  solve_cmd->add_option("--env", solve_opt.env_preset,
                        "Environment preset (e.g. 4.1)");
  solve_cmd->add_option("--env-config", solve_opt.env_config_path,
                        "Custom environment JSON (overrides --env)");
  solve_cmd->add_option("--iters", solve_opt.iters, "Iteration budget");
  solve_cmd->add_option("--time-limit", solve_opt.time_limit,
                        "Time limit in seconds");
  solve_cmd->add_option("--seed", solve_opt.seed, "RNG seed");
  solve_cmd->add_option("--rollouts", solve_opt.rollouts,
                        "Random playouts per simulation");
  solve_cmd->add_option("--advance", solve_opt.advance,
                        "Iterations between root advances");
  solve_cmd->add_option("--c", solve_opt.exploration, "UCB exploration constant");
  solve_cmd->add_flag("--each-rollout", solve_opt.each_rollout,
                      "Backpropagate every rollout instead of the mean");
  solve_cmd->add_flag("--no-timing", solve_opt.no_timing,
                      "Omit wall_time_ms from the JSON (reproducible output)");
  solve_cmd->add_option("--schedule-out", solve_opt.schedule_out,
                        "Write the best schedule as CSV");
  solve_cmd->add_option("--out", solve_opt.out_path, "Result JSON path");

  // baseline ---------------------------------------------------------------
  auto* base = app.add_subcommand("baseline", "Greedy dispatching rules");
  std::vector<std::string> base_instances;
  std::vector<std::string> base_rules = {"all"};
  std::string base_format = "json", base_out;
  base->add_option("--instances", base_instances, "Instance files")
      ->required()
      ->expected(-1);
  base->add_option("--rules", base_rules,
                   "Rule names (FIFO_O LWR MWR LOR MOR SPT LPT FIFO_J LWF "
                   "MWF SJF LJF) or 'all'");
  base->add_option("--instance-format", base_format, "json or taillard")
      ->check(CLI::IsMember({"json", "taillard"}));
  std::string base_out_format = "csv";
  base->add_option("--format", base_out_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  base->add_option("--out", base_out, "CSV output path");

  // oracle -----------------------------------------------------------------
  auto* orc = app.add_subcommand("oracle", "Exact optimum for tiny instances");
  std::string orc_instance, orc_format = "json", orc_out, orc_schedule;
  int orc_cap = 9;
  orc->add_option("--instance", orc_instance, "Instance file")->required();
  orc->add_option("--instance-format", orc_format, "json or taillard")
      ->check(CLI::IsMember({"json", "taillard"}));
  orc->add_option("--cap", orc_cap, "Maximum operation count");
  orc->add_option("--schedule-out", orc_schedule, "Optimal schedule CSV path");
  orc->add_option("--out", orc_out, "Result JSON path");

  // profile ----------------------------------------------------------------
  auto* prof = app.add_subcommand("profile", "Performance profiles from runs");
  std::string prof_records, prof_out;
  std::string prof_format = "csv";
  prof->add_option("--records", prof_records, "Run records CSV")->required();
  prof->add_option("--format", prof_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  prof->add_option("--out", prof_out, "Profile CSV path");

  // summarize --------------------------------------------------------------
  auto* summ = app.add_subcommand("summarize", "Mean objective per method");
  std::string summ_records, summ_out;
  double summ_scale = 1.0;
  std::string summ_format = "csv";
  summ->add_option("--records", summ_records, "Run records CSV")->required();
  summ->add_option("--scale", summ_scale, "Divide displayed means (e.g. 1e8)");
  summ->add_option("--format", summ_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  summ->add_option("--out", summ_out, "Summary CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error
  }

  try {
    if (gen->parsed()) {
      const GeneratorConfig cfg = gen_config.empty()
                                      ? default_config()
                                      : generator_config_from_json(
                                            read_file(gen_config));
      if (gen_dump_default) {
        emit(generator_config_to_json(cfg), gen_out);
        return 0;
      }
      if (gen_out.empty()) throw Error("generate needs --out <directory>");
      generate_suite(cfg, gen_count, gen_seed, gen_out);
      std::cout << "wrote " << gen_count << " instance(s) and manifest.json to "
                << gen_out << "\n";
      return 0;
    }
    if (solve_cmd->parsed()) return run_solve(solve_opt);
    if (base->parsed()) {
      std::vector<Instance> instances;
      for (const std::string& path : base_instances)
        instances.push_back(load_instance(path, base_format));
      std::vector<MethodSpec> methods;
      auto add_rule = [&](const std::string& name) {
        try {
          methods.push_back(MethodSpec::baseline(parse_op_rule(name)));
          return;
        } catch (const ValidationError&) {
        }
        methods.push_back(MethodSpec::baseline(parse_job_rule(name)));
      };
      for (const std::string& name : base_rules) {
        if (name == "all") {
          for (const OpRule r : all_op_rules())
            methods.push_back(MethodSpec::baseline(r));
          for (const JobRule r : all_job_rules())
            methods.push_back(MethodSpec::baseline(r));
        } else {
          add_rule(name);
        }
      }
      const auto records = run_batch(instances, methods, {0}, /*csv_path=*/{});
      if (base_out_format == "json") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const RunRecord& r : records)
          doc.push_back({{"instance", r.instance},
                         {"rule", r.method.substr(4)},
                         {"objective", objective_node(r.objective)},
                         {"wall_time_ms", r.wall_time_ms}});
        emit(doc.dump(2) + "\n", base_out);
      } else {
        std::ostringstream csv;
        csv << "instance,rule,objective,wall_time_ms\n";
        for (const RunRecord& r : records)
          csv << r.instance << ',' << r.method.substr(4) << ','
              << to_string(r.objective) << ',' << r.wall_time_ms << '\n';
        emit(csv.str(), base_out);
      }
      return 0;
    }
    if (orc->parsed()) {
      const Instance inst = load_instance(orc_instance, orc_format);
      const OracleResult result = oracle_exact(inst, orc_cap);
      if (!orc_schedule.empty())
        write_file(orc_schedule, schedule_to_csv(result.schedule, inst));
      nlohmann::ordered_json doc;
      doc["instance"] = inst.name();
      doc["objective"] = result.objective.denominator() == 1
                             ? nlohmann::ordered_json(result.objective.numerator())
                             : nlohmann::ordered_json(to_string(result.objective));
      doc["nodes_explored"] = result.nodes_explored;
      emit(doc.dump(2) + "\n", orc_out);
      return 0;
    }
    if (prof->parsed()) {
      const auto records =
          aggregate_best(records_from_csv(read_file(prof_records)));
      const auto curves = performance_profiles(records);
      emit(prof_format == "json" ? profiles_to_json(curves)
                                 : profiles_to_csv(curves),
           prof_out);
      return 0;
    }
    if (summ->parsed()) {
      const auto records = records_from_csv(read_file(summ_records));
      const auto rows = summarize(records);
      emit(summ_format == "json" ? summary_to_json(rows, summ_scale)
                                 : summary_to_csv(rows, summ_scale),
           summ_out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
