#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "primo/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

bool read_json_file(const std::string& path, nlohmann::json& out) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file " << path << "\n";
    return false;
  }
  try {
    in >> out;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: JSON parse error in " << path << ": " << e.what() << "\n";
    return false;
  }
  return true;
}

int report_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << "\n";
  return kExitConfig;
}

struct CommonArgs {
  std::string config_path;
  std::int64_t seed = -1;
  int workers = -1;
  std::string out_dir;
  std::string algo;
  bool quiet = false;
};

// Overrides are applied to the raw JSON so derived quantities (model draws,
// auto thresholds) see the effective seed.
bool load_patched(const CommonArgs& args, bool with_out, nlohmann::json& raw) {
  if (!read_json_file(args.config_path, raw)) return false;
  if (!raw.is_object()) {
    std::cerr << "error: config: expected a JSON object\n";
    return false;
  }
  if (args.seed >= 0) raw["seed"] = args.seed;
  if (args.workers >= 0) raw["workers"] = args.workers;
  if (with_out) {
    std::string out = args.out_dir;
    if (out.empty()) {
      if (const char* env = std::getenv("PRIMO_OUT")) out = env;
    }
    if (!out.empty()) raw["out_dir"] = out;
  }
  return true;
}

int cmd_validate(const CommonArgs& args) {
  nlohmann::json raw;
  if (!load_patched(args, false, raw)) return kExitConfig;
  const primo::ConfigLoadResult loaded = primo::parse_config(raw);
  if (!loaded.errors.empty()) return report_errors(loaded.errors);
  const auto& cfg = loaded.config;
  std::cout << "ok: " << cfg.algorithms.size() << " algorithm(s), horizon "
            << cfg.horizon << ", " << cfg.replications << " replication(s), seed "
            << cfg.seed << "\n";
  return 0;
}

int cmd_elasticity(const CommonArgs& args) {
  nlohmann::json raw;
  if (!load_patched(args, false, raw)) return kExitConfig;
  primo::ConfigLoadResult loaded = primo::parse_config(raw);
  if (!loaded.errors.empty()) return report_errors(loaded.errors);
  primo::ElasticityEstimate elasticity;
  primo::UpsilonEstimate upsilon;
  primo::resolve_schedule_constants(loaded.config, elasticity, upsilon);
  nlohmann::json out;
  out["elasticity"] = elasticity.value;
  out["elasticity_per_action"] = elasticity.per_action;
  out["upsilon"] = upsilon.value;
  out["upsilon_per_action"] = upsilon.per_action;
  out["samples"] = elasticity.samples_used;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_run(const CommonArgs& args) {
  nlohmann::json raw;
  if (!load_patched(args, true, raw)) return kExitConfig;
  primo::ConfigLoadResult loaded = primo::parse_config(raw);
  if (!loaded.errors.empty()) return report_errors(loaded.errors);
  primo::ExperimentConfig& cfg = loaded.config;

  if (!args.algo.empty()) {
    std::vector<primo::AlgorithmConfig> kept;
    for (const auto& algo : cfg.algorithms)
      if (algo.tag == args.algo || primo::algorithm_kind_name(algo.kind) == args.algo)
        kept.push_back(algo);
    if (kept.empty()) {
      std::cerr << "error: no configured algorithm matches --algo " << args.algo
                << "\n";
      return kExitConfig;
    }
    cfg.algorithms = std::move(kept);
  }

  const primo::ExperimentResult result = primo::run_experiment(cfg);
  primo::write_outputs(cfg, result);
  if (!args.quiet) {
    std::cout << "elasticity " << result.elasticity.value << ", upsilon "
              << result.upsilon.value << "\n";
    for (const auto& agg : result.aggregates)
      std::cout << agg.algo << ": mean final cum regret " << agg.final_cum.mean
                << ", tail per-round " << agg.tail_per_round.mean << "\n";
    std::cout << "wrote " << cfg.algorithms.size() << " trace file(s) and "
              << "summary.json to " << cfg.out_dir << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& pointer,
              const std::vector<double>& values) {
  nlohmann::json raw;
  if (!load_patched(args, true, raw)) return kExitConfig;
  const primo::ConfigLoadResult loaded = primo::parse_config(raw);
  if (!loaded.errors.empty()) return report_errors(loaded.errors);

  const nlohmann::json report = primo::run_sweep(raw, pointer, values);
  namespace fs = std::filesystem;
  fs::create_directories(loaded.config.out_dir);
  const fs::path path = fs::path(loaded.config.out_dir) / "sweep.json";
  std::ofstream file(path, std::ios::binary);
  file << report.dump(2) << '\n';
  if (!file) throw std::runtime_error("cannot write " + path.string());
  if (!args.quiet)
    std::cout << "wrote " << path.string() << " (" << values.size() << " point(s))\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual bandit simulator with model-assisted covariate imputation"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string pointer;
  std::vector<double> values;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", args.config_path, "JSON config file")->required();
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--workers", args.workers, "worker threads (0 = all cores)");
    if (with_out)
      sub->add_option("--out", args.out_dir,
                      "output directory (falls back to PRIMO_OUT, then the config)");
    sub->add_flag("--quiet", args.quiet, "suppress progress output");
  };

  CLI::App* run_cmd =
      app.add_subcommand("run", "run the configured experiment and write traces");
  add_common(run_cmd, true);
  run_cmd->add_option("--algo", args.algo,
                      "only run algorithms matching this tag or kind");

  CLI::App* ela_cmd = app.add_subcommand(
      "elasticity", "estimate the model elasticity and sensitivity floor");
  add_common(ela_cmd, false);

  CLI::App* val_cmd =
      app.add_subcommand("validate", "check a config file and report every problem");
  add_common(val_cmd, false);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "rerun the experiment while varying one numeric config field");
  add_common(sweep_cmd, true);
  sweep_cmd
      ->add_option("--param", pointer,
                   "JSON pointer of the field, e.g. /environment/delta0")
      ->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(args);
    if (ela_cmd->parsed()) return cmd_elasticity(args);
    if (val_cmd->parsed()) return cmd_validate(args);
    if (sweep_cmd->parsed()) return cmd_sweep(args, pointer, values);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
