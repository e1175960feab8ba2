#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "primo/runner.hpp"

namespace primo {

enum class AlgorithmKind { primo, primo_cal, uniform, drop_missing, oracle_covariate };

std::string algorithm_kind_name(AlgorithmKind kind);

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::primo;
  std::string tag;  // trace label, defaults to the kind name
  GammaSchedule gamma;
  bool estimate_elasticity = false;  // theory mode without explicit values
  bool estimate_upsilon = false;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::int64_t horizon = 16384;
  int replications = 20;
  int workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  int elasticity_samples = 100000;
  double reward_norm_bound = 10.0;
  double delta0_slack = 1.0;
  EnvironmentSpec environment;
  FeatureMap propensity_map;
  std::vector<AlgorithmConfig> algorithms;
};

struct ConfigLoadResult {
  ExperimentConfig config;  // meaningful only when errors is empty
  std::vector<std::string> errors;
};

// Parse and validate; collects every problem instead of stopping at the
// first. Randomized environment pieces (model weights, perturbation
// scaling, auto thresholds) are derived deterministically from the seed.
ConfigLoadResult parse_config(const nlohmann::json& root);

ConfigLoadResult load_config_file(const std::string& path);

// Run configuration for one algorithm entry (theory-mode estimates must
// already be filled in).
RunConfig make_run_config(const ExperimentConfig& config, const AlgorithmConfig& algo);

}  // namespace primo
