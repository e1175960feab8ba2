#pragma once

#include "primo/config.hpp"

namespace primo {

struct ExperimentResult {
  std::vector<RegretTrace> traces;        // algorithm-major, replication-minor
  std::vector<AlgoAggregate> aggregates;  // one per algorithm entry
  ElasticityEstimate elasticity;          // probe of g_tilde against the truth
  UpsilonEstimate upsilon;
};

// Estimate the probe constants once and copy them into every theory-mode
// schedule that asked for them. Throws std::runtime_error when an estimated
// constant is unusable (zero sensitivity floor).
void resolve_schedule_constants(ExperimentConfig& config, ElasticityEstimate& elasticity,
                                UpsilonEstimate& upsilon);

// Run every (algorithm, replication) pair on a worker pool. Output is
// identical for any worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string trace_csv(const std::vector<RegretTrace>& traces);

nlohmann::json summary_json(const ExperimentConfig& config,
                            const ExperimentResult& result);

// trace_<tag>.csv per algorithm entry plus summary.json under out_dir.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result);

// Patch one numeric config field across values and rerun per point (same
// seed, so points stay paired). No trace files; returns the report that the
// caller writes as sweep.json. Throws std::invalid_argument when a patched
// config fails validation.
nlohmann::json run_sweep(const nlohmann::json& base, const std::string& pointer,
                         const std::vector<double>& values);

}  // namespace primo
