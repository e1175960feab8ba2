#pragma once

#include <string>

#include "primo/calibration.hpp"
#include "primo/environment.hpp"
#include "primo/policy.hpp"
#include "primo/schedule.hpp"

namespace primo {

enum class BaselineKind { uniform, drop_missing, oracle_covariate };

struct RunConfig {
  std::int64_t horizon = 16384;
  GammaSchedule gamma;
  double reward_norm_bound = 10.0;
  CalibrationOptions calibration;
  FeatureMap propensity_map;  // used by the calibrated variant
};

struct RoundRecord {
  std::int64_t round = 0;
  int epoch = 0;
  double gamma = 0.0;  // 0 when the round was played uniformly
  double instant_regret = 0.0;
  double cum_regret = 0.0;
  int missing = 0;
};

// Which rows fed the epoch's fits, plus fallback flags; the row interval
// is recorded so tests can audit that fits only see the previous epoch.
struct EpochInfo {
  int epoch = 0;
  std::int64_t start = 0, end = 0;    // rounds (start, end]
  double gamma = 0.0;
  std::int64_t fit_lo = 0, fit_hi = 0;  // fit rows came from rounds (fit_lo, fit_hi]
  int fit_rows_total = 0;
  int fit_rows_used = 0;
  bool forced_uniform = false;        // no usable fit rows: epoch played uniform
  bool calibration_fallback = false;  // calibration failed: imputed with g_tilde
};

struct RegretTrace {
  std::string algo;
  std::uint64_t replication = 0;
  std::vector<RoundRecord> rounds;
  std::vector<EpochInfo> epochs;
};

RegretTrace run_primo(const EnvironmentSpec& spec, const RunConfig& config,
                      std::uint64_t seed, std::uint64_t replication);

RegretTrace run_primo_cal(const EnvironmentSpec& spec, const RunConfig& config,
                          std::uint64_t seed, std::uint64_t replication);

RegretTrace run_baseline(const EnvironmentSpec& spec, const RunConfig& config,
                         BaselineKind kind, std::uint64_t seed,
                         std::uint64_t replication);

struct FinalStats {
  double mean = 0.0, median = 0.0, q25 = 0.0, q75 = 0.0, iqr = 0.0;
  double min = 0.0, max = 0.0;
};

struct AggregateCurve {
  std::vector<double> mean, median, q25, q75;  // cumulative regret per round
};

struct AlgoAggregate {
  std::string algo;
  int replications = 0;
  AggregateCurve curve;
  FinalStats final_cum;
  FinalStats tail_per_round;  // per-round regret averaged over the last quarter
  std::vector<double> final_cum_per_rep;
  std::vector<double> tail_per_rep;
};

FinalStats final_stats(std::vector<double> values);

// Average instantaneous regret over the last quarter of a trace.
double tail_per_round_regret(const RegretTrace& trace);

// Group traces by algorithm tag (first-seen order) and summarize.
std::vector<AlgoAggregate> aggregate(const std::vector<RegretTrace>& traces);

}  // namespace primo
