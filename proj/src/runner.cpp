#include "primo/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace primo {

namespace {

enum class AlgoKind { primo, primo_cal, uniform, drop_missing, oracle_covariate };

std::string kind_name(AlgoKind kind) {
  switch (kind) {
    case AlgoKind::primo: return "primo";
    case AlgoKind::primo_cal: return "primo_cal";
    case AlgoKind::uniform: return "uniform";
    case AlgoKind::drop_missing: return "drop_missing";
    case AlgoKind::oracle_covariate: return "oracle_covariate";
  }
  return "?";
}

RegretTrace run_kind(const EnvironmentSpec& spec, const RunConfig& config,
                     AlgoKind kind, std::uint64_t seed, std::uint64_t replication) {
  const auto ranges = split_into_epochs(config.horizon);
  const FeatureMap& reward_map = spec.f_star.map;

  EnvStreams env_streams(seed, replication);
  RandomStream policy_stream(seed, replication, StreamPurpose::policy);
  RandomStream shuffle_stream(seed, replication, StreamPurpose::shuffle);

  RegretTrace trace;
  trace.algo = kind_name(kind);
  trace.replication = replication;
  trace.rounds.reserve(static_cast<std::size_t>(config.horizon));

  std::vector<Dataset> epoch_data;
  LinearModel f_hat;
  LinearModel g_impute = spec.g_tilde;
  bool have_fit = false;
  double cum = 0.0;

  for (std::size_t e = 0; e < ranges.size(); ++e) {
    const int s = static_cast<int>(e) + 1;
    EpochInfo info;
    info.epoch = s;
    info.start = ranges[e].first;
    info.end = ranges[e].second;

    if (s >= 2 && kind != AlgoKind::uniform) {
      const Dataset& prev = epoch_data[e - 1];
      info.fit_lo = ranges[e - 1].first;
      info.fit_hi = ranges[e - 1].second;
      info.fit_rows_total = static_cast<int>(prev.rows.size());

      if (kind == AlgoKind::primo_cal) {
        try {
          CalibrationResult cal =
              calibrate(prev, spec.g_tilde, config.propensity_map, spec.eps0,
                        spec.delta0, shuffle_stream, config.calibration);
          g_impute = cal.g_hat;
        } catch (const InsufficientDataError&) {
          g_impute = spec.g_tilde;
          info.calibration_fallback = true;
        }
      }

      RegressionData reg;
      for (const auto& row : prev.rows) {
        if (kind == AlgoKind::drop_missing && !row.observed) continue;
        reg.features.push_back(
            reward_map.features(row.context, row.covariate_used, row.action));
        reg.targets.push_back(row.reward);
      }
      info.fit_rows_used = static_cast<int>(reg.features.size());
      if (reg.features.empty()) {
        info.forced_uniform = true;
        have_fit = false;
      } else {
        f_hat = fit_erm_squared(reward_map, reg, config.reward_norm_bound,
                                ClipRange{0.0, 1.0});
        have_fit = true;
        info.gamma = gamma_value(s, config.gamma);
      }
    }

    const bool uniform_epoch = s == 1 || kind == AlgoKind::uniform || !have_fit;
    Dataset current;
    current.epoch_index = s;
    current.rows.reserve(static_cast<std::size_t>(info.end - info.start));

    for (std::int64_t t = info.start + 1; t <= info.end; ++t) {
      const EnvRound round = sample_round(spec, env_streams);
      double z_used;
      switch (kind) {
        case AlgoKind::oracle_covariate:
          z_used = round.z_true;
          break;
        case AlgoKind::primo_cal:
          z_used = round.observed ? round.z_true : g_impute.value(round.context);
          break;
        default:
          z_used = round.observed ? round.z_true : spec.g_tilde.value(round.context);
      }

      const PolicyDistribution dist =
          uniform_epoch ? uniform_distribution(spec.num_actions)
                        : igw_distribution(f_hat, info.gamma, round.context, z_used);
      const int action = sample_action(dist, policy_stream);
      const double reward = realize_reward(spec, round, action);

      current.rows.push_back(
          RoundTuple{round.context, round.observed, z_used, action, reward});

      const double inst = instant_regret(spec, round, dist.probs);
      cum += inst;
      trace.rounds.push_back(RoundRecord{t, s, uniform_epoch ? 0.0 : info.gamma,
                                         inst, cum, 1 - round.observed});
    }
    epoch_data.push_back(std::move(current));
    trace.epochs.push_back(info);
  }
  return trace;
}

}  // namespace

RegretTrace run_primo(const EnvironmentSpec& spec, const RunConfig& config,
                      std::uint64_t seed, std::uint64_t replication) {
  return run_kind(spec, config, AlgoKind::primo, seed, replication);
}

RegretTrace run_primo_cal(const EnvironmentSpec& spec, const RunConfig& config,
                          std::uint64_t seed, std::uint64_t replication) {
  return run_kind(spec, config, AlgoKind::primo_cal, seed, replication);
}

RegretTrace run_baseline(const EnvironmentSpec& spec, const RunConfig& config,
                         BaselineKind kind, std::uint64_t seed,
                         std::uint64_t replication) {
  switch (kind) {
    case BaselineKind::uniform:
      return run_kind(spec, config, AlgoKind::uniform, seed, replication);
    case BaselineKind::drop_missing:
      return run_kind(spec, config, AlgoKind::drop_missing, seed, replication);
    case BaselineKind::oracle_covariate:
      return run_kind(spec, config, AlgoKind::oracle_covariate, seed, replication);
  }
  throw std::invalid_argument("run_baseline: unknown kind");
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

FinalStats final_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("final_stats: empty input");
  FinalStats st;
  st.mean = 0.0;
  for (const double v : values) st.mean += v;
  st.mean /= static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  st.min = values.front();
  st.max = values.back();
  st.median = quantile_sorted(values, 0.5);
  st.q25 = quantile_sorted(values, 0.25);
  st.q75 = quantile_sorted(values, 0.75);
  st.iqr = st.q75 - st.q25;
  return st;
}

double tail_per_round_regret(const RegretTrace& trace) {
  const std::int64_t T = static_cast<std::int64_t>(trace.rounds.size());
  if (T == 0) throw std::invalid_argument("tail_per_round_regret: empty trace");
  const std::int64_t window = std::max<std::int64_t>(1, T / 4);
  const double cum_end = trace.rounds.back().cum_regret;
  const double cum_start =
      T - window > 0 ? trace.rounds[static_cast<std::size_t>(T - window - 1)].cum_regret : 0.0;
  return (cum_end - cum_start) / static_cast<double>(window);
}

std::vector<AlgoAggregate> aggregate(const std::vector<RegretTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RegretTrace*>> groups;
  for (const auto& t : traces) {
    if (!groups.count(t.algo)) order.push_back(t.algo);
    groups[t.algo].push_back(&t);
  }

  std::vector<AlgoAggregate> out;
  for (const auto& algo : order) {
    const auto& group = groups[algo];
    const std::size_t T = group.front()->rounds.size();
    for (const auto* t : group)
      if (t->rounds.size() != T)
        throw std::invalid_argument("aggregate: traces have mismatched horizons");

    AlgoAggregate agg;
    agg.algo = algo;
    agg.replications = static_cast<int>(group.size());
    agg.curve.mean.resize(T);
    agg.curve.median.resize(T);
    agg.curve.q25.resize(T);
    agg.curve.q75.resize(T);

    std::vector<double> column(group.size());
    for (std::size_t t = 0; t < T; ++t) {
      double mean = 0.0;
      for (std::size_t r = 0; r < group.size(); ++r) {
        column[r] = group[r]->rounds[t].cum_regret;
        mean += column[r];
      }
      agg.curve.mean[t] = mean / static_cast<double>(group.size());
      std::sort(column.begin(), column.end());
      agg.curve.median[t] = quantile_sorted(column, 0.5);
      agg.curve.q25[t] = quantile_sorted(column, 0.25);
      agg.curve.q75[t] = quantile_sorted(column, 0.75);
    }

    for (const auto* t : group) {
      agg.final_cum_per_rep.push_back(t->rounds.back().cum_regret);
      agg.tail_per_rep.push_back(tail_per_round_regret(*t));
    }
    agg.final_cum = final_stats(agg.final_cum_per_rep);
    agg.tail_per_round = final_stats(agg.tail_per_rep);
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace primo
