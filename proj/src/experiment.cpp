#include "primo/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace primo {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

RegretTrace run_one(const ExperimentConfig& config, const AlgorithmConfig& algo,
                    std::uint64_t replication) {
  const RunConfig rc = make_run_config(config, algo);
  RegretTrace trace;
  switch (algo.kind) {
    case AlgorithmKind::primo:
      trace = run_primo(config.environment, rc, config.seed, replication);
      break;
    case AlgorithmKind::primo_cal:
      trace = run_primo_cal(config.environment, rc, config.seed, replication);
      break;
    case AlgorithmKind::uniform:
      trace = run_baseline(config.environment, rc, BaselineKind::uniform, config.seed,
                           replication);
      break;
    case AlgorithmKind::drop_missing:
      trace = run_baseline(config.environment, rc, BaselineKind::drop_missing,
                           config.seed, replication);
      break;
    case AlgorithmKind::oracle_covariate:
      trace = run_baseline(config.environment, rc, BaselineKind::oracle_covariate,
                           config.seed, replication);
      break;
  }
  trace.algo = algo.tag;
  return trace;
}

nlohmann::json stats_json(const FinalStats& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"q25", s.q25}, {"q75", s.q75},
          {"iqr", s.iqr},   {"min", s.min},       {"max", s.max}};
}

}  // namespace

void resolve_schedule_constants(ExperimentConfig& config, ElasticityEstimate& elasticity,
                                UpsilonEstimate& upsilon) {
  RandomStream el_stream(config.seed, 0, StreamPurpose::elasticity);
  elasticity = estimate_elasticity(config.environment, config.environment.f_star.map,
                                   config.reward_norm_bound, config.environment.g_tilde,
                                   config.elasticity_samples, el_stream);
  RandomStream up_stream(config.seed, 1, StreamPurpose::elasticity);
  upsilon = estimate_upsilon(config.environment, config.environment.g_tilde,
                             config.elasticity_samples, up_stream);
  for (auto& algo : config.algorithms) {
    if (algo.estimate_elasticity) algo.gamma.elasticity = elasticity.value;
    if (algo.estimate_upsilon) {
      if (!(upsilon.value > 0.0))
        throw std::runtime_error(
            "estimated reward-sensitivity floor is zero; set gamma.upsilon "
            "explicitly for algorithm " + algo.tag);
      algo.gamma.upsilon = upsilon.value;
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& original) {
  ExperimentConfig config = original;
  ExperimentResult result;
  resolve_schedule_constants(config, result.elasticity, result.upsilon);

  const int reps = config.replications;
  const int total = static_cast<int>(config.algorithms.size()) * reps;
  result.traces.resize(total);

  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= total) return;
      try {
        const auto& algo = config.algorithms[i / reps];
        result.traces[i] = run_one(config, algo, static_cast<std::uint64_t>(i % reps));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, total));
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  result.aggregates = aggregate(result.traces);
  return result;
}

std::string trace_csv(const std::vector<RegretTrace>& traces) {
  std::string out = "replication,round,epoch,algo,gamma,instant_regret,cum_regret,missing\n";
  std::size_t rows = 0;
  for (const auto& trace : traces) rows += trace.rounds.size();
  out.reserve(out.size() + rows * 72);
  for (const auto& trace : traces) {
    for (const auto& r : trace.rounds) {
      out += std::to_string(trace.replication);
      out += ',';
      out += std::to_string(r.round);
      out += ',';
      out += std::to_string(r.epoch);
      out += ',';
      out += trace.algo;
      out += ',';
      append_double(out, r.gamma);
      out += ',';
      append_double(out, r.instant_regret);
      out += ',';
      append_double(out, r.cum_regret);
      out += ',';
      out += std::to_string(r.missing);
      out += '\n';
    }
  }
  return out;
}

nlohmann::json summary_json(const ExperimentConfig& config,
                            const ExperimentResult& result) {
  nlohmann::json out;
  out["seed"] = config.seed;
  out["horizon"] = config.horizon;
  out["replications"] = config.replications;
  out["delta0"] = config.environment.delta0;
  out["eta_bound"] = config.environment.eta_bound;
  switch (config.environment.missingness.mode) {
    case MissingnessMode::mcar: out["missingness"] = "mcar"; break;
    case MissingnessMode::mar: out["missingness"] = "mar"; break;
    case MissingnessMode::mnar: out["missingness"] = "mnar"; break;
  }
  out["elasticity"] = result.elasticity.value;
  out["upsilon"] = result.upsilon.value;

  nlohmann::json algos = nlohmann::json::array();
  for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
    const auto& entry = config.algorithms[i];
    const auto& agg = result.aggregates.at(i);
    nlohmann::json a;
    a["tag"] = agg.algo;
    a["kind"] = algorithm_kind_name(entry.kind);
    a["gamma_mode"] = entry.gamma.mode == GammaMode::practical ? "practical" : "theory";
    a["final_cum"] = stats_json(agg.final_cum);
    a["tail_per_round"] = stats_json(agg.tail_per_round);
    a["final_cum_per_rep"] = agg.final_cum_per_rep;
    a["tail_per_rep"] = agg.tail_per_rep;
    algos.push_back(std::move(a));
  }
  out["algorithms"] = std::move(algos);
  return out;
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const int reps = config.replications;
  for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
    const auto first = result.traces.begin() + static_cast<std::ptrdiff_t>(i) * reps;
    const std::vector<RegretTrace> slice(first, first + reps);
    const fs::path path =
        fs::path(config.out_dir) / ("trace_" + config.algorithms[i].tag + ".csv");
    std::ofstream file(path, std::ios::binary);
    file << trace_csv(slice);
    if (!file) throw std::runtime_error("cannot write " + path.string());
  }
  const fs::path path = fs::path(config.out_dir) / "summary.json";
  std::ofstream file(path, std::ios::binary);
  file << summary_json(config, result).dump(2) << '\n';
  if (!file) throw std::runtime_error("cannot write " + path.string());
}

nlohmann::json run_sweep(const nlohmann::json& base, const std::string& pointer,
                         const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: no values given");
  nlohmann::json::json_pointer ptr;
  try {
    ptr = nlohmann::json::json_pointer(pointer);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("sweep: bad parameter pointer: " + std::string(e.what()));
  }
  const nlohmann::json::json_pointer parent = ptr.parent_pointer();
  if (!base.contains(parent) || !base.at(parent).is_object())
    throw std::invalid_argument("sweep: no config section at " + pointer);
  nlohmann::json points = nlohmann::json::array();
  for (const double v : values) {
    nlohmann::json patched = base;
    try {
      patched[ptr] = v;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("sweep: cannot set " + pointer + ": " + e.what());
    }
    ConfigLoadResult loaded = parse_config(patched);
    if (!loaded.errors.empty()) {
      std::string msg = "sweep: value " + std::to_string(v) + " rejected:";
      for (const auto& err : loaded.errors) msg += "\n  " + err;
      throw std::invalid_argument(msg);
    }
    const ExperimentResult res = run_experiment(loaded.config);
    nlohmann::json point;
    point["value"] = v;
    point["summary"] = summary_json(loaded.config, res);
    points.push_back(std::move(point));
  }
  nlohmann::json out;
  out["parameter"] = pointer;
  nlohmann::json vals = nlohmann::json::array();
  for (const double v : values) vals.push_back(v);
  out["values"] = std::move(vals);
  out["points"] = std::move(points);
  return out;
}

}  // namespace primo
