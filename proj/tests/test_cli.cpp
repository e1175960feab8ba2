#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "primo/experiment.hpp"

using namespace primo;
using nlohmann::json;

namespace {

json tiny_config() {
  return json{
      {"seed", 5},
      {"horizon", 64},
      {"replications", 2},
      {"workers", 2},
      {"elasticity_samples", 1000},
      {"environment",
       {{"d_x", 2},
        {"num_actions", 3},
        {"eta_bound", 0.3},
        {"delta0", 0.5},
        {"g_tilde", {{"shift_mode", "intercept"}, {"shift_fraction", 0.5}}},
        {"missingness", {{"mode", "mcar"}, {"p", 0.5}}}}},
      {"algorithms",
       json::array({{{"name", "primo"}, {"tag", "p"}}, {{"name", "uniform"}}})}};
}

bool any_error_contains(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("an empty config parses to the documented defaults") {
  const ConfigLoadResult r = parse_config(json::object());
  REQUIRE(r.errors.empty());
  const ExperimentConfig& cfg = r.config;

  CHECK(cfg.seed == 1);
  CHECK(cfg.horizon == 16384);
  CHECK(cfg.replications == 20);
  CHECK(cfg.workers == 0);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.elasticity_samples == 100000);
  CHECK(cfg.reward_norm_bound == 10.0);
  CHECK(cfg.delta0_slack == 1.0);

  CHECK(cfg.environment.d_x == 3);
  CHECK(cfg.environment.num_actions == 4);
  CHECK(cfg.environment.x_max == 1.0);
  CHECK(cfg.environment.delta0 == 0.5);
  CHECK(cfg.environment.eta_bound == 0.0);
  CHECK(cfg.environment.eta_std == 0.0);
  CHECK(cfg.environment.missingness.mode == MissingnessMode::mcar);

  REQUIRE(cfg.algorithms.size() == 1);
  CHECK(cfg.algorithms[0].kind == AlgorithmKind::primo);
  CHECK(cfg.algorithms[0].tag == "primo");
  CHECK(cfg.algorithms[0].gamma.mode == GammaMode::practical);
  CHECK(cfg.algorithms[0].gamma.num_actions == 4);

  // Drawn models must be usable as-is.
  CHECK(cfg.environment.f_star.weights.size() == cfg.environment.f_star.map.dim());
  CHECK(cfg.environment.f_star.weights.norm() <= cfg.reward_norm_bound + 1e-12);
  CHECK(cfg.environment.f_star.weights.allFinite());
  CHECK(cfg.environment.g_star.weights.allFinite());
  CHECK(cfg.environment.g_tilde.weights.allFinite());
}

TEST_CASE("all validation problems are reported together with their paths") {
  const json bad = {{"horizon", 1},
                    {"environment", {{"eps0", 2.0}}},
                    {"algorithms", json::array({{{"name", "wizard"}}})}};
  const ConfigLoadResult r = parse_config(bad);
  CHECK(r.errors.size() >= 3);
  CHECK(any_error_contains(r.errors, "horizon"));
  CHECK(any_error_contains(r.errors, "eps0"));
  CHECK(any_error_contains(r.errors, "name"));
  for (const auto& e : r.errors) CHECK(e.rfind("config", 0) == 0);
}

TEST_CASE("type mismatches are rejected, not coerced") {
  CHECK(any_error_contains(parse_config({{"horizon", "long"}}).errors, "horizon"));
  CHECK(any_error_contains(parse_config({{"environment", 5}}).errors, "environment"));
  CHECK(any_error_contains(parse_config({{"seed", 1.5}}).errors, "seed"));
  CHECK(any_error_contains(
      parse_config({{"algorithms", json::array({"primo"})}}).errors, "algorithms"));
}

TEST_CASE("explicit model weights must match the feature dimension") {
  const json bad = {
      {"environment", {{"d_x", 3}, {"g_star", {{"weights", {1.0, 2.0}}}}}}};
  const ConfigLoadResult r = parse_config(bad);
  CHECK(any_error_contains(r.errors, "weights must have length 4"));
}

TEST_CASE("the pre-trained model lands at the requested distance from the truth") {
  json cfg = json::object();
  cfg["seed"] = 9;
  cfg["environment"] = {{"delta0", 0.5},
                        {"g_tilde", {{"shift_mode", "intercept"}, {"shift_fraction", 0.8}}}};
  const ConfigLoadResult r = parse_config(cfg);
  REQUIRE(r.errors.empty());
  const EnvironmentSpec& spec = r.config.environment;

  RandomStream probe(404, 0, StreamPurpose::probe);
  const double dist =
      monte_carlo_l2_distance(spec, spec.g_tilde, spec.g_star, 20000, probe);
  CHECK(dist == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("covariate noise sd defaults to a third of its bound") {
  const ConfigLoadResult r = parse_config({{"environment", {{"eta_bound", 0.6}}}});
  REQUIRE(r.errors.empty());
  CHECK(r.config.environment.eta_bound == 0.6);
  CHECK(r.config.environment.eta_std == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("the automatic selection threshold sits at the covariate median") {
  json cfg = json::object();
  cfg["seed"] = 11;
  cfg["environment"] = {{"eta_bound", 0.3},
                        {"missingness", {{"mode", "mnar"}, {"flip_prob", 0.0}}}};
  const ConfigLoadResult r = parse_config(cfg);
  REQUIRE(r.errors.empty());
  const EnvironmentSpec& spec = r.config.environment;
  REQUIRE(spec.missingness.mode == MissingnessMode::mnar);
  const double thr = spec.missingness.mnar_threshold;

  EnvStreams streams(777, 0);
  int below = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i)
    if (sample_round(spec, streams).z_true <= thr) ++below;
  CHECK(static_cast<double>(below) / n == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("algorithm tags must be distinct and filename-safe") {
  const json dup = {
      {"algorithms", json::array({{{"name", "primo"}}, {{"name", "primo"}}})}};
  CHECK(any_error_contains(parse_config(dup).errors, "duplicate tag"));

  const json bad_tag = {
      {"algorithms", json::array({{{"name", "primo"}, {"tag", "bad tag!"}}})}};
  CHECK(any_error_contains(parse_config(bad_tag).errors, "tag"));
}

TEST_CASE("per-algorithm run configuration copies the experiment settings") {
  const ConfigLoadResult r = parse_config(tiny_config());
  REQUIRE(r.errors.empty());
  const RunConfig run = make_run_config(r.config, r.config.algorithms[0]);
  CHECK(run.horizon == 64);
  CHECK(run.reward_norm_bound == 10.0);
  CHECK(run.calibration.delta0_slack == 1.0);
  CHECK(run.propensity_map.dim() == r.config.propensity_map.dim());
  CHECK(run.gamma.mode == GammaMode::practical);
  CHECK(run.gamma.num_actions == 3);
}

TEST_CASE("a small experiment produces algorithm-major traces and aggregates") {
  const ConfigLoadResult r = parse_config(tiny_config());
  REQUIRE(r.errors.empty());
  const ExperimentResult result = run_experiment(r.config);

  REQUIRE(result.traces.size() == 4);
  CHECK(result.traces[0].algo == "p");
  CHECK(result.traces[0].replication == 0);
  CHECK(result.traces[1].algo == "p");
  CHECK(result.traces[1].replication == 1);
  CHECK(result.traces[2].algo == "uniform");
  CHECK(result.traces[3].algo == "uniform");
  for (const auto& t : result.traces) CHECK(t.rounds.size() == 64);

  REQUIRE(result.aggregates.size() == 2);
  CHECK(result.aggregates[0].algo == "p");
  CHECK(result.aggregates[0].replications == 2);
  CHECK(result.aggregates[0].final_cum_per_rep.size() == 2);
  CHECK(result.aggregates[0].tail_per_rep.size() == 2);

  // The pre-trained model is genuinely off the truth here.
  CHECK(result.elasticity.value > 0.0);
  CHECK(result.upsilon.value >= 0.0);
}

TEST_CASE("trace CSV is well formed and mirrors the traces") {
  const ConfigLoadResult r = parse_config(tiny_config());
  REQUIRE(r.errors.empty());
  const ExperimentResult result = run_experiment(r.config);
  const std::string csv = trace_csv(result.traces);

  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 1 + 4 * 64);
  CHECK(lines[0] ==
        "replication,round,epoch,algo,gamma,instant_regret,cum_regret,missing");

  std::size_t line_idx = 1;
  for (const auto& trace : result.traces) {
    double prev_cum = 0.0;
    for (const auto& round : trace.rounds) {
      const auto fields = split_csv_line(lines[line_idx++]);
      REQUIRE(fields.size() == 8);
      CHECK(std::stoull(fields[0]) == trace.replication);
      CHECK(std::stoll(fields[1]) == round.round);
      CHECK(std::stoi(fields[2]) == round.epoch);
      CHECK(fields[3] == trace.algo);
      CHECK(std::stod(fields[4]) == round.gamma);
      CHECK(std::stod(fields[5]) == round.instant_regret);
      CHECK(std::stod(fields[6]) == round.cum_regret);
      CHECK((fields[7] == "0" || fields[7] == "1"));
      if (round.epoch == 1) CHECK(fields[4] == "0");
      CHECK(round.cum_regret >= prev_cum);
      prev_cum = round.cum_regret;
    }
  }
}

TEST_CASE("experiment output is identical for any worker count and across reruns") {
  const ConfigLoadResult r = parse_config(tiny_config());
  REQUIRE(r.errors.empty());

  ExperimentConfig serial = r.config;
  serial.workers = 1;
  ExperimentConfig pooled = r.config;
  pooled.workers = 3;

  const std::string a = trace_csv(run_experiment(serial).traces);
  const std::string b = trace_csv(run_experiment(pooled).traces);
  const std::string c = trace_csv(run_experiment(serial).traces);
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("summary JSON reports per-replication results matching the traces") {
  const ConfigLoadResult r = parse_config(tiny_config());
  REQUIRE(r.errors.empty());
  const ExperimentResult result = run_experiment(r.config);
  const json summary = summary_json(r.config, result);

  CHECK(summary["seed"] == 5);
  CHECK(summary["horizon"] == 64);
  CHECK(summary["replications"] == 2);
  CHECK(summary["missingness"] == "mcar");
  CHECK(summary["delta0"] == 0.5);
  CHECK(summary["eta_bound"] == 0.3);
  CHECK(summary.contains("elasticity"));
  CHECK(summary.contains("upsilon"));

  REQUIRE(summary["algorithms"].size() == 2);
  const json& first = summary["algorithms"][0];
  CHECK(first["tag"] == "p");
  CHECK(first["kind"] == "primo");
  CHECK(first["gamma_mode"] == "practical");
  REQUIRE(first["final_cum_per_rep"].size() == 2);
  CHECK(first["final_cum_per_rep"][0].get<double>() ==
        result.traces[0].rounds.back().cum_regret);
  CHECK(first["final_cum_per_rep"][1].get<double>() ==
        result.traces[1].rounds.back().cum_regret);
  CHECK(first["final_cum"]["mean"].get<double>() ==
        doctest::Approx(result.aggregates[0].final_cum.mean).epsilon(1e-15));
  CHECK(first["tail_per_round"].contains("median"));
}

TEST_CASE("sweeps rerun the same seed per point and reject bad patches") {
  json base = tiny_config();
  base["replications"] = 1;
  base["algorithms"] = json::array({{{"name", "primo"}}});

  const json report = run_sweep(base, "/environment/delta0", {0.25, 0.5});
  CHECK(report["parameter"] == "/environment/delta0");
  REQUIRE(report["points"].size() == 2);
  CHECK(report["points"][0]["value"] == 0.25);
  CHECK(report["points"][1]["value"] == 0.5);
  for (const auto& point : report["points"]) {
    const json& s = point["summary"];
    CHECK(s["seed"] == 5);
    CHECK(s["algorithms"][0]["final_cum"].contains("mean"));
  }

  CHECK_THROWS_AS(run_sweep(base, "/environment/delta0", {}), std::invalid_argument);
  CHECK_THROWS_AS(run_sweep(base, "/no/such/field", {0.5}), std::invalid_argument);
  try {
    run_sweep(base, "/environment/delta0", {-1.0});
    FAIL("expected a validation failure");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("rejected") != std::string::npos);
  }
}
