#include "primo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace primo {

namespace {

using nlohmann::json;

// Collects problems instead of throwing so a config file reports every
// violation at once.
struct Reader {
  const json* j;
  std::string path;
  std::vector<std::string>* errors;

  void fail(const std::string& msg) const { errors->push_back(path + ": " + msg); }

  bool has(const char* key) const { return j && j->contains(key); }

  Reader child(const char* key) const {
    if (!has(key)) return Reader{nullptr, path + "." + key, errors};
    const json& c = (*j)[key];
    if (!c.is_object()) {
      errors->push_back(path + "." + key + ": expected an object");
      return Reader{nullptr, path + "." + key, errors};
    }
    return Reader{&c, path + "." + key, errors};
  }

  double number(const char* key, double def) const {
    if (!has(key)) return def;
    const json& v = (*j)[key];
    if (!v.is_number()) {
      errors->push_back(path + "." + key + ": expected a number");
      return def;
    }
    return v.get<double>();
  }

  std::int64_t integer(const char* key, std::int64_t def) const {
    if (!has(key)) return def;
    const json& v = (*j)[key];
    if (!v.is_number_integer()) {
      errors->push_back(path + "." + key + ": expected an integer");
      return def;
    }
    return v.get<std::int64_t>();
  }

  bool boolean(const char* key, bool def) const {
    if (!has(key)) return def;
    const json& v = (*j)[key];
    if (!v.is_boolean()) {
      errors->push_back(path + "." + key + ": expected a boolean");
      return def;
    }
    return v.get<bool>();
  }

  std::string str(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    const json& v = (*j)[key];
    if (!v.is_string()) {
      errors->push_back(path + "." + key + ": expected a string");
      return def;
    }
    return v.get<std::string>();
  }

  std::vector<double> number_list(const char* key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = (*j)[key];
    if (!v.is_array()) {
      errors->push_back(path + "." + key + ": expected an array of numbers");
      return out;
    }
    for (const auto& e : v) {
      if (!e.is_number()) {
        errors->push_back(path + "." + key + ": expected an array of numbers");
        return {};
      }
      out.push_back(e.get<double>());
    }
    return out;
  }
};

constexpr int kNormalizationSamples = 50000;
constexpr int kMedianSamples = 100001;

// Stream slots used while materializing a config (replication field reused
// as a sub-task id; runner streams use different purposes, so no overlap).
enum Slot : std::uint64_t {
  slot_g_star = 0,
  slot_f_star = 1,
  slot_g_tilde = 2,
  slot_g_star_norm = 10,
  slot_f_star_norm = 11,
  slot_g_tilde_scale = 12,
  slot_threshold = 13,
};

LinearModel build_g_star(const Reader& env, const FeatureMap& map,
                         const EnvironmentSpec& spec, std::uint64_t seed) {
  LinearModel g;
  g.map = map;
  g.norm_bound = 100.0;
  const Reader r = env.child("g_star");
  if (r.has("weights")) {
    const auto w = r.number_list("weights");
    if (static_cast<int>(w.size()) != map.dim()) {
      r.fail("weights must have length " + std::to_string(map.dim()));
      g.weights = Eigen::VectorXd::Zero(map.dim());
    } else {
      g.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), map.dim());
    }
    return g;
  }

  const double z_sd = r.j ? r.number("z_sd", 0.5) : 0.5;
  if (z_sd < 0.0) r.fail("z_sd must be nonnegative");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(map.dim());
  RandomStream draw(seed, slot_g_star, StreamPurpose::model_init);
  for (int i = 1; i < map.dim(); ++i) w[i] = draw.normal();

  RandomStream mc(seed, slot_g_star_norm, StreamPurpose::spec_setup);
  double mean = 0.0, sq = 0.0;
  for (int i = 0; i < kNormalizationSamples; ++i) {
    const Context ctx = sample_context(spec, mc);
    const double v = w.dot(map.features(ctx));
    mean += v;
    sq += v * v;
  }
  mean /= kNormalizationSamples;
  const double sd = std::sqrt(std::max(0.0, sq / kNormalizationSamples - mean * mean));
  const double scale = (z_sd > 0.0 && sd > 1e-12) ? z_sd / sd : 0.0;
  w *= scale;
  w[0] = -mean * scale;  // center the covariate at zero
  g.weights = std::move(w);
  return g;
}

LinearModel build_f_star(const Reader& env, const FeatureMap& map,
                         const EnvironmentSpec& spec, std::uint64_t seed,
                         double norm_bound) {
  LinearModel f;
  f.map = map;
  f.norm_bound = norm_bound;
  f.clip = ClipRange{0.0, 1.0};
  const Reader r = env.child("f_star");
  if (r.has("weights")) {
    const auto w = r.number_list("weights");
    if (static_cast<int>(w.size()) != map.dim()) {
      r.fail("weights must have length " + std::to_string(map.dim()));
      f.weights = Eigen::VectorXd::Zero(map.dim());
    } else {
      f.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), map.dim());
    }
    return f;
  }

  const double value_sd = r.j ? r.number("value_sd", 0.15) : 0.15;
  const double bias_spread = r.j ? r.number("bias_spread", 0.1) : 0.1;
  const double z_emphasis = r.j ? r.number("z_emphasis", 1.0) : 1.0;
  if (value_sd < 0.0) r.fail("value_sd must be nonnegative");
  if (bias_spread < 0.0) r.fail("bias_spread must be nonnegative");
  if (z_emphasis < 0.0) r.fail("z_emphasis must be nonnegative");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(map.dim());
  RandomStream draw(seed, slot_f_star, StreamPurpose::model_init);
  std::vector<double> biases(map.num_actions, 0.0);
  for (int a = 0; a < map.num_actions; ++a) {
    const auto [off, len] = map.block_span(a);
    (void)len;
    int i = off;
    if (map.with_bias) i += 1;
    if (map.with_x)
      for (int k = 0; k < map.d_x; ++k) w[i++] = draw.normal();
    if (map.with_z) w[i++] = z_emphasis * draw.normal();
    if (map.with_zx)
      for (int k = 0; k < map.d_x; ++k) w[i++] = z_emphasis * draw.normal();
    biases[a] = 0.5 + bias_spread * draw.uniform(-1.0, 1.0);
  }

  // Normalize each action's value spread against the pre-noise covariate
  // g*(x), then center values near 1/2 so clipping stays mostly inactive.
  RandomStream mc(seed, slot_f_star_norm, StreamPurpose::spec_setup);
  std::vector<double> mean(map.num_actions, 0.0), sq(map.num_actions, 0.0);
  for (int i = 0; i < kNormalizationSamples; ++i) {
    const Context ctx = sample_context(spec, mc);
    const double z = spec.g_star.value(ctx);
    for (int a = 0; a < map.num_actions; ++a) {
      const double v = w.dot(map.features(ctx, z, a));
      mean[a] += v;
      sq[a] += v * v;
    }
  }
  for (int a = 0; a < map.num_actions; ++a) {
    mean[a] /= kNormalizationSamples;
    const double sd =
        std::sqrt(std::max(0.0, sq[a] / kNormalizationSamples - mean[a] * mean[a]));
    const double scale = (value_sd > 0.0 && sd > 1e-12) ? value_sd / sd : 0.0;
    const auto [off, len] = map.block_span(a);
    w.segment(off, len) *= scale;
    if (map.with_bias) w[off] = biases[a] - mean[a] * scale;
  }
  f.weights = std::move(w);
  return f;
}

LinearModel build_g_tilde(const Reader& env, const EnvironmentSpec& spec,
                          std::uint64_t seed) {
  LinearModel g = spec.g_star;
  const Reader r = env.child("g_tilde");
  if (r.has("weights")) {
    const auto w = r.number_list("weights");
    if (static_cast<int>(w.size()) != g.map.dim()) {
      r.fail("weights must have length " + std::to_string(g.map.dim()));
    } else {
      g.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), g.map.dim());
    }
    return g;
  }

  const std::string mode = r.j ? r.str("shift_mode", "intercept") : "intercept";
  const double fraction = r.j ? r.number("shift_fraction", 0.5) : 0.5;
  if (fraction < 0.0) r.fail("shift_fraction must be nonnegative");
  if (fraction == 0.0) return g;

  Eigen::VectorXd dir = Eigen::VectorXd::Zero(g.map.dim());
  if (mode == "intercept") {
    dir[0] = 1.0;
  } else if (mode == "ones") {
    dir.setOnes();
  } else if (mode == "random") {
    RandomStream draw(seed, slot_g_tilde, StreamPurpose::model_init);
    for (int i = 0; i < dir.size(); ++i) dir[i] = draw.normal();
  } else {
    r.fail("shift_mode must be one of intercept, ones, random");
    return g;
  }

  LinearModel dir_model = g;
  dir_model.weights = dir;
  LinearModel zero_model = g;
  zero_model.weights = Eigen::VectorXd::Zero(g.map.dim());
  RandomStream mc(seed, slot_g_tilde_scale, StreamPurpose::spec_setup);
  const double norm = monte_carlo_l2_distance(spec, dir_model, zero_model, 100000, mc);
  if (!(norm > 0.0)) {
    r.fail("perturbation direction has zero norm under the context law");
    return g;
  }
  const double target = fraction * spec.delta0;
  g.weights += (target / norm) * dir;
  return g;
}

MissingnessSpec build_missingness(const Reader& env, const FeatureMap& propensity_map,
                                  const EnvironmentSpec& spec, std::uint64_t seed) {
  MissingnessSpec miss;
  const Reader r = env.child("missingness");
  const std::string mode = r.j ? r.str("mode", "mcar") : "mcar";
  if (mode == "mcar") {
    miss.mode = MissingnessMode::mcar;
    miss.mcar_p = r.j ? r.number("p", 0.5) : 0.5;
    if (!(miss.mcar_p >= 0.0 && miss.mcar_p <= 1.0)) r.fail("p must lie in [0, 1]");
  } else if (mode == "mar") {
    miss.mode = MissingnessMode::mar;
    LinearModel e;
    e.map = propensity_map;
    e.norm_bound = 100.0;
    e.clip = ClipRange{spec.eps0, 1.0};
    const Reader er = r.child("e_star");
    if (er.has("weights")) {
      const auto w = er.number_list("weights");
      if (static_cast<int>(w.size()) != propensity_map.dim()) {
        er.fail("weights must have length " + std::to_string(propensity_map.dim()));
        e.weights = Eigen::VectorXd::Zero(propensity_map.dim());
      } else {
        e.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), propensity_map.dim());
      }
    } else {
      const double base = er.j ? er.number("base", 0.6) : 0.6;
      const double range = er.j ? er.number("range", 0.3) : 0.3;
      if (!(base > 0.0 && base <= 1.0)) er.fail("base must lie in (0, 1]");
      if (range < 0.0) er.fail("range must be nonnegative");
      Eigen::VectorXd w = Eigen::VectorXd::Zero(propensity_map.dim());
      w[0] = base;
      for (int i = 0; i < spec.d_x; ++i)
        w[1 + i] = range / (spec.d_x * spec.x_max);
      e.weights = std::move(w);
    }
    miss.e_star = std::move(e);
  } else if (mode == "mnar") {
    miss.mode = MissingnessMode::mnar;
    miss.mnar_flip_prob = r.j ? r.number("flip_prob", 0.1) : 0.1;
    if (!(miss.mnar_flip_prob >= 0.0 && miss.mnar_flip_prob <= 1.0))
      r.fail("flip_prob must lie in [0, 1]");
    if (r.has("threshold") && !(*r.j)["threshold"].is_null()) {
      miss.mnar_threshold = r.number("threshold", 0.0);
    } else {
      // median of z* under the current laws
      RandomStream mc(seed, slot_threshold, StreamPurpose::spec_setup);
      std::vector<double> zs(kMedianSamples);
      for (int i = 0; i < kMedianSamples; ++i) {
        const Context ctx = sample_context(spec, mc);
        zs[i] = spec.g_star.value(ctx) + sample_eta(spec, mc);
      }
      auto mid = zs.begin() + kMedianSamples / 2;
      std::nth_element(zs.begin(), mid, zs.end());
      miss.mnar_threshold = *mid;
    }
  } else {
    r.fail("mode must be one of mcar, mar, mnar");
  }
  return miss;
}

GammaSchedule build_gamma(const Reader& algo, const ExperimentConfig& cfg,
                          AlgorithmConfig& out) {
  GammaSchedule g;
  g.num_actions = cfg.environment.num_actions;
  const Reader r = algo.child("gamma");
  const std::string mode = r.j ? r.str("mode", "practical") : "practical";
  if (mode == "practical") {
    g.mode = GammaMode::practical;
    g.c = r.j ? r.number("c", 1.0) : 1.0;
    g.rho = r.j ? r.number("rho", 0.5) : 0.5;
    if (!(g.c > 0.0)) r.fail("c must be positive");
    if (!(g.rho > 0.0 && g.rho <= 2.0)) r.fail("rho must lie in (0, 2]");
    return g;
  }
  if (mode != "theory") {
    r.fail("mode must be practical or theory");
    return g;
  }
  g.mode = GammaMode::theory;
  g.calibrated = out.kind == AlgorithmKind::primo_cal;
  g.xi_bound = cfg.environment.xi_bound;
  g.confidence = r.j ? r.number("confidence", 0.1) : 0.1;
  if (!(g.confidence > 0.0 && g.confidence < 1.0))
    r.fail("confidence must lie in (0, 1)");

  const int reward_dim = cfg.environment.f_star.map.dim();
  const Reader rr = r.child("reward_radius");
  g.reward_radius.kind = RateKind::linear;
  g.reward_radius.param = static_cast<double>(reward_dim);
  if (rr.j) {
    try {
      g.reward_radius.kind = rate_kind_from_string(rr.str("kind", "linear"));
    } catch (const std::invalid_argument& e) {
      rr.fail(e.what());
    }
    g.reward_radius.param = rr.number("param", g.reward_radius.param);
    if (!(g.reward_radius.param > 0.0)) rr.fail("param must be positive");
  }

  if (r.has("elasticity") && !(*r.j)["elasticity"].is_null()) {
    g.elasticity = r.number("elasticity", 0.0);
    if (g.elasticity < 0.0) r.fail("elasticity must be nonnegative");
  } else {
    out.estimate_elasticity = true;
  }
  if (r.has("upsilon") && !(*r.j)["upsilon"].is_null()) {
    g.upsilon = r.number("upsilon", 1.0);
    if (!(g.upsilon > 0.0)) r.fail("upsilon must be positive");
  } else {
    out.estimate_upsilon = true;
  }

  g.eps0 = cfg.environment.eps0;
  g.tau = cfg.environment.eta_bound;
  g.omega0 = cfg.environment.eta_std;
  g.delta0 = cfg.environment.delta0;
  g.lipschitz_z = lipschitz_z_bound(cfg.environment.f_star.map,
                                    cfg.reward_norm_bound, cfg.environment.x_max);
  g.covering_d = r.number("covering_d", static_cast<double>(cfg.environment.d_x));
  if (!(g.covering_d > 0.0)) r.fail("covering_d must be positive");

  const int prop_dim = cfg.propensity_map.dim();
  const Reader pr = r.child("propensity_radius");
  g.propensity_radius.kind = RateKind::linear;
  g.propensity_radius.param = static_cast<double>(prop_dim);
  if (pr.j) {
    try {
      g.propensity_radius.kind = rate_kind_from_string(pr.str("kind", "linear"));
    } catch (const std::invalid_argument& e) {
      pr.fail(e.what());
    }
    g.propensity_radius.param = pr.number("param", g.propensity_radius.param);
    if (!(g.propensity_radius.param > 0.0)) pr.fail("param must be positive");
  }
  return g;
}

void parse_algorithms(const Reader& top, ExperimentConfig& cfg,
                      std::vector<std::string>& errors, bool build_schedules) {
  json default_algos = json::array({json{{"name", "primo"}}});
  const json& algo_list =
      top.has("algorithms") ? (*top.j)["algorithms"] : default_algos;
  if (!algo_list.is_array() || algo_list.empty()) {
    errors.push_back("config.algorithms: expected a non-empty array");
    return;
  }
  for (std::size_t i = 0; i < algo_list.size(); ++i) {
    Reader ar{&algo_list[i], "config.algorithms[" + std::to_string(i) + "]",
              &errors};
    if (!algo_list[i].is_object()) {
      ar.fail("expected an object");
      continue;
    }
    AlgorithmConfig algo;
    const std::string name = ar.str("name", "");
    if (name == "primo") algo.kind = AlgorithmKind::primo;
    else if (name == "primo_cal") algo.kind = AlgorithmKind::primo_cal;
    else if (name == "uniform") algo.kind = AlgorithmKind::uniform;
    else if (name == "drop_missing") algo.kind = AlgorithmKind::drop_missing;
    else if (name == "oracle_covariate") algo.kind = AlgorithmKind::oracle_covariate;
    else {
      ar.fail("name must be one of primo, primo_cal, uniform, drop_missing, "
              "oracle_covariate");
      continue;
    }
    algo.tag = ar.str("tag", name);
    if (algo.tag.empty() ||
        algo.tag.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
            "0123456789_.-") != std::string::npos)
      ar.fail("tag must be non-empty and use only letters, digits, '_', '.', '-'");
    for (const auto& other : cfg.algorithms)
      if (other.tag == algo.tag) {
        ar.fail("duplicate tag " + algo.tag);
        break;
      }
    if (build_schedules) algo.gamma = build_gamma(ar, cfg, algo);
    cfg.algorithms.push_back(std::move(algo));
  }
}

}  // namespace

std::string algorithm_kind_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::primo: return "primo";
    case AlgorithmKind::primo_cal: return "primo_cal";
    case AlgorithmKind::uniform: return "uniform";
    case AlgorithmKind::drop_missing: return "drop_missing";
    case AlgorithmKind::oracle_covariate: return "oracle_covariate";
  }
  return "?";
}

ConfigLoadResult parse_config(const nlohmann::json& root) {
  ConfigLoadResult result;
  std::vector<std::string>& errors = result.errors;
  if (!root.is_object()) {
    errors.push_back("config: expected a JSON object");
    return result;
  }
  Reader top{&root, "config", &errors};
  ExperimentConfig& cfg = result.config;

  const std::int64_t seed = top.integer("seed", 1);
  if (seed < 0) top.fail("seed must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(std::max<std::int64_t>(seed, 0));
  cfg.horizon = top.integer("horizon", 16384);
  if (cfg.horizon < 2) top.fail("horizon must be >= 2");
  cfg.replications = static_cast<int>(top.integer("replications", 20));
  if (cfg.replications < 1) top.fail("replications must be >= 1");
  cfg.workers = static_cast<int>(top.integer("workers", 0));
  if (cfg.workers < 0) top.fail("workers must be >= 0");
  cfg.out_dir = top.str("out_dir", "out");
  cfg.elasticity_samples = static_cast<int>(top.integer("elasticity_samples", 100000));
  if (cfg.elasticity_samples < 1000) top.fail("elasticity_samples must be >= 1000");
  cfg.reward_norm_bound = top.number("reward_norm_bound", 10.0);
  if (!(cfg.reward_norm_bound > 0.0)) top.fail("reward_norm_bound must be positive");
  cfg.delta0_slack = top.number("delta0_slack", 1.0);
  if (!(cfg.delta0_slack > 0.0)) top.fail("delta0_slack must be positive");

  const Reader env = top.child("environment");
  EnvironmentSpec& spec = cfg.environment;
  spec.d_x = static_cast<int>(env.integer("d_x", 3));
  if (spec.d_x < 1) env.fail("d_x must be >= 1");
  spec.num_actions = static_cast<int>(env.integer("num_actions", 4));
  if (spec.num_actions < 2) env.fail("num_actions must be >= 2");
  spec.x_max = env.number("x_max", 1.0);
  if (!(spec.x_max > 0.0)) env.fail("x_max must be positive");
  const std::string law = env.str("context_law", "uniform");
  if (law == "uniform") {
    spec.context_law = ContextLaw::uniform_box;
  } else if (law == "gaussian") {
    spec.context_law = ContextLaw::truncated_gaussian;
  } else {
    env.fail("context_law must be uniform or gaussian");
  }
  spec.eta_bound = env.number("eta_bound", 0.0);
  if (spec.eta_bound < 0.0) env.fail("eta_bound must be nonnegative");
  spec.eta_std = env.number("eta_std", spec.eta_bound / 3.0);
  if (spec.eta_std < 0.0) env.fail("eta_std must be nonnegative");
  spec.xi_bound = env.number("xi_bound", 0.1);
  if (spec.xi_bound < 0.0) env.fail("xi_bound must be nonnegative");
  spec.eps0 = env.number("eps0", 0.1);
  if (!(spec.eps0 > 0.0 && spec.eps0 <= 1.0)) env.fail("eps0 must lie in (0, 1]");
  spec.delta0 = env.number("delta0", 0.5);
  if (spec.delta0 < 0.0) env.fail("delta0 must be nonnegative");

  if (!errors.empty()) {  // laws below need sane ranges
    parse_algorithms(top, cfg, errors, false);
    return result;
  }

  const Reader rmap = env.child("reward_map");
  FeatureMap reward_map;
  try {
    reward_map = FeatureMap::reward(
        spec.d_x, spec.num_actions, rmap.j ? rmap.boolean("bias", true) : true,
        rmap.j ? rmap.boolean("x", true) : true,
        rmap.j ? rmap.boolean("z", true) : true,
        rmap.j ? rmap.boolean("zx", true) : true);
  } catch (const std::invalid_argument& e) {
    rmap.fail(e.what());
    return result;
  }
  const Reader cmap = env.child("covariate_map");
  const FeatureMap covariate_map =
      FeatureMap::covariate(spec.d_x, cmap.j ? cmap.boolean("squares", false) : false,
                            cmap.j ? cmap.boolean("pairwise", false) : false);
  const Reader pmap = env.child("propensity_map");
  cfg.propensity_map =
      FeatureMap::propensity(spec.d_x, pmap.j ? pmap.boolean("squares", false) : false,
                             pmap.j ? pmap.boolean("pairwise", false) : false);

  spec.g_star = build_g_star(env, covariate_map, spec, cfg.seed);
  spec.f_star = build_f_star(env, reward_map, spec, cfg.seed, cfg.reward_norm_bound);
  spec.g_tilde = build_g_tilde(env, spec, cfg.seed);
  spec.missingness = build_missingness(env, cfg.propensity_map, spec, cfg.seed);

  if (spec.f_star.weights.size() == reward_map.dim() &&
      spec.f_star.weights.norm() > cfg.reward_norm_bound) {
    errors.push_back("config.environment.f_star: weight norm " +
                     std::to_string(spec.f_star.weights.norm()) +
                     " exceeds reward_norm_bound " +
                     std::to_string(cfg.reward_norm_bound));
  }

  parse_algorithms(top, cfg, errors, true);

  if (!errors.empty()) return result;
  for (auto& problem : validate_environment(spec, cfg.seed))
    errors.push_back("config.environment: " + problem);
  return result;
}

ConfigLoadResult load_config_file(const std::string& path) {
  ConfigLoadResult result;
  std::ifstream in(path);
  if (!in) {
    result.errors.push_back("config: cannot open file " + path);
    return result;
  }
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    result.errors.push_back(std::string("config: JSON parse error: ") + e.what());
    return result;
  }
  return parse_config(root);
}

RunConfig make_run_config(const ExperimentConfig& config, const AlgorithmConfig& algo) {
  RunConfig rc;
  rc.horizon = config.horizon;
  rc.gamma = algo.gamma;
  rc.reward_norm_bound = config.reward_norm_bound;
  rc.calibration.delta0_slack = config.delta0_slack;
  rc.propensity_map = config.propensity_map;
  return rc;
}

}  // namespace primo
