#include "primo/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primo {

Context sample_context(const EnvironmentSpec& spec, RandomStream& stream) {
  Eigen::VectorXd x(spec.d_x);
  if (spec.context_law == ContextLaw::uniform_box) {
    for (int j = 0; j < spec.d_x; ++j)
      x[j] = stream.uniform(-spec.x_max, spec.x_max);
  } else {
    const double sd = spec.x_max / 2.0;
    for (int j = 0; j < spec.d_x; ++j) {
      double v = sd * stream.normal();
      while (std::abs(v) > spec.x_max) v = sd * stream.normal();
      x[j] = v;
    }
  }
  return Context{std::move(x)};
}

double sample_eta(const EnvironmentSpec& spec, RandomStream& stream) {
  // Three uniform draws are consumed even when the noise is disabled, so
  // paired runs that differ only in tau/omega0 see identical streams.
  const double u1 = stream.uniform(-1.0, 1.0);
  const double u2 = stream.uniform(-1.0, 1.0);
  const double u3 = stream.uniform(-1.0, 1.0);
  if (spec.eta_bound <= 0.0 || spec.eta_std <= 0.0) return 0.0;
  const double eta = spec.eta_std * (u1 + u2 + u3);
  return std::clamp(eta, -spec.eta_bound, spec.eta_bound);
}

EnvRound sample_round(const EnvironmentSpec& spec, EnvStreams& streams) {
  EnvRound round;
  round.context = sample_context(spec, streams.context);
  const double eta = sample_eta(spec, streams.covariate_noise);
  round.z_true = spec.g_star.value(round.context) + eta;

  const MissingnessSpec& miss = spec.missingness;
  switch (miss.mode) {
    case MissingnessMode::mcar:
      round.observed = streams.missingness.bernoulli(miss.mcar_p) ? 1 : 0;
      break;
    case MissingnessMode::mar:
      round.observed =
          streams.missingness.bernoulli(miss.e_star.value(round.context)) ? 1 : 0;
      break;
    case MissingnessMode::mnar: {
      int b = round.z_true <= miss.mnar_threshold ? 1 : 0;
      if (streams.missingness.bernoulli(miss.mnar_flip_prob)) b = 1 - b;
      round.observed = b;
      break;
    }
  }
  round.xi = streams.reward_noise.uniform(-spec.xi_bound, spec.xi_bound);
  return round;
}

double realize_reward(const EnvironmentSpec& spec, const EnvRound& round, int action) {
  if (action < 0 || action >= spec.num_actions)
    throw std::invalid_argument("realize_reward: action out of range");
  return spec.f_star.value(round.context, round.z_true, action) + round.xi;
}

int oracle_action(const EnvironmentSpec& spec, const EnvRound& round) {
  int best = 0;
  double best_value = spec.f_star.value(round.context, round.z_true, 0);
  for (int a = 1; a < spec.num_actions; ++a) {
    const double v = spec.f_star.value(round.context, round.z_true, a);
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

double instant_regret(const EnvironmentSpec& spec, const EnvRound& round,
                      const std::vector<double>& action_probs) {
  if (static_cast<int>(action_probs.size()) != spec.num_actions)
    throw std::invalid_argument("instant_regret: probability vector size mismatch");
  double best = -std::numeric_limits<double>::infinity();
  double played = 0.0;
  for (int a = 0; a < spec.num_actions; ++a) {
    const double v = spec.f_star.value(round.context, round.z_true, a);
    best = std::max(best, v);
    played += action_probs[a] * v;
  }
  return best - played;
}

double monte_carlo_l2_distance(const EnvironmentSpec& spec, const LinearModel& a,
                               const LinearModel& b, int n_samples,
                               RandomStream& stream) {
  if (n_samples < 1)
    throw std::invalid_argument("monte_carlo_l2_distance: need n_samples >= 1");
  double acc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Context ctx = sample_context(spec, stream);
    const Eigen::VectorXd psi = a.map.features(ctx);
    const double d = a.weights.dot(psi) - b.weights.dot(psi);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(n_samples));
}

std::vector<std::string> validate_environment(const EnvironmentSpec& spec,
                                              std::uint64_t seed) {
  std::vector<std::string> problems;
  if (spec.d_x < 1) problems.push_back("d_x must be >= 1");
  if (spec.num_actions < 2) problems.push_back("num_actions must be >= 2");
  if (!(spec.x_max > 0.0)) problems.push_back("x_max must be positive");
  if (spec.eta_bound < 0.0) problems.push_back("eta_bound must be nonnegative");
  if (spec.eta_std < 0.0) problems.push_back("eta_std must be nonnegative");
  if (spec.xi_bound < 0.0) problems.push_back("xi_bound must be nonnegative");
  if (!(spec.eps0 > 0.0 && spec.eps0 <= 1.0))
    problems.push_back("eps0 must lie in (0, 1]");
  if (spec.delta0 < 0.0) problems.push_back("delta0 must be nonnegative");
  if (spec.missingness.mode == MissingnessMode::mcar &&
      !(spec.missingness.mcar_p >= 0.0 && spec.missingness.mcar_p <= 1.0))
    problems.push_back("mcar_p must lie in [0, 1]");
  if (spec.missingness.mode == MissingnessMode::mnar &&
      !(spec.missingness.mnar_flip_prob >= 0.0 &&
        spec.missingness.mnar_flip_prob <= 1.0))
    problems.push_back("mnar_flip_prob must lie in [0, 1]");
  if (!problems.empty()) return problems;

  // Monte-Carlo check that the pre-trained model sits inside the delta0
  // ball, with 3-sigma slack on the squared-distance estimate.
  const int n = 100000;
  RandomStream stream(seed, 0, StreamPurpose::spec_setup);
  double sum_sq = 0.0, sum_quad = 0.0;
  for (int i = 0; i < n; ++i) {
    const Context ctx = sample_context(spec, stream);
    const Eigen::VectorXd psi = spec.g_star.map.features(ctx);
    const double d = spec.g_tilde.weights.dot(psi) - spec.g_star.weights.dot(psi);
    sum_sq += d * d;
    sum_quad += d * d * d * d;
  }
  const double mean_sq = sum_sq / n;
  const double var_sq = std::max(0.0, sum_quad / n - mean_sq * mean_sq);
  const double sigma_sq = std::sqrt(var_sq / n);
  const double dist = std::sqrt(mean_sq);
  const double slack =
      dist > 0.0 ? 3.0 * sigma_sq / (2.0 * dist) : 3.0 * std::sqrt(sigma_sq);
  if (dist > spec.delta0 + slack) {
    problems.push_back("g_tilde lies outside the delta0 ball around g_star (MC distance " +
                       std::to_string(dist) + " > delta0 " +
                       std::to_string(spec.delta0) + ")");
  }
  return problems;
}

}  // namespace primo
