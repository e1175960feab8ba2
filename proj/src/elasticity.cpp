#include "primo/elasticity.hpp"

#include <cmath>
#include <stdexcept>

#include "primo/erm.hpp"

namespace primo {

ElasticityEstimate estimate_elasticity(const EnvironmentSpec& spec,
                                       const FeatureMap& reward_map,
                                       double norm_bound, const LinearModel& g,
                                       int n_samples, RandomStream& stream,
                                       ElasticityMethod method) {
  if (n_samples < 1000)
    throw std::invalid_argument("estimate_elasticity: need n_samples >= 1000");
  if (!(norm_bound > 0.0))
    throw std::invalid_argument("estimate_elasticity: norm bound must be positive");
  const int K = reward_map.num_actions;
  const int bd = reward_map.block_dim();

  // Per-action second moment of the feature shift, accumulated on the
  // action's block (the stacked map is zero elsewhere).
  std::vector<Eigen::MatrixXd> shift(K, Eigen::MatrixXd::Zero(bd, bd));
  for (int i = 0; i < n_samples; ++i) {
    EnvRound round;
    round.context = sample_context(spec, stream);
    const double eta = sample_eta(spec, stream);
    const double z_true = spec.g_star.value(round.context) + eta;
    const double z_model = g.value(round.context);
    for (int a = 0; a < K; ++a) {
      const auto [off, len] = reward_map.block_span(a);
      const Eigen::VectorXd d =
          reward_map.features(round.context, z_true, a).segment(off, len) -
          reward_map.features(round.context, z_model, a).segment(off, len);
      shift[a].selfadjointView<Eigen::Lower>().rankUpdate(d, 1.0);
    }
  }

  ElasticityEstimate est;
  est.method = method;
  est.samples_used = n_samples;
  est.per_action.resize(K);
  for (int a = 0; a < K; ++a) {
    Eigen::MatrixXd M = Eigen::MatrixXd(shift[a].selfadjointView<Eigen::Lower>());
    M /= static_cast<double>(n_samples);
    if (!M.allFinite())
      throw std::runtime_error("estimate_elasticity: non-finite feature shift");
    if (method == ElasticityMethod::closed_form_eigen) {
      est.per_action[a] = norm_bound * norm_bound * power_iteration_lambda_max(M);
    } else {
      // sup over seeded weight draws on the feasibility sphere
      RandomStream theta_stream(stream.seed(), stream.replication(),
                                StreamPurpose::probe);
      double best = 0.0;
      for (int k = 0; k < 512; ++k) {
        Eigen::VectorXd theta(bd);
        for (int j = 0; j < bd; ++j) theta[j] = theta_stream.normal();
        const double nrm = theta.norm();
        if (nrm == 0.0) continue;
        theta *= norm_bound / nrm;
        best = std::max(best, theta.dot(M * theta));
      }
      est.per_action[a] = best;
    }
    est.value = std::max(est.value, est.per_action[a]);
  }
  return est;
}

UpsilonEstimate estimate_upsilon(const EnvironmentSpec& spec, const LinearModel& g,
                                 int n_samples, RandomStream& stream) {
  if (n_samples < 1000)
    throw std::invalid_argument("estimate_upsilon: need n_samples >= 1000");
  const int K = spec.num_actions;
  UpsilonEstimate est;
  est.samples_used = n_samples;
  est.per_action.assign(K, 0.0);
  for (int i = 0; i < n_samples; ++i) {
    EnvRound round;
    round.context = sample_context(spec, stream);
    const double eta = sample_eta(spec, stream);
    const double z_true = spec.g_star.value(round.context) + eta;
    const double z_model = g.value(round.context);
    for (int a = 0; a < K; ++a) {
      const double d = spec.f_star.value(round.context, z_true, a) -
                       spec.f_star.value(round.context, z_model, a);
      est.per_action[a] += d * d;
    }
  }
  est.value = std::numeric_limits<double>::infinity();
  for (int a = 0; a < K; ++a) {
    est.per_action[a] /= static_cast<double>(n_samples);
    est.value = std::min(est.value, est.per_action[a]);
  }
  return est;
}

RateKind rate_kind_from_string(const std::string& name) {
  if (name == "linear") return RateKind::linear;
  if (name == "lipschitz") return RateKind::lipschitz;
  if (name == "convex-lipschitz") return RateKind::convex_lipschitz;
  if (name == "twice-differentiable") return RateKind::twice_differentiable;
  throw std::invalid_argument("unknown rate kind: " + name);
}

std::string rate_kind_to_string(RateKind kind) {
  switch (kind) {
    case RateKind::linear: return "linear";
    case RateKind::lipschitz: return "lipschitz";
    case RateKind::convex_lipschitz: return "convex-lipschitz";
    case RateKind::twice_differentiable: return "twice-differentiable";
  }
  throw std::invalid_argument("unknown rate kind");
}

double radius_rate(const RadiusKind& kind, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("radius_rate: n must be positive");
  if (!(kind.param > 0.0))
    throw std::invalid_argument("radius_rate: class parameter must be positive");
  switch (kind.kind) {
    case RateKind::linear:
      return std::sqrt(kind.param / n);
    case RateKind::lipschitz:
      return std::pow(kind.param / n, 1.0 / 3.0);
    case RateKind::convex_lipschitz:
      return std::pow(kind.param / n, 2.0 / 5.0);
    case RateKind::twice_differentiable:
      return kind.param / std::pow(n, 2.0 / 5.0);
  }
  throw std::invalid_argument("radius_rate: unknown kind");
}

double covering_rate(double delta0, double covering_d, double n) {
  if (!(covering_d > 0.0))
    throw std::invalid_argument("covering_rate: covering dimension must be positive");
  if (!(delta0 >= 0.0)) throw std::invalid_argument("covering_rate: delta0 < 0");
  if (!(n > 0.0)) throw std::invalid_argument("covering_rate: n must be positive");
  return std::pow(delta0, covering_d / (covering_d + 2.0)) *
         std::pow(n, -1.0 / (covering_d + 2.0));
}

}  // namespace primo
