#pragma once

#include <string>
#include <vector>

#include "primo/environment.hpp"

namespace primo {

enum class ElasticityMethod { closed_form_eigen, monte_carlo_sup };

struct ElasticityEstimate {
  double value = 0.0;  // max over actions
  std::vector<double> per_action;
  int samples_used = 0;
  ElasticityMethod method = ElasticityMethod::closed_form_eigen;
};

struct UpsilonEstimate {
  double value = 0.0;  // min over actions
  std::vector<double> per_action;
  int samples_used = 0;
};

// Worst-case squared prediction shift over the norm-ball reward class when
// the true covariate is replaced by g(x). For the linear class this is
// bound^2 * lambda_max of the per-action feature-shift second moment; the
// Monte-Carlo variant takes a sup over seeded feasible weight draws.
ElasticityEstimate estimate_elasticity(
    const EnvironmentSpec& spec, const FeatureMap& reward_map, double norm_bound,
    const LinearModel& g, int n_samples, RandomStream& stream,
    ElasticityMethod method = ElasticityMethod::closed_form_eigen);

// Same squared shift for the true reward function itself (clipped values),
// reported as the minimum over actions.
UpsilonEstimate estimate_upsilon(const EnvironmentSpec& spec, const LinearModel& g,
                                 int n_samples, RandomStream& stream);

// Estimation-rate table for the supported function classes, evaluated at a
// real-valued sample count.
enum class RateKind { linear, lipschitz, convex_lipschitz, twice_differentiable };

struct RadiusKind {
  RateKind kind = RateKind::linear;
  double param = 1.0;  // dimension d, Lipschitz constant L, or curvature c0
};

RateKind rate_kind_from_string(const std::string& name);
std::string rate_kind_to_string(RateKind kind);

double radius_rate(const RadiusKind& kind, double n);

// Covering-based propensity rate q_{delta0, n} = delta0^{d/(d+2)} * n^{-1/(d+2)}.
double covering_rate(double delta0, double covering_d, double n);

}  // namespace primo
