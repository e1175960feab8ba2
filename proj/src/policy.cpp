#include "primo/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace primo {

PolicyDistribution igw_from_values(const std::vector<double>& values, double gamma) {
  const int K = static_cast<int>(values.size());
  if (K < 2) throw std::invalid_argument("igw: need at least 2 actions");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("igw: gamma must be finite and nonnegative");
  for (const double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("igw: non-finite action value");

  int greedy = 0;
  for (int a = 1; a < K; ++a)
    if (values[a] > values[greedy]) greedy = a;

  PolicyDistribution dist;
  dist.greedy = greedy;
  dist.probs.assign(K, 0.0);
  double rest = 0.0;
  for (int a = 0; a < K; ++a) {
    if (a == greedy) continue;
    dist.probs[a] = 1.0 / (K + gamma * (values[greedy] - values[a]));
    rest += dist.probs[a];
  }
  dist.probs[greedy] = 1.0 - rest;
  return dist;
}

PolicyDistribution igw_distribution(const LinearModel& f_hat, double gamma,
                                    const Context& ctx, double z) {
  const int K = f_hat.map.num_actions;
  std::vector<double> values(K);
  for (int a = 0; a < K; ++a) values[a] = f_hat.value(ctx, z, a);
  return igw_from_values(values, gamma);
}

PolicyDistribution uniform_distribution(int num_actions) {
  if (num_actions < 2) throw std::invalid_argument("uniform: need at least 2 actions");
  PolicyDistribution dist;
  dist.greedy = 0;
  dist.probs.assign(num_actions, 1.0 / num_actions);
  return dist;
}

int sample_action(const PolicyDistribution& dist, RandomStream& stream) {
  const double u = stream.uniform01();
  double acc = 0.0;
  const int K = static_cast<int>(dist.probs.size());
  for (int a = 0; a < K; ++a) {
    acc += dist.probs[a];
    if (u < acc) return a;
  }
  return K - 1;
}

}  // namespace primo
