#pragma once

#include <vector>

#include "primo/linear_model.hpp"
#include "primo/random.hpp"

namespace primo {

struct PolicyDistribution {
  std::vector<double> probs;
  int greedy = 0;
};

// Inverse gap weighting over the model's clipped action values:
//   p(a) = 1 / (K + gamma * (best_value - value_a))   for a != greedy,
// with the leftover mass on the greedy action (ties -> lowest index).
PolicyDistribution igw_distribution(const LinearModel& f_hat, double gamma,
                                    const Context& ctx, double z);

// IGW over explicit action values.
PolicyDistribution igw_from_values(const std::vector<double>& values, double gamma);

PolicyDistribution uniform_distribution(int num_actions);

// Inverse-CDF sample in action index order; one uniform draw per call.
int sample_action(const PolicyDistribution& dist, RandomStream& stream);

}  // namespace primo
