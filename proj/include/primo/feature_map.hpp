#pragma once

#include <Eigen/Dense>

#include "primo/core.hpp"

namespace primo {

enum class FeatureMapKind { reward, covariate, propensity };

// Fixed feature map. The reward map stacks one block per action
// (one-hot block structure): block = selected subset of [1, x, z, z*x].
// Covariate and propensity maps are [1, x] plus optional fixed lifts
// (squares, pairwise products).
struct FeatureMap {
  FeatureMapKind kind = FeatureMapKind::covariate;
  int d_x = 1;
  int num_actions = 0;  // reward maps only

  // reward block composition
  bool with_bias = true;
  bool with_x = true;
  bool with_z = true;
  bool with_zx = true;

  // covariate / propensity lifts
  bool with_squares = false;
  bool with_pairwise = false;

  static FeatureMap reward(int d_x, int num_actions, bool with_bias = true,
                           bool with_x = true, bool with_z = true,
                           bool with_zx = true);
  static FeatureMap covariate(int d_x, bool with_squares = false,
                              bool with_pairwise = false);
  static FeatureMap propensity(int d_x, bool with_squares = false,
                               bool with_pairwise = false);

  int block_dim() const;  // reward maps: per-action block width
  int dim() const;

  // Span of action a's block inside the stacked reward feature vector.
  std::pair<int, int> block_span(int action) const;

  Eigen::VectorXd features(const Context& ctx, double z, int action) const;
  Eigen::VectorXd features(const Context& ctx) const;  // covariate/propensity

  // sup_x ||d features / d z||_2 over the box [-x_max, x_max]^d_x
  // (reward maps; zero when the map ignores z).
  double z_gradient_sup(double x_max) const;
};

// Largest z-slope any model in the norm-ball class can realize:
// bound * sup_x ||d phi / d z||.
double lipschitz_z_bound(const FeatureMap& map, double norm_bound, double x_max);

}  // namespace primo
