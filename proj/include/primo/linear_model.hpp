#pragma once

#include <Eigen/Dense>
#include <optional>

#include "primo/feature_map.hpp"

namespace primo {

struct ClipRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Linear predictor over a fixed feature map, optionally clipped into a
// range so the model class stays bounded.
struct LinearModel {
  FeatureMap map;
  Eigen::VectorXd weights;
  double norm_bound = 1.0;
  std::optional<ClipRange> clip;

  double predict_features(const Eigen::VectorXd& features) const;
  double value(const Context& ctx, double z, int action) const;  // reward maps
  double value(const Context& ctx) const;  // covariate/propensity maps
};

double predict(const LinearModel& model, const Eigen::VectorXd& features);

// Root-mean-square prediction gap over a probe set of feature vectors
// (pre-clip: measures the linear functions themselves).
double empirical_l2_distance(const LinearModel& a, const LinearModel& b,
                             const std::vector<Eigen::VectorXd>& probe);

// Solver diagnostics.
struct FitReport {
  double objective = 0.0;      // weighted mean squared error at the solution
  int iterations = 0;          // 0 for the closed-form path
  double gradient_norm = 0.0;  // projected-gradient norm at exit
  bool converged = true;
  bool projection_active = false;
};

}  // namespace primo
