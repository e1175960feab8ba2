#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "primo/linear_model.hpp"

namespace primo {

// Rows for a weighted least-squares fit. Empty weights mean all ones.
// Objectives are normalized by total weight, so duplicating a row and
// doubling its weight are equivalent.
struct RegressionData {
  std::vector<Eigen::VectorXd> features;
  std::vector<double> targets;
  std::vector<double> weights;
};

struct ErmOptions {
  double ridge_jitter = 1e-10;
  double gradient_tolerance = 1e-9;
  int max_iterations = 100000;
};

// Largest eigenvalue of a symmetric PSD matrix by power iteration with a
// fixed deterministic start vector.
double power_iteration_lambda_max(const Eigen::MatrixXd& A,
                                  double rel_tolerance = 1e-8,
                                  int max_iterations = 100000);

// min over ||w||_2 <= norm_bound of the weighted mean squared error.
// Closed-form normal equations (ridge jitter) when the bound is slack,
// projected gradient with constant step 1/L otherwise.
LinearModel fit_erm_squared(const FeatureMap& map, const RegressionData& data,
                            double norm_bound,
                            std::optional<ClipRange> clip = std::nullopt,
                            FitReport* report = nullptr,
                            const ErmOptions& options = {});

// Same objective over the ball { g : ||g - center||_M <= delta0 } where
// ||.||_M is the empirical feature second-moment norm on the provided rows.
// delta0 = 0 returns the center unchanged.
LinearModel fit_erm_centered(const LinearModel& center, const RegressionData& data,
                             double delta0, FitReport* report = nullptr,
                             const ErmOptions& options = {});

}  // namespace primo
