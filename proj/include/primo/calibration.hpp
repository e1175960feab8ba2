#pragma once

#include "primo/core.hpp"
#include "primo/erm.hpp"
#include "primo/random.hpp"

namespace primo {

struct CalibrationOptions {
  double delta0_slack = 1.0;        // multiplies delta0 for the fitting ball
  double propensity_bound = 100.0;  // norm bound of the propensity class
  int min_rows = 4;                 // below this the split is meaningless
};

struct CalibrationResult {
  LinearModel e_hat;  // propensity, clipped [eps0, 1]
  LinearModel g_hat;  // calibrated covariate model
  int split_first = 0;
  int split_second = 0;
  int observed_rows_used = 0;  // observed rows in the fitting half
  FitReport propensity_report;
  FitReport g_report;
};

// Seeded uniform permutation split into halves of sizes ceil(N/2) and
// floor(N/2); the first half gets the extra row when N is odd.
std::pair<Dataset, Dataset> cross_fit_split(const Dataset& data, RandomStream& stream);

// Least-squares fit of the observed indicator on the propensity features
// (linear probability model), clipped into [eps0, 1].
LinearModel fit_propensity(const Dataset& data, const FeatureMap& map, double eps0,
                           FitReport* report = nullptr,
                           const CalibrationOptions& options = {});

// Inverse-propensity-weighted regression of the observed covariate on the
// covariate features over the ball ||g - g_tilde|| <= delta0 (empirical
// norm on the observed rows). Unobserved rows are dropped.
LinearModel fit_calibrated_g(const Dataset& data, const LinearModel& e_hat,
                             const LinearModel& g_tilde, double delta0,
                             FitReport* report = nullptr, int* rows_used = nullptr,
                             const CalibrationOptions& options = {});

// Split, fit the propensity on one half, calibrate on the other.
CalibrationResult calibrate(const Dataset& data, const LinearModel& g_tilde,
                            const FeatureMap& propensity_map, double eps0,
                            double delta0, RandomStream& stream,
                            const CalibrationOptions& options = {});

}  // namespace primo
