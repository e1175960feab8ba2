#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace primo {

// Raised when an operation needs more rows than the caller supplied
// (e.g. calibration on a dataset too small to split).
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Observable context x.
struct Context {
  Eigen::VectorXd x;
};

// One logged interaction. covariate_used is the value the learner consumed:
// the true covariate when observed, an imputation otherwise.
struct RoundTuple {
  Context context;
  int observed = 0;  // 0/1
  double covariate_used = 0.0;
  int action = 0;
  double reward = 0.0;
};

// Ordered collection of round tuples, tagged with the epoch it was
// collected in. Insertion order is preserved.
struct Dataset {
  std::vector<RoundTuple> rows;
  int epoch_index = 0;
};

// Epoch boundaries beta_0 < beta_1 < ... with beta_0 = 0. Epoch s covers
// rounds (beta_{s-1}, beta_s].
struct EpochSchedule {
  std::vector<std::int64_t> boundaries;

  // Default doubling rule beta_s = 2^s, extended to cover horizon T.
  static EpochSchedule geometric(std::int64_t T);
};

// Half-open-below ranges (lo, hi] partitioning [1, T].
std::vector<std::pair<std::int64_t, std::int64_t>> split_into_epochs(
    std::int64_t T, const EpochSchedule& schedule);

std::vector<std::pair<std::int64_t, std::int64_t>> split_into_epochs(
    std::int64_t T);

}  // namespace primo
