#include "primo/calibration.hpp"

#include <numeric>

namespace primo {

std::pair<Dataset, Dataset> cross_fit_split(const Dataset& data, RandomStream& stream) {
  const std::size_t n = data.rows.size();
  if (n < 2) throw InsufficientDataError("cross_fit_split: need at least 2 rows");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = stream.uniform_int(i + 1);
    std::swap(order[i], order[j]);
  }
  const std::size_t first_size = (n + 1) / 2;
  Dataset first, second;
  first.epoch_index = data.epoch_index;
  second.epoch_index = data.epoch_index;
  first.rows.reserve(first_size);
  second.rows.reserve(n - first_size);
  for (std::size_t i = 0; i < n; ++i)
    (i < first_size ? first : second).rows.push_back(data.rows[order[i]]);
  return {std::move(first), std::move(second)};
}

LinearModel fit_propensity(const Dataset& data, const FeatureMap& map, double eps0,
                           FitReport* report, const CalibrationOptions& options) {
  if (data.rows.empty())
    throw InsufficientDataError("fit_propensity: empty dataset");
  if (!(eps0 > 0.0 && eps0 <= 1.0))
    throw std::invalid_argument("fit_propensity: eps0 must lie in (0, 1]");
  RegressionData reg;
  reg.features.reserve(data.rows.size());
  reg.targets.reserve(data.rows.size());
  for (const auto& row : data.rows) {
    reg.features.push_back(map.features(row.context));
    reg.targets.push_back(static_cast<double>(row.observed));
  }
  return fit_erm_squared(map, reg, options.propensity_bound,
                         ClipRange{eps0, 1.0}, report);
}

LinearModel fit_calibrated_g(const Dataset& data, const LinearModel& e_hat,
                             const LinearModel& g_tilde, double delta0,
                             FitReport* report, int* rows_used,
                             const CalibrationOptions& options) {
  if (delta0 == 0.0) {
    if (rows_used) *rows_used = 0;
    if (report) *report = FitReport{};
    return g_tilde;
  }
  RegressionData reg;
  for (const auto& row : data.rows) {
    if (!row.observed) continue;
    reg.features.push_back(g_tilde.map.features(row.context));
    reg.targets.push_back(row.covariate_used);
    reg.weights.push_back(1.0 / e_hat.value(row.context));
  }
  if (reg.features.empty())
    throw InsufficientDataError("fit_calibrated_g: no observed rows");
  if (rows_used) *rows_used = static_cast<int>(reg.features.size());
  return fit_erm_centered(g_tilde, reg, delta0 * options.delta0_slack, report);
}

CalibrationResult calibrate(const Dataset& data, const LinearModel& g_tilde,
                            const FeatureMap& propensity_map, double eps0,
                            double delta0, RandomStream& stream,
                            const CalibrationOptions& options) {
  if (static_cast<int>(data.rows.size()) < options.min_rows)
    throw InsufficientDataError("calibrate: dataset smaller than min_rows");
  auto [first, second] = cross_fit_split(data, stream);
  CalibrationResult result;
  result.split_first = static_cast<int>(first.rows.size());
  result.split_second = static_cast<int>(second.rows.size());
  result.e_hat =
      fit_propensity(first, propensity_map, eps0, &result.propensity_report, options);
  result.g_hat = fit_calibrated_g(second, result.e_hat, g_tilde, delta0,
                                  &result.g_report, &result.observed_rows_used,
                                  options);
  return result;
}

}  // namespace primo
