#include "primo/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primo {

double LinearModel::predict_features(const Eigen::VectorXd& features) const {
  if (features.size() != weights.size())
    throw std::invalid_argument("predict: feature dimension mismatch");
  double v = weights.dot(features);
  if (clip) v = std::clamp(v, clip->lo, clip->hi);
  return v;
}

double LinearModel::value(const Context& ctx, double z, int action) const {
  return predict_features(map.features(ctx, z, action));
}

double LinearModel::value(const Context& ctx) const {
  return predict_features(map.features(ctx));
}

double predict(const LinearModel& model, const Eigen::VectorXd& features) {
  return model.predict_features(features);
}

double empirical_l2_distance(const LinearModel& a, const LinearModel& b,
                             const std::vector<Eigen::VectorXd>& probe) {
  if (probe.empty())
    throw std::invalid_argument("empirical_l2_distance: empty probe set");
  double acc = 0.0;
  for (const auto& phi : probe) {
    const double d = a.weights.dot(phi) - b.weights.dot(phi);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(probe.size()));
}

}  // namespace primo
