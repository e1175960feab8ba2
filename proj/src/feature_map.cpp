#include "primo/feature_map.hpp"

#include <cmath>
#include <stdexcept>

namespace primo {

FeatureMap FeatureMap::reward(int d_x, int num_actions, bool with_bias,
                              bool with_x, bool with_z, bool with_zx) {
  if (d_x < 1) throw std::invalid_argument("FeatureMap: d_x must be >= 1");
  if (num_actions < 2) throw std::invalid_argument("FeatureMap: need >= 2 actions");
  if (!with_bias && !with_x && !with_z && !with_zx)
    throw std::invalid_argument("FeatureMap: empty reward block");
  FeatureMap m;
  m.kind = FeatureMapKind::reward;
  m.d_x = d_x;
  m.num_actions = num_actions;
  m.with_bias = with_bias;
  m.with_x = with_x;
  m.with_z = with_z;
  m.with_zx = with_zx;
  return m;
}

FeatureMap FeatureMap::covariate(int d_x, bool with_squares, bool with_pairwise) {
  if (d_x < 1) throw std::invalid_argument("FeatureMap: d_x must be >= 1");
  FeatureMap m;
  m.kind = FeatureMapKind::covariate;
  m.d_x = d_x;
  m.with_squares = with_squares;
  m.with_pairwise = with_pairwise;
  return m;
}

FeatureMap FeatureMap::propensity(int d_x, bool with_squares, bool with_pairwise) {
  FeatureMap m = covariate(d_x, with_squares, with_pairwise);
  m.kind = FeatureMapKind::propensity;
  return m;
}

int FeatureMap::block_dim() const {
  if (kind == FeatureMapKind::reward) {
    int d = 0;
    if (with_bias) d += 1;
    if (with_x) d += d_x;
    if (with_z) d += 1;
    if (with_zx) d += d_x;
    return d;
  }
  int d = 1 + d_x;
  if (with_squares) d += d_x;
  if (with_pairwise) d += d_x * (d_x - 1) / 2;
  return d;
}

int FeatureMap::dim() const {
  return kind == FeatureMapKind::reward ? num_actions * block_dim() : block_dim();
}

std::pair<int, int> FeatureMap::block_span(int action) const {
  if (kind != FeatureMapKind::reward)
    throw std::invalid_argument("block_span: reward maps only");
  if (action < 0 || action >= num_actions)
    throw std::invalid_argument("block_span: action out of range");
  const int b = block_dim();
  return {action * b, b};
}

Eigen::VectorXd FeatureMap::features(const Context& ctx, double z, int action) const {
  if (kind != FeatureMapKind::reward)
    throw std::invalid_argument("features(x, z, a): reward maps only");
  if (ctx.x.size() != d_x)
    throw std::invalid_argument("features: context dimension mismatch");
  if (!ctx.x.allFinite() || !std::isfinite(z))
    throw std::invalid_argument("features: non-finite input");
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(dim());
  auto [off, len] = block_span(action);
  (void)len;
  int i = off;
  if (with_bias) phi[i++] = 1.0;
  if (with_x)
    for (int j = 0; j < d_x; ++j) phi[i++] = ctx.x[j];
  if (with_z) phi[i++] = z;
  if (with_zx)
    for (int j = 0; j < d_x; ++j) phi[i++] = z * ctx.x[j];
  return phi;
}

Eigen::VectorXd FeatureMap::features(const Context& ctx) const {
  if (kind == FeatureMapKind::reward)
    throw std::invalid_argument("features(x): covariate/propensity maps only");
  if (ctx.x.size() != d_x)
    throw std::invalid_argument("features: context dimension mismatch");
  if (!ctx.x.allFinite())
    throw std::invalid_argument("features: non-finite input");
  Eigen::VectorXd psi(dim());
  int i = 0;
  psi[i++] = 1.0;
  for (int j = 0; j < d_x; ++j) psi[i++] = ctx.x[j];
  if (with_squares)
    for (int j = 0; j < d_x; ++j) psi[i++] = ctx.x[j] * ctx.x[j];
  if (with_pairwise)
    for (int j = 0; j < d_x; ++j)
      for (int k = j + 1; k < d_x; ++k) psi[i++] = ctx.x[j] * ctx.x[k];
  return psi;
}

double FeatureMap::z_gradient_sup(double x_max) const {
  if (kind != FeatureMapKind::reward) return 0.0;
  double s = 0.0;
  if (with_z) s += 1.0;
  if (with_zx) s += static_cast<double>(d_x) * x_max * x_max;
  return std::sqrt(s);
}

double lipschitz_z_bound(const FeatureMap& map, double norm_bound, double x_max) {
  if (norm_bound <= 0.0)
    throw std::invalid_argument("lipschitz_z_bound: norm bound must be positive");
  return norm_bound * map.z_gradient_sup(x_max);
}

}  // namespace primo
