#include "primo/erm.hpp"

#include <cmath>
#include <stdexcept>

#include "primo/random.hpp"

namespace primo {

namespace {

struct Quadratic {
  Eigen::MatrixXd G;  // second moment of features, weight-normalized
  Eigen::VectorXd b;  // feature-target cross moment
  double c = 0.0;     // target second moment

  double objective(const Eigen::VectorXd& w) const {
    return w.dot(G * w) - 2.0 * b.dot(w) + c;
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& w) const {
    return 2.0 * (G * w - b);
  }
};

Quadratic build_quadratic(const RegressionData& data) {
  const std::size_t n = data.features.size();
  if (n == 0) throw std::invalid_argument("fit_erm: empty data");
  if (data.targets.size() != n)
    throw std::invalid_argument("fit_erm: feature/target size mismatch");
  if (!data.weights.empty() && data.weights.size() != n)
    throw std::invalid_argument("fit_erm: feature/weight size mismatch");
  const Eigen::Index m = data.features.front().size();

  Quadratic q;
  q.G = Eigen::MatrixXd::Zero(m, m);
  q.b = Eigen::VectorXd::Zero(m);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd& phi = data.features[i];
    if (phi.size() != m)
      throw std::invalid_argument("fit_erm: inconsistent feature dimension");
    if (!phi.allFinite() || !std::isfinite(data.targets[i]))
      throw std::invalid_argument("fit_erm: non-finite row");
    const double w = data.weights.empty() ? 1.0 : data.weights[i];
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("fit_erm: weights must be nonnegative");
    q.G.selfadjointView<Eigen::Lower>().rankUpdate(phi, w);
    q.b += w * data.targets[i] * phi;
    q.c += w * data.targets[i] * data.targets[i];
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("fit_erm: total weight is zero");
  q.G = Eigen::MatrixXd(q.G.selfadjointView<Eigen::Lower>());
  q.G /= total;
  q.b /= total;
  q.c /= total;
  return q;
}

// Projected gradient on a Euclidean ball of the given radius, constant
// step 1/L.
Eigen::VectorXd projected_gradient_ball(const Quadratic& q, Eigen::VectorXd w,
                                        double radius, const ErmOptions& opt,
                                        FitReport& report) {
  const double lam = power_iteration_lambda_max(q.G);
  const double L = 2.0 * lam * 1.01;
  if (!(L > 0.0)) {  // flat objective, any feasible point is optimal
    report.iterations = 0;
    report.gradient_norm = 0.0;
    report.converged = true;
    return w;
  }
  const auto project = [radius](Eigen::VectorXd v) {
    const double nrm = v.norm();
    if (nrm > radius) v *= radius / nrm;
    return v;
  };
  w = project(std::move(w));
  int it = 0;
  double gmap = 0.0;
  for (; it < opt.max_iterations; ++it) {
    Eigen::VectorXd next = project(w - q.gradient(w) / L);
    gmap = L * (w - next).norm();
    w = std::move(next);
    if (gmap <= opt.gradient_tolerance) {
      ++it;
      break;
    }
  }
  report.iterations = it;
  report.gradient_norm = gmap;
  report.converged = gmap <= opt.gradient_tolerance;
  return w;
}

}  // namespace

double power_iteration_lambda_max(const Eigen::MatrixXd& A, double rel_tolerance,
                                  int max_iterations) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("power_iteration: matrix must be square");
  const Eigen::Index m = A.rows();
  if (m == 0) return 0.0;
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    // fixed irregular start vector, never orthogonal to anything in practice
    v[i] = 1.0 + static_cast<double>(splitmix64(static_cast<std::uint64_t>(i) + 1) >> 11) * 0x1.0p-53;
  }
  v /= v.norm();
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd av = A * v;
    const double nrm = av.norm();
    if (nrm == 0.0) return 0.0;
    v = av / nrm;
    const double next = v.dot(A * v);
    if (std::abs(next - lambda) <= rel_tolerance * std::max(std::abs(next), 1e-300)) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

LinearModel fit_erm_squared(const FeatureMap& map, const RegressionData& data,
                            double norm_bound, std::optional<ClipRange> clip,
                            FitReport* report, const ErmOptions& options) {
  if (!(norm_bound > 0.0))
    throw std::invalid_argument("fit_erm_squared: norm bound must be positive");
  const Quadratic q = build_quadratic(data);
  const Eigen::Index m = q.G.rows();
  if (m != map.dim())
    throw std::invalid_argument("fit_erm_squared: feature dimension does not match map");

  FitReport rep;
  Eigen::MatrixXd ridge = q.G;
  ridge.diagonal().array() += options.ridge_jitter;
  Eigen::VectorXd w = ridge.ldlt().solve(q.b);

  if (w.norm() <= norm_bound * (1.0 + 1e-12)) {
    rep.iterations = 0;
    rep.gradient_norm = q.gradient(w).norm();
    rep.converged = true;
    rep.projection_active = false;
  } else {
    w *= norm_bound / w.norm();
    w = projected_gradient_ball(q, std::move(w), norm_bound, options, rep);
    rep.projection_active = w.norm() >= norm_bound * (1.0 - 1e-9);
  }
  rep.objective = q.objective(w);
  if (report) *report = rep;

  LinearModel model;
  model.map = map;
  model.weights = std::move(w);
  model.norm_bound = norm_bound;
  model.clip = clip;
  return model;
}

LinearModel fit_erm_centered(const LinearModel& center, const RegressionData& data,
                             double delta0, FitReport* report,
                             const ErmOptions& options) {
  if (!(delta0 >= 0.0))
    throw std::invalid_argument("fit_erm_centered: delta0 must be nonnegative");
  const Quadratic q = build_quadratic(data);
  const Eigen::Index m = q.G.rows();
  if (m != center.weights.size())
    throw std::invalid_argument("fit_erm_centered: feature dimension does not match center");

  LinearModel model = center;
  FitReport rep;
  if (delta0 == 0.0) {
    rep.objective = q.objective(center.weights);
    rep.projection_active = true;
    if (report) *report = rep;
    return model;
  }

  // Empirical second-moment matrix of the provided rows (unweighted): the
  // ball ||g - center||_M <= delta0 lives in this norm.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (const auto& phi : data.features)
    M.selfadjointView<Eigen::Lower>().rankUpdate(phi, 1.0);
  M = Eigen::MatrixXd(M.selfadjointView<Eigen::Lower>());
  M /= static_cast<double>(data.features.size());

  Eigen::MatrixXd ridge = q.G;
  ridge.diagonal().array() += options.ridge_jitter;
  Eigen::VectorXd w_free = ridge.ldlt().solve(q.b);

  const double tr = M.trace();
  if (!(tr > 0.0)) {  // all-zero features: the ball constrains nothing
    rep.objective = q.objective(w_free);
    rep.gradient_norm = q.gradient(w_free).norm();
    if (report) *report = rep;
    model.weights = std::move(w_free);
    return model;
  }

  Eigen::MatrixXd Mj = M;
  Mj.diagonal().array() += 1e-12 * tr / static_cast<double>(m);
  Eigen::LLT<Eigen::MatrixXd> llt(Mj);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("fit_erm_centered: second-moment factorization failed");
  const Eigen::MatrixXd R = llt.matrixU();

  Eigen::VectorXd v_free = R * (w_free - center.weights);
  if (v_free.norm() <= delta0 * (1.0 + 1e-12)) {
    rep.objective = q.objective(w_free);
    rep.gradient_norm = q.gradient(w_free).norm();
    if (report) *report = rep;
    model.weights = std::move(w_free);
    return model;
  }

  // Whitened coordinates v = R (w - center): the ball becomes Euclidean.
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
  Quadratic qv;
  qv.G = Rinv.transpose() * q.G * Rinv;
  qv.b = Rinv.transpose() * (q.b - q.G * center.weights);
  qv.c = q.objective(center.weights);

  Eigen::VectorXd v = v_free * (delta0 / v_free.norm());
  v = projected_gradient_ball(qv, std::move(v), delta0, options, rep);
  rep.projection_active = v.norm() >= delta0 * (1.0 - 1e-9);
  model.weights = center.weights + Rinv * v;
  rep.objective = q.objective(model.weights);
  if (report) *report = rep;
  return model;
}

}  // namespace primo
