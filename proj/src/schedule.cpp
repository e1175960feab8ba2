#include "primo/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace primo {

double log_guard(double a, double r) {
  if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(2.0, std::log2(4.0 * a / r));
}

double gamma_practical(int s, const GammaSchedule& schedule) {
  if (s < 1) throw std::invalid_argument("gamma_practical: s must be >= 1");
  if (schedule.num_actions < 2)
    throw std::invalid_argument("gamma_practical: need >= 2 actions");
  if (!(schedule.c > 0.0)) throw std::invalid_argument("gamma_practical: c must be positive");
  return schedule.c * std::sqrt(static_cast<double>(schedule.num_actions)) *
         std::pow(2.0, static_cast<double>(s) * schedule.rho);
}

namespace {

// Calibration error bound entering the calibrated schedule at epoch s.
double calibration_term(int s, const GammaSchedule& p) {
  const double sd = static_cast<double>(s);
  const double n3 = std::pow(2.0, sd - 3.0);
  const double nq = std::pow(2.0, (sd - 3.0) / 2.0);
  const double q = covering_rate(p.delta0, p.covering_d, nq);
  const double sn = radius_rate(p.propensity_radius, n3);
  const double phi_q = log_guard(1.0 + p.tau, q);
  const double phi_s = log_guard(2.0, sn);
  const double term_bias = std::pow(p.delta0, p.covering_d / (p.covering_d + 1.0)) *
                           std::pow(2.0, -2.0 * (sd - 3.0) / (p.covering_d + 2.0));
  const double term_prop =
      (1.0 + p.tau) * std::sqrt(2.0 * sd * sd * std::log(phi_q / p.confidence)) / nq;
  const double term_log = std::log(2.0 * sd * sd * phi_s / p.confidence) / nq;
  return (p.lipschitz_z / p.eps0) * (term_bias + term_prop + sn + term_log) +
         p.lipschitz_z * p.omega0;
}

}  // namespace

double gamma_theory(int s, const GammaSchedule& p) {
  if (s < 2) throw std::invalid_argument("gamma_theory: s must be >= 2");
  if (p.num_actions < 2) throw std::invalid_argument("gamma_theory: need >= 2 actions");
  if (!(p.confidence > 0.0 && p.confidence < 1.0))
    throw std::invalid_argument("gamma_theory: confidence must lie in (0, 1)");
  if (!(p.upsilon > 0.0))
    throw std::invalid_argument("gamma_theory: upsilon must be positive");

  const double sd = static_cast<double>(s);
  const double n = std::pow(2.0, sd - 2.0);
  const double r = radius_rate(p.reward_radius, n);
  const double m4 = std::max(4.0, p.xi_bound);
  const double phi = log_guard(p.xi_bound, r);
  const double log_main = std::log(4.0 * sd * sd * phi / p.confidence);

  const double model_term =
      p.calibrated ? calibration_term(s, p) : std::sqrt(p.elasticity);

  const double gamma_big = (m4 + 1.0) * r + model_term +
                           4.0 * m4 * std::sqrt(2.0 * log_main / n) +
                           log_main / (r * n) +
                           (4.0 / std::sqrt(p.upsilon)) *
                               std::sqrt(std::log(8.0 * sd * sd / p.confidence) / n);
  if (!std::isfinite(gamma_big) || !(gamma_big > 0.0))
    throw std::runtime_error("gamma_theory: non-finite bound constant");
  return std::sqrt(static_cast<double>(p.num_actions)) / (2.0 * gamma_big);
}

double gamma_value(int s, const GammaSchedule& schedule) {
  return schedule.mode == GammaMode::theory ? gamma_theory(s, schedule)
                                            : gamma_practical(s, schedule);
}

}  // namespace primo
