#pragma once

#include "primo/elasticity.hpp"

namespace primo {

enum class GammaMode { practical, theory };

// Exploration schedule for epoch-based inverse gap weighting. Theory mode
// evaluates the full confidence-bound constants; practical mode is the
// usual root-KN growth with tunable constants.
struct GammaSchedule {
  GammaMode mode = GammaMode::practical;
  int num_actions = 2;

  // practical: gamma_s = c * sqrt(K) * 2^(s * rho)
  double c = 1.0;
  double rho = 0.5;

  // theory, shared
  double xi_bound = 0.1;       // lambda
  double confidence = 0.1;     // delta
  double upsilon = 1.0;        // reward-sensitivity lower bound
  RadiusKind reward_radius{RateKind::linear, 1.0};

  // theory, plug-in variant
  double elasticity = 0.0;

  // theory, calibrated variant
  bool calibrated = false;
  double eps0 = 0.1;
  double tau = 0.0;       // covariate-noise bound
  double omega0 = 0.0;    // covariate-noise scale
  double delta0 = 0.5;
  double lipschitz_z = 1.0;
  double covering_d = 1.0;
  RadiusKind propensity_radius{RateKind::linear, 1.0};
};

// log2(4a / r), floored at 2.
double log_guard(double a, double r);

double gamma_practical(int s, const GammaSchedule& schedule);

// Bound-constant schedule; calibrated variant swaps the model-elasticity
// term for the per-epoch calibration error bound. Requires s >= 2 and
// throws on non-finite intermediates.
double gamma_theory(int s, const GammaSchedule& schedule);

double gamma_value(int s, const GammaSchedule& schedule);

}  // namespace primo
