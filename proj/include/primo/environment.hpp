#pragma once

#include <string>
#include <vector>

#include "primo/core.hpp"
#include "primo/linear_model.hpp"
#include "primo/random.hpp"

namespace primo {

enum class ContextLaw { uniform_box, truncated_gaussian };

enum class MissingnessMode { mcar, mar, mnar };

struct MissingnessSpec {
  MissingnessMode mode = MissingnessMode::mcar;
  double mcar_p = 0.5;        // P(observed) under MCAR
  LinearModel e_star;         // P(observed | x) under MAR, clipped [eps0, 1]
  double mnar_threshold = 0;  // observed iff z* <= threshold, before flips
  double mnar_flip_prob = 0.1;
};

// Ground truth data-generating process. Rewards always come from the true
// covariate; the pre-trained model g_tilde is what the learner gets instead.
struct EnvironmentSpec {
  int d_x = 3;
  int num_actions = 4;
  double x_max = 1.0;
  ContextLaw context_law = ContextLaw::uniform_box;

  LinearModel f_star;   // reward map, clipped [0, 1]
  LinearModel g_star;   // covariate map
  LinearModel g_tilde;  // covariate map, within delta0 of g_star

  double eta_bound = 0.0;  // tau: |eta| <= tau
  double eta_std = 0.0;    // omega0: sqrt(E eta^2) <= omega0
  double xi_bound = 0.1;   // lambda: reward noise uniform on [-lambda, lambda]

  MissingnessSpec missingness;
  double eps0 = 0.1;    // propensity floor
  double delta0 = 0.5;  // pre-trained model accuracy radius
};

// One environment draw. xi is the reward-noise slot for the round.
struct EnvRound {
  Context context;
  double z_true = 0.0;
  int observed = 0;
  double xi = 0.0;
};

// Per-purpose streams so a config change to one noise source (or an
// algorithm consuming extra draws elsewhere) never shifts the others.
struct EnvStreams {
  RandomStream context;
  RandomStream covariate_noise;
  RandomStream missingness;
  RandomStream reward_noise;

  EnvStreams(std::uint64_t seed, std::uint64_t replication)
      : context(seed, replication, StreamPurpose::context),
        covariate_noise(seed, replication, StreamPurpose::covariate_noise),
        missingness(seed, replication, StreamPurpose::missingness),
        reward_noise(seed, replication, StreamPurpose::reward_noise) {}
};

Context sample_context(const EnvironmentSpec& spec, RandomStream& stream);

// Covariate noise: sum of three uniforms scaled to standard deviation
// omega0, clamped into [-tau, tau]. Symmetric, so zero-mean.
double sample_eta(const EnvironmentSpec& spec, RandomStream& stream);

EnvRound sample_round(const EnvironmentSpec& spec, EnvStreams& streams);

double realize_reward(const EnvironmentSpec& spec, const EnvRound& round, int action);

// Best action under the true reward function and true covariate;
// ties resolve to the lowest index.
int oracle_action(const EnvironmentSpec& spec, const EnvRound& round);

// Expected instantaneous regret of a probability vector over actions.
double instant_regret(const EnvironmentSpec& spec, const EnvRound& round,
                      const std::vector<double>& action_probs);

// Monte-Carlo L2 distance between two covariate-map models under the
// context law.
double monte_carlo_l2_distance(const EnvironmentSpec& spec, const LinearModel& a,
                               const LinearModel& b, int n_samples,
                               RandomStream& stream);

// Construction-time checks (pre-trained model inside the delta0 ball with
// 3-sigma Monte-Carlo slack, bounds sane). Returns human-readable problems.
std::vector<std::string> validate_environment(const EnvironmentSpec& spec,
                                              std::uint64_t seed);

}  // namespace primo
