#pragma once

#include <cstdint>
#include <random>

namespace primo {

// Purposes keep draw sequences aligned across paired runs: an algorithm that
// consumes extra shuffle draws never perturbs the environment's draws, and a
// config change to one noise source never shifts the others.
enum class StreamPurpose : std::uint64_t {
  context = 1,
  covariate_noise = 2,
  missingness = 3,
  reward_noise = 4,
  policy = 5,
  shuffle = 6,
  model_init = 7,
  spec_setup = 8,
  elasticity = 9,
  probe = 10,
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic stream identified by (seed, replication, purpose). The
// mapping (replication, purpose) -> engine seed is injective for a fixed
// master seed, and the draw sequence is identical on every platform (raw
// mt19937_64 output only; no std distributions).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t replication, StreamPurpose purpose);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t replication() const { return replication_; }
  StreamPurpose purpose() const { return purpose_; }

  std::uint64_t next_u64();
  double uniform01();                  // [0, 1)
  double uniform(double lo, double hi);
  std::uint64_t uniform_int(std::uint64_t n);  // {0, ..., n-1}
  bool bernoulli(double p);
  double normal();                     // standard normal, Box-Muller

 private:
  std::uint64_t seed_;
  std::uint64_t replication_;
  StreamPurpose purpose_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

RandomStream derive_stream(std::uint64_t seed, std::uint64_t replication,
                           StreamPurpose purpose);

}  // namespace primo
