#include "primo/random.hpp"

#include <cmath>
#include <stdexcept>

namespace primo {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replication,
                         StreamPurpose purpose) {
  // splitmix64 is a bijection, so for a fixed seed distinct
  // (replication, purpose) pairs map to distinct keys.
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ splitmix64(replication));
  k = splitmix64(k ^ static_cast<std::uint64_t>(purpose));
  return k;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t replication,
                           StreamPurpose purpose)
    : seed_(seed),
      replication_(replication),
      purpose_(purpose),
      engine_(stream_key(seed, replication, purpose)) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::uint64_t RandomStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

bool RandomStream::bernoulli(double p) { return uniform01() < p; }

double RandomStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

RandomStream derive_stream(std::uint64_t seed, std::uint64_t replication,
                           StreamPurpose purpose) {
  return RandomStream(seed, replication, purpose);
}

}  // namespace primo
