#include "primo/core.hpp"

namespace primo {

EpochSchedule EpochSchedule::geometric(std::int64_t T) {
  if (T < 2) throw std::invalid_argument("EpochSchedule: horizon must be >= 2");
  EpochSchedule sched;
  sched.boundaries.push_back(0);
  std::int64_t b = 1;
  sched.boundaries.push_back(b);
  while (b < T) {
    b *= 2;
    sched.boundaries.push_back(b);
  }
  return sched;
}

std::vector<std::pair<std::int64_t, std::int64_t>> split_into_epochs(
    std::int64_t T, const EpochSchedule& schedule) {
  if (T < 2) throw std::invalid_argument("split_into_epochs: horizon must be >= 2");
  const auto& b = schedule.boundaries;
  if (b.size() < 2 || b.front() != 0)
    throw std::invalid_argument("split_into_epochs: schedule must start at 0");
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i] <= b[i - 1])
      throw std::invalid_argument("split_into_epochs: boundaries must be strictly increasing");
  if (b.back() < T)
    throw std::invalid_argument("split_into_epochs: schedule does not cover horizon");

  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  for (std::size_t s = 1; s < b.size(); ++s) {
    const std::int64_t lo = b[s - 1];
    const std::int64_t hi = std::min(b[s], T);
    if (lo >= T) break;
    ranges.emplace_back(lo, hi);
    if (hi == T) break;
  }
  return ranges;
}

std::vector<std::pair<std::int64_t, std::int64_t>> split_into_epochs(std::int64_t T) {
  if (T < 2) throw std::invalid_argument("split_into_epochs: horizon must be >= 2");
  return split_into_epochs(T, EpochSchedule::geometric(T));
}

}  // namespace primo
