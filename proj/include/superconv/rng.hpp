#pragma once

#include <cstdint>

namespace superconv {

// SplitMix64: explicit-seed 64-bit generator used for every random draw in the
// library. The recurrence is fixed, so a given seed produces the same stream on
// every platform, and split() derives statistically independent child streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Child stream derived from the current state and a stream index.
  SplitMix64 split(std::uint64_t index) const {
    SplitMix64 child(state_ ^ (0x9e3779b97f4a7c15ULL * (index + 2)));
    child.next();
    return child;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in {lo, ..., hi}. Intended for tiny ranges; the modulo
  /// bias is below 2^-60 for the ranges used here.
  long uniform_int(long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(next() % span);
  }

 private:
  std::uint64_t state_;
};

}  // namespace superconv
