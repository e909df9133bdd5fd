#pragma once

#include <cstdint>

#include "refinery/rational.h"

namespace refinery {

// Deterministic splitmix64 stream; identical across platforms, so frozen
// test expectations stay valid.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  // Uniform integer in [lo, hi].
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return next() & 1; }

  // Rational with numerator in [-num_mag, num_mag] and denominator in
  // [1, den_mag].
  Rat rat(long num_mag, long den_mag) {
    return Rat(range(-num_mag, num_mag), range(1, den_mag));
  }

 private:
  std::uint64_t state_;
};

}  // namespace refinery
