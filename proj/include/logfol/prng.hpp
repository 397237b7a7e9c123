#pragma once

#include "logfol/rational.hpp"

#include <complex>
#include <cstdint>
#include <random>

namespace logfol {

/// Deterministic 64-bit PRNG. mt19937_64 output is fully specified by the
/// standard; the integer/real mappings below avoid std distributions, whose
/// output is not portable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform integer in [lo, hi], inclusive.
  int int_in(int lo, int hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  /// Nonzero integer in [-bound, bound].
  int nonzero_int(int bound) {
    int v = 0;
    while (v == 0) v = int_in(-bound, bound);
    return v;
  }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric_unit() { return 2.0 * unit() - 1.0; }

  std::complex<double> complex_in_box() { return {symmetric_unit(), symmetric_unit()}; }

 private:
  std::mt19937_64 eng_;
};

/// Splitmix64 finalizer; used to derive independent stream seeds from
/// (base seed, task index) so parallel work is schedule-independent.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace logfol
