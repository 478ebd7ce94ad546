#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace anm {

/// Thin wrapper around std::mt19937_64 with platform-independent mappings
/// from raw engine output to the few distributions the engines need.
/// The standard <random> distributions are implementation-defined, which
/// would break bit-identical replay across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream derived from a run seed and a path of coordinates such as
  /// (generation, slot). Distinct paths give statistically independent streams.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). n must be positive.
  std::size_t below(std::size_t n);

  /// Uniform integer on [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::size_t>(hi - lo) + 1));
  }

  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  /// Uniform on [-1, 1] with zero excluded.
  double nonzero_weight();

private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t value);

}  // namespace anm
