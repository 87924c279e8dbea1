#pragma once

#include <cstdint>
#include <random>

#include "pta/nonneg_linalg.hpp"

namespace pta {

/// Deterministic random source. Draws are built from raw mt19937_64 output so
/// that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for sub-task `index` of a run seeded with `seed`.
  static Rng split(std::uint64_t seed, std::uint64_t index);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double log_uniform(double lo, double hi);
  std::size_t index(std::size_t n);  // [0, n)

  /// Componentwise log-uniform over [lo, hi].
  Vector log_uniform_vector(std::size_t n, double lo = 1e-3, double hi = 1e3);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pta
