#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pta/power_affine.hpp"

namespace pta {

/// Outcome of a numerical property check. A probe passes when its worst
/// observed violation is within tolerance (strictly below it for
/// fixed_point_inequality, whose property is a strict inequality).
struct ProbeReport {
  std::string probe_name;
  std::size_t trials = 0;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool inconclusive = false;
  std::optional<std::string> witness;
};

/// Self-map of the strictly positive cone; lets the probes run against
/// operators other than a validated system (test fixtures, variants).
using ConeMap = std::function<Vector(const Vector&)>;

enum class Shape { Concave, Convex };

constexpr double kProbeTolerance = 1e-12;

/// Samples y <= z in the interior and records max_i (G(y)_i - G(z)_i).
ProbeReport probe_order_preserving(const PowerAffineSystem& sys, std::size_t trials,
                                   std::uint64_t seed);
ProbeReport probe_order_preserving(const ConeMap& map, std::size_t dim, std::size_t trials,
                                   std::uint64_t seed);

/// Concavity for s < 0 or s >= 1, convexity for 0 < s <= 1 (both at s = 1).
ProbeReport probe_shape(const PowerAffineSystem& sys, std::size_t trials, std::uint64_t seed);
ProbeReport probe_shape(const ConeMap& map, std::size_t dim, const std::vector<Shape>& shapes,
                        std::size_t trials, std::uint64_t seed);

/// Shapes the theory assigns to the y-map for exponent s.
std::vector<Shape> expected_shapes(double s);

struct NonexistenceOptions {
  std::size_t iters = 10000;
  // Floor on max_i |G(y)_i - y_i| / y_i. Measured relative to y so that orbits
  // sliding toward 0 are not mistaken for convergence.
  double residual_floor = 1e-6;
  double range_lo = 1e-12;
  double range_hi = 1e12;
};

/// For a system certified NoSolution, runs the y-iteration from each start and
/// looks for a divergence signature: iterates leaving [range_lo, range_hi], or
/// a relative residual that never drops below the floor. Starts showing
/// neither are counted as inconclusive and fail the probe.
ProbeReport probe_nonexistence(const PowerAffineSystem& sys, const std::vector<Vector>& starts,
                               const NonexistenceOptions& opts = {});

/// s > 0: y* >> A y*. s < 0: y* << A y*. worst_violation is the signed slack
/// (-min gap for s > 0, max gap for s < 0); passes when negative.
ProbeReport probe_fixed_point_inequality(const PowerAffineSystem& sys, const SolveReport& rep);

/// Checks y_map(p) >> p and y_map(q) << q by direct evaluation. worst_violation
/// is the largest of max_i (p - G p)_i and max_i (G q - q)_i; passes when
/// negative.
ProbeReport probe_bracket(const PowerAffineSystem& sys, const Bracket& br);

/// min, max of strictly positive pairs and nonneg + strictly positive stay in
/// the interior of the cone.
ProbeReport probe_cone_lattice(std::size_t dim, std::size_t trials, std::uint64_t seed);

}  // namespace pta
