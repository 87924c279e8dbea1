#include "pta/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pta/sampling.hpp"

namespace pta {

namespace {

std::string describe(const char* what, std::size_t trial, Eigen::Index component,
                     double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at trial " << trial << ", component " << component << ": " << value;
  return os.str();
}

ConeMap system_map(const PowerAffineSystem& sys) {
  return [&sys](const Vector& y) { return y_map(sys, y); };
}

// y + d with d >= 0; about a quarter of the components are left unchanged.
Vector ordered_partner(Rng& rng, const Vector& y) {
  Vector z = y;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (rng.uniform() < 0.25) continue;
    z(i) += y(i) * rng.log_uniform(1e-6, 1e1);
  }
  return z;
}

}  // namespace

ProbeReport probe_order_preserving(const PowerAffineSystem& sys, std::size_t trials,
                                   std::uint64_t seed) {
  return probe_order_preserving(system_map(sys), sys.size(), trials, seed);
}

ProbeReport probe_order_preserving(const ConeMap& map, std::size_t dim, std::size_t trials,
                                   std::uint64_t seed) {
  ProbeReport rep{"order_preserving", trials, 0.0, kProbeTolerance, false, false, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::split(seed, t);
    const Vector y = rng.log_uniform_vector(dim);
    const Vector z = ordered_partner(rng, y);
    const Vector diff = map(y) - map(z);
    Eigen::Index i = 0;
    const double v = diff.maxCoeff(&i);
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.witness = describe("G(y) - G(z)", t, i, v);
    }
  }
  rep.passed = rep.worst_violation <= rep.tolerance;
  return rep;
}

std::vector<Shape> expected_shapes(double s) {
  std::vector<Shape> out;
  if (s < 0.0 || s >= 1.0) out.push_back(Shape::Concave);
  if (s > 0.0 && s <= 1.0) out.push_back(Shape::Convex);
  return out;
}

ProbeReport probe_shape(const PowerAffineSystem& sys, std::size_t trials, std::uint64_t seed) {
  return probe_shape(system_map(sys), sys.size(), expected_shapes(sys.s()), trials, seed);
}

ProbeReport probe_shape(const ConeMap& map, std::size_t dim, const std::vector<Shape>& shapes,
                        std::size_t trials, std::uint64_t seed) {
  ProbeReport rep{"shape", trials, 0.0, kProbeTolerance, false, false, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::split(seed, t);
    const Vector y = rng.log_uniform_vector(dim);
    const Vector z = rng.log_uniform_vector(dim);
    const double lambda = rng.uniform();
    const Vector g_mix = map(lambda * y + (1.0 - lambda) * z);
    const Vector chord = lambda * map(y) + (1.0 - lambda) * map(z);
    for (Shape shape : shapes) {
      const Vector gap = shape == Shape::Concave ? Vector(chord - g_mix) : Vector(g_mix - chord);
      Eigen::Index i = 0;
      const double v = gap.maxCoeff(&i);
      if (v > rep.worst_violation) {
        rep.worst_violation = v;
        rep.witness = describe(shape == Shape::Concave ? "concavity gap" : "convexity gap", t,
                               i, v);
      }
    }
  }
  rep.passed = rep.worst_violation <= rep.tolerance;
  return rep;
}

ProbeReport probe_nonexistence(const PowerAffineSystem& sys, const std::vector<Vector>& starts,
                               const NonexistenceOptions& opts) {
  if (certify(sys).verdict != Verdict::NoSolution) {
    throw Error(ErrorKind::InvalidParameter,
                "nonexistence probe needs a system certified NoSolution");
  }
  ProbeReport rep{"nonexistence", starts.size(), 0.0, 0.0, false, false, {}};
  std::size_t inconclusive = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    Vector y = starts[k];
    double min_rel = std::numeric_limits<double>::infinity();
    bool left_range = false;
    for (std::size_t it = 0; it < opts.iters; ++it) {
      if (!y.allFinite() || y.minCoeff() < opts.range_lo || y.maxCoeff() > opts.range_hi) {
        left_range = true;
        break;
      }
      const Vector next = y_map(sys, y);
      const double rel = (next - y).cwiseAbs().cwiseQuotient(y).maxCoeff();
      min_rel = std::min(min_rel, rel);
      y = next;
    }
    if (left_range || min_rel >= opts.residual_floor) continue;
    ++inconclusive;
    const double shortfall = opts.residual_floor - min_rel;
    if (shortfall > rep.worst_violation) {
      rep.worst_violation = shortfall;
      std::ostringstream os;
      os.precision(17);
      os << "start " << k << ": relative residual reached " << min_rel
         << " without leaving [" << opts.range_lo << ", " << opts.range_hi << "]";
      rep.witness = os.str();
    }
  }
  rep.inconclusive = inconclusive > 0;
  rep.passed = !rep.inconclusive;
  return rep;
}

ProbeReport probe_fixed_point_inequality(const PowerAffineSystem& sys, const SolveReport& rep) {
  const Vector& y = rep.y_star.values();
  const Vector gap = y - apply(sys.a(), y);
  ProbeReport out{"fixed_point_inequality", 1, 0.0, 0.0, false, false, {}};
  Eigen::Index i = 0;
  if (sys.s() > 0.0) {
    out.worst_violation = -gap.minCoeff(&i);
  } else {
    out.worst_violation = gap.maxCoeff(&i);
  }
  out.passed = out.worst_violation < 0.0;
  if (!out.passed) out.witness = describe("y - A y", 0, i, gap(i));
  return out;
}

ProbeReport probe_bracket(const PowerAffineSystem& sys, const Bracket& br) {
  const Vector& p = br.p.values();
  const Vector& q = br.q.values();
  const double sub = (p - y_map(sys, p)).maxCoeff();
  const double super = (y_map(sys, q) - q).maxCoeff();
  ProbeReport out{"bracket", 1, std::max(sub, super), 0.0, false, false, {}};
  out.passed = out.worst_violation < 0.0;
  if (!out.passed) {
    out.witness = sub >= super ? "G(p) >> p fails" : "G(q) << q fails";
  }
  return out;
}

ProbeReport probe_cone_lattice(std::size_t dim, std::size_t trials, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorKind::InvalidParameter, "dimension must be >= 1");
  ProbeReport rep{"cone_lattice", trials, 0.0, 0.0, false, false, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::split(seed, t);
    const Vector x = rng.log_uniform_vector(dim);
    const Vector y = rng.log_uniform_vector(dim);
    Vector nonneg = rng.log_uniform_vector(dim);
    for (auto& v : nonneg) {
      if (rng.uniform() < 0.5) v = 0.0;
    }
    const bool ok = is_strictly_positive(x.cwiseMin(y)) && is_strictly_positive(x.cwiseMax(y)) &&
                    is_strictly_positive(nonneg + y);
    if (!ok) {
      rep.worst_violation = 1.0;
      rep.witness = "trial " + std::to_string(t) + " left the interior";
    }
  }
  rep.passed = rep.worst_violation <= rep.tolerance;
  return rep;
}

}  // namespace pta
