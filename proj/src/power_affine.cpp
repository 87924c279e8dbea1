#include "pta/power_affine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pta {

namespace {

void require_size(const PowerAffineSystem& sys, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != sys.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector has size " + std::to_string(v.size()) +
                                                  ", system has size " +
                                                  std::to_string(sys.size()));
  }
}

void require_interior(const PowerAffineSystem& sys, const Vector& v, const char* what) {
  require_size(sys, v);
  if (!is_strictly_positive(v)) {
    throw Error(ErrorKind::DomainError, std::string(what) + " must be strictly positive");
  }
}

Vector pow_each(const Vector& v, double p) {
  return v.unaryExpr([p](double t) { return std::pow(t, p); });
}

// ((A y)^{1/s} + b)^s without the interior check. For s > 0 this is defined on
// the whole cone, since 0^{1/s} = 0.
Vector y_map_on_cone(const PowerAffineSystem& sys, const Vector& y) {
  const double s = sys.s();
  Vector ay = sys.a().matrix() * y;
  if (s < 0.0 && (ay.array() <= 0.0).any()) {
    throw Error(ErrorKind::DomainError, "A y has a zero component and s < 0");
  }
  return pow_each(pow_each(ay, 1.0 / s) + sys.b(), s);
}

double max_relative_gap(const Vector& next, const Vector& y) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double gap = std::abs(next(i) - y(i));
    if (gap == 0.0) continue;
    worst = std::max(worst, y(i) > 0.0 ? gap / y(i) : std::numeric_limits<double>::infinity());
  }
  return worst;
}

// Largest |d/dt t^{1/s}| over [lo, hi]; the derivative is monotone in t, so
// the maximum sits at an endpoint.
double inverse_power_lipschitz(double s, double lo, double hi) {
  const double p = 1.0 / s;
  const auto deriv = [p](double t) { return std::abs(p) * std::pow(t, p - 1.0); };
  return std::max(deriv(lo), deriv(hi));
}

}  // namespace

PowerAffineSystem PowerAffineSystem::make(NonnegMatrix a, Vector b, double s) {
  if (static_cast<std::size_t>(b.size()) != a.size()) {
    throw Error(ErrorKind::DimensionMismatch, "b has size " + std::to_string(b.size()) +
                                                  ", A is " + std::to_string(a.size()) + "x" +
                                                  std::to_string(a.size()));
  }
  if (!std::isfinite(s)) throw Error(ErrorKind::InvalidParameter, "exponent s is not finite");
  if (s == 0.0) throw Error(ErrorKind::ZeroExponent, "exponent s must be nonzero");
  if (!is_irreducible(a)) throw Error(ErrorKind::NotIrreducible, "A is not irreducible");
  if (!is_strictly_positive(b)) {
    throw Error(ErrorKind::NonPositiveB, "b must be finite and strictly positive");
  }
  return PowerAffineSystem(std::move(a), std::move(b), s);
}

Vector x_map(const PowerAffineSystem& sys, const Vector& x) {
  require_interior(sys, x, "x");
  const double s = sys.s();
  Vector ax = sys.a().matrix() * pow_each(x, s);
  if ((ax.array() <= 0.0).any()) {
    throw Error(ErrorKind::DomainError, "A x^s has a zero component");
  }
  return pow_each(ax, 1.0 / s) + sys.b();
}

Vector y_map(const PowerAffineSystem& sys, const Vector& y) {
  require_interior(sys, y, "y");
  return y_map_on_cone(sys, y);
}

Vector to_y(const PowerAffineSystem& sys, const Vector& x) {
  require_interior(sys, x, "x");
  return pow_each(x, sys.s());
}

Vector to_x(const PowerAffineSystem& sys, const Vector& y) {
  require_interior(sys, y, "y");
  return pow_each(y, 1.0 / sys.s());
}

double residual_x(const PowerAffineSystem& sys, const Vector& x) {
  return sup_norm(x_map(sys, x) - x);
}

double residual_y(const PowerAffineSystem& sys, const Vector& y) {
  return sup_norm(y_map(sys, y) - y);
}

double relative_residual_y(const PowerAffineSystem& sys, const Vector& y) {
  return max_relative_gap(y_map(sys, y), y);
}

SolvabilityCertificate certificate_from(double r, double s) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::InvalidParameter, "spectral radius must be finite and positive");
  }
  SolvabilityCertificate c;
  c.r = r;
  c.s = s;
  c.criterion = s * std::log(r);
  c.r_pow_s = std::exp(c.criterion);
  c.margin = std::abs(c.criterion);
  c.boundary_warning = std::abs(c.r_pow_s - 1.0) <= SolvabilityCertificate::boundary_band;
  c.verdict = (c.criterion < 0.0 && !c.boundary_warning) ? Verdict::UniqueSolution
                                                         : Verdict::NoSolution;
  return c;
}

SolvabilityCertificate certify(const PowerAffineSystem& sys, const PerronOptions& opts) {
  return certificate_from(perron(sys.a(), opts).r, sys.s());
}

Bracket bracket(const PowerAffineSystem& sys, const Vector& y0, const BracketOptions& opts) {
  return bracket(sys, y0, perron(sys.a()).e, opts);
}

Bracket bracket(const PowerAffineSystem& sys, const Vector& y0, const Vector& e,
                const BracketOptions& opts) {
  require_interior(sys, y0, "bracket centre");
  require_interior(sys, e, "Perron vector");

  const Vector ratio = y0.cwiseQuotient(e);
  double c_lo = std::min(1.0, ratio.minCoeff());
  double c_hi = std::max(1.0, ratio.maxCoeff());
  // The quotients are rounded; step outward until containment holds exactly.
  while (((c_lo * e).array() > y0.array()).any()) c_lo = std::nextafter(c_lo, 0.0);
  while (((c_hi * e).array() < y0.array()).any()) {
    c_hi = std::nextafter(c_hi, std::numeric_limits<double>::infinity());
  }

  const auto improves = [&](double c) {
    const Vector ce = c * e;
    const Vector g = y_map(sys, ce);
    return g.allFinite() && (g.array() >= (1.0 + opts.eps) * ce.array()).all();
  };
  const auto dominates = [&](double c) {
    const Vector ce = c * e;
    const Vector g = y_map(sys, ce);
    return g.allFinite() && (g.array() <= (1.0 - opts.eps) * ce.array()).all();
  };

  int steps = 0;
  while (!improves(c_lo)) {
    if (++steps > opts.max_steps) {
      throw Error(ErrorKind::BracketSearchFailed, "no strict sub-solution found along e");
    }
    c_lo *= 0.5;
  }
  steps = 0;
  while (!dominates(c_hi)) {
    if (++steps > opts.max_steps) {
      throw Error(ErrorKind::BracketSearchFailed, "no strict super-solution found along e");
    }
    c_hi *= 2.0;
  }
  return Bracket{PositiveVector::strictly_positive(c_lo * e),
                 PositiveVector::strictly_positive(c_hi * e), c_lo, c_hi};
}

NoSolutionError::NoSolutionError(SolvabilityCertificate cert)
    : Error(ErrorKind::NoSolution,
            "no strictly positive solution: r(A)^s = " + std::to_string(cert.r_pow_s) +
                (cert.boundary_warning ? " (within the boundary band of 1)" : " >= 1")),
      cert_(cert) {}

MaxIterationsError::MaxIterationsError(std::size_t iterations, double last)
    : Error(ErrorKind::MaxIterationsExceeded,
            "no convergence after " + std::to_string(iterations) +
                " iterations, last relative residual " + std::to_string(last)),
      iterations_(iterations),
      last_(last) {}

SolveReport solve(const PowerAffineSystem& sys, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tol must be positive");
  if (opts.max_iters < 1) throw Error(ErrorKind::InvalidParameter, "max_iters must be >= 1");

  PerronData pd = perron(sys.a());
  const SolvabilityCertificate cert = certificate_from(pd.r, sys.s());
  if (cert.verdict != Verdict::UniqueSolution) throw NoSolutionError(cert);

  const double s = sys.s();
  Vector y;
  Vector centre;
  switch (opts.start) {
    case StartRule::BracketMid:
      centre = pd.e;
      break;
    case StartRule::Ones:
      y = Vector::Ones(static_cast<Eigen::Index>(sys.size()));
      centre = y;
      break;
    case StartRule::Perron:
      y = pd.e;
      centre = y;
      break;
    case StartRule::Given: {
      if (!opts.start_vector) {
        throw Error(ErrorKind::InvalidParameter, "start rule Given needs a start vector");
      }
      y = *opts.start_vector;
      require_size(sys, y);
      if (!is_nonneg(y) || (y.array() == 0.0).all()) {
        throw Error(ErrorKind::DomainError, "start must be nonzero and nonnegative");
      }
      if (is_strictly_positive(y)) {
        centre = y;
      } else if (s > 0.0) {
        // G y >= b^s >> 0, so the first iterate is interior.
        centre = y_map_on_cone(sys, y);
      } else {
        throw Error(ErrorKind::DomainError,
                    "a start on the boundary of the cone requires s > 0");
      }
      break;
    }
  }

  Bracket br = bracket(sys, centre, pd.e);
  if (opts.start == StartRule::BracketMid) {
    y = br.p.values().cwiseProduct(br.q.values()).cwiseSqrt();
  }

  std::vector<double> history;
  std::size_t k = 0;
  Vector next;
  double rel = 0.0;
  for (;; ++k) {
    next = y_map_on_cone(sys, y);
    history.push_back(sup_norm(next - y));
    rel = max_relative_gap(next, y);
    if (rel <= opts.tol) break;
    if (k == opts.max_iters) throw MaxIterationsError(k, rel);
    y = std::move(next);
  }

  Vector x = to_x(sys, y);
  SolveReport rep{PositiveVector::strictly_positive(y),
                  PositiveVector::strictly_positive(x),
                  k,
                  std::move(history),
                  std::move(br),
                  cert,
                  std::move(pd)};
  rep.residual_y = rep.residual_history.back();
  rep.relative_residual_y = rel;
  rep.residual_x = residual_x(sys, x);

  // |G(y)_i - y_i| <= tol * y_i, pushed through t -> t^{1/s} on the range of
  // y, plus a few ulps for evaluating x_map itself.
  const double lo = y.minCoeff() * (1.0 - opts.tol);
  const double hi = y.maxCoeff() * (1.0 + opts.tol);
  const double eps = std::numeric_limits<double>::epsilon();
  rep.x_tolerance = inverse_power_lipschitz(s, lo, hi) * opts.tol * y.maxCoeff() +
                    32.0 * eps * (1.0 + std::abs(1.0 / s)) * (1.0 + sup_norm(x));
  return rep;
}

}  // namespace pta
