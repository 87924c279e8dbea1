#include "pta/applications.hpp"

#include <cmath>
#include <string>

namespace pta {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidParameter, what);
}

void require_positive(const Vector& v, std::size_t n, const std::string& name) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, name + " has size " + std::to_string(v.size()) +
                                                  ", expected " + std::to_string(n));
  }
  require(is_strictly_positive(v), name + " must be finite and strictly positive");
}

bool finite_nonzero(double x) { return std::isfinite(x) && x != 0.0; }
bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

Vector pow_each(const Vector& v, double p) {
  return v.unaryExpr([p](double t) { return std::pow(t, p); });
}

Vector relative_gap(const Vector& lhs, const Vector& rhs) {
  return (lhs - rhs).cwiseQuotient(rhs.cwiseAbs());
}

}  // namespace

MarkovChain MarkovChain::make(NonnegMatrix q) {
  const Vector sums = q.matrix().rowwise().sum();
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    require(std::abs(sums(i) - 1.0) <= row_sum_tol,
            "transition matrix row " + std::to_string(i) + " sums to " +
                std::to_string(sums(i)) + ", not 1");
  }
  if (!is_irreducible(q)) {
    throw Error(ErrorKind::NotIrreducible, "Markov chain is not irreducible");
  }
  return MarkovChain(std::move(q));
}

PowerAffineSystem build_toda(const Vector& beta, const Vector& gross_return, double gamma,
                             const MarkovChain& chain) {
  const std::size_t n = chain.size();
  require_positive(beta, n, "beta");
  require_positive(gross_return, n, "R");
  require(finite_positive(gamma), "gamma must be positive");
  const Vector weights = beta.cwiseProduct(pow_each(gross_return, 1.0 - gamma));
  return make_system(chain.q().row_scaled(weights),
                     Vector::Ones(static_cast<Eigen::Index>(n)), gamma);
}

PowerAffineSystem build_epstein_zin(double beta, double rho, double alpha, const Vector& c,
                                    const MarkovChain& chain) {
  require(finite_positive(beta), "beta must be positive");
  require(beta < 1.0, "beta must satisfy beta < 1; for beta >= 1 no strictly positive "
                      "utility exists and (1 - beta) c^rho is not strictly positive");
  require(finite_nonzero(rho), "rho must be nonzero");
  require(finite_nonzero(alpha), "alpha must be nonzero");
  require_positive(c, chain.size(), "c");
  const double s = alpha / rho;
  return make_system(chain.q().scaled(std::pow(beta, s)), (1.0 - beta) * pow_each(c, rho), s);
}

PowerAffineSystem build_wealth_consumption(double beta, double s, const NonnegMatrix& q) {
  require(finite_positive(beta), "beta must be positive");
  require(finite_nonzero(s), "s must be nonzero");
  return make_system(q.scaled(std::pow(beta, s)), Vector::Ones(static_cast<Eigen::Index>(q.size())),
                     s);
}

PowerAffineSystem build_ces(double savings, double theta, double rho,
                            const NonnegMatrix& technology) {
  require(finite_positive(savings), "savings rate must be positive");
  require(std::isfinite(theta) && theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
  require(finite_nonzero(rho), "rho must be nonzero");
  const double scale = savings * std::pow(1.0 - theta, 1.0 / rho);
  const Vector b =
      Vector::Constant(static_cast<Eigen::Index>(technology.size()), std::pow(savings, rho) * theta);
  return make_system(technology.scaled(scale), b, 1.0 / rho);
}

Vector toda_equation_residual(const Vector& coeff, const Vector& beta, const Vector& gross_return,
                              double gamma, const MarkovChain& chain) {
  const Vector discounted =
      beta.cwiseProduct(pow_each(gross_return, 1.0 - gamma)).cwiseProduct(apply(chain.q(), coeff));
  const Vector rhs = pow_each(Vector::Ones(coeff.size()) + pow_each(discounted, 1.0 / gamma), gamma);
  return relative_gap(coeff, rhs);
}

Vector epstein_zin_equation_residual(const Vector& v, double beta, double rho, double alpha,
                                     const Vector& c, const MarkovChain& chain) {
  const Vector certainty_equiv = pow_each(apply(chain.q(), pow_each(v, alpha)), 1.0 / alpha);
  const Vector rhs =
      pow_each((1.0 - beta) * pow_each(c, rho) + beta * pow_each(certainty_equiv, rho), 1.0 / rho);
  return relative_gap(v, rhs);
}

Vector wealth_consumption_equation_residual(const Vector& w, double beta, double s,
                                            const NonnegMatrix& q) {
  const Vector lhs = std::pow(beta, s) * apply(q, pow_each(w, s));
  const Vector rhs = pow_each(w - Vector::Ones(w.size()), s);
  return relative_gap(lhs, rhs);
}

Vector ces_equation_residual(const Vector& k, double savings, double theta, double rho,
                             const NonnegMatrix& technology) {
  const Vector inner =
      Vector::Constant(k.size(), theta) + (1.0 - theta) * pow_each(apply(technology, k), rho);
  const Vector rhs = savings * pow_each(inner, 1.0 / rho);
  return relative_gap(k, rhs);
}

AppSolution solve_toda(const Vector& beta, const Vector& gross_return, double gamma,
                       const MarkovChain& chain, const SolveOptions& opts) {
  PowerAffineSystem sys = build_toda(beta, gross_return, gamma, chain);
  SolveReport rep = solve(sys, opts);
  Vector coeff = rep.y_star.values();
  const double res = sup_norm(toda_equation_residual(coeff, beta, gross_return, gamma, chain));
  Vector rule = pow_each(coeff, -1.0 / gamma);
  return AppSolution{"toda",        std::move(sys), std::move(rep), "coefficient",
                     std::move(coeff), res,         "consumption_rate", std::move(rule)};
}

AppSolution solve_epstein_zin(double beta, double rho, double alpha, const Vector& c,
                              const MarkovChain& chain, const SolveOptions& opts) {
  PowerAffineSystem sys = build_epstein_zin(beta, rho, alpha, c, chain);
  SolveReport rep = solve(sys, opts);
  Vector v = pow_each(rep.y_star.values(), 1.0 / alpha);
  const double res = sup_norm(epstein_zin_equation_residual(v, beta, rho, alpha, c, chain));
  return AppSolution{"ez", std::move(sys), std::move(rep), "utility", std::move(v), res, {}, {}};
}

AppSolution solve_wealth_consumption(double beta, double s, const NonnegMatrix& q,
                                     const SolveOptions& opts) {
  PowerAffineSystem sys = build_wealth_consumption(beta, s, q);
  SolveReport rep = solve(sys, opts);
  Vector w = rep.x_star.values();
  const double res = sup_norm(wealth_consumption_equation_residual(w, beta, s, q));
  return AppSolution{"wc", std::move(sys), std::move(rep), "wealth_consumption_ratio",
                     std::move(w), res, {}, {}};
}

AppSolution solve_ces(double savings, double theta, double rho, const NonnegMatrix& technology,
                      const SolveOptions& opts) {
  PowerAffineSystem sys = build_ces(savings, theta, rho, technology);
  SolveReport rep = solve(sys, opts);
  Vector k = rep.y_star.values();
  const double res = sup_norm(ces_equation_residual(k, savings, theta, rho, technology));
  return AppSolution{"ces", std::move(sys), std::move(rep), "capital_labor_ratio",
                     std::move(k), res, {}, {}};
}

}  // namespace pta
