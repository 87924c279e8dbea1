#pragma once

#include <string>

#include "pta/power_affine.hpp"

namespace pta {

/// Row-stochastic irreducible transition matrix.
class MarkovChain {
 public:
  static MarkovChain make(NonnegMatrix q);

  const NonnegMatrix& q() const noexcept { return q_; }
  std::size_t size() const noexcept { return q_.size(); }

  static constexpr double row_sum_tol = 1e-12;

 private:
  explicit MarkovChain(NonnegMatrix q) : q_(std::move(q)) {}
  NonnegMatrix q_;
};

// Builders. Each maps model parameters onto a PowerAffineSystem whose
// y-domain fixed point (or x-domain, for wealth-consumption) is the model
// object.

/// b(z) = {1 + [beta(z) R(z)^{1-gamma} (Q b)(z)]^{1/gamma}}^gamma:
/// A = diag(beta R^{1-gamma}) Q, b = 1, s = gamma.
PowerAffineSystem build_toda(const Vector& beta, const Vector& gross_return, double gamma,
                             const MarkovChain& chain);

/// v = ((1-beta) c^rho + beta (Q v^alpha)^{rho/alpha})^{1/rho}, solved for
/// w = v^alpha: A = beta^s Q, b = (1-beta) c^rho, s = alpha / rho.
PowerAffineSystem build_epstein_zin(double beta, double rho, double alpha, const Vector& c,
                                    const MarkovChain& chain);

/// beta^s Q w^s = (w - 1)^s, i.e. w = (A w^s)^{1/s} + 1 with A = beta^s Q.
PowerAffineSystem build_wealth_consumption(double beta, double s, const NonnegMatrix& q);

/// k = savings {theta + (1-theta) (A k)^rho}^{1/rho} in y-form:
/// A~ = savings (1-theta)^{1/rho} A, b = savings^rho theta, s = 1/rho.
PowerAffineSystem build_ces(double savings, double theta, double rho,
                            const NonnegMatrix& technology);

struct AppSolution {
  std::string model;
  PowerAffineSystem system;
  SolveReport report;
  std::string output_name;
  Vector primary_output;
  /// Sup-norm of the model-equation residual returned by the matching
  /// *_equation_residual function.
  double model_residual = 0.0;
  /// Extra named output (the Toda consumption rule c(z)/w); empty otherwise.
  std::string secondary_name;
  Vector secondary_output;
};

/// Toda: primary output b(z) = y*, secondary c(z)/w = b(z)^{-1/gamma}.
AppSolution solve_toda(const Vector& beta, const Vector& gross_return, double gamma,
                       const MarkovChain& chain, const SolveOptions& opts = {});
/// Epstein-Zin: lifetime utility v = (y*)^{1/alpha}.
AppSolution solve_epstein_zin(double beta, double rho, double alpha, const Vector& c,
                              const MarkovChain& chain, const SolveOptions& opts = {});
/// Wealth-consumption ratio w = x*.
AppSolution solve_wealth_consumption(double beta, double s, const NonnegMatrix& q,
                                     const SolveOptions& opts = {});
/// CES steady state k = y*.
AppSolution solve_ces(double savings, double theta, double rho, const NonnegMatrix& technology,
                      const SolveOptions& opts = {});

// Defining equations in model coordinates, written out directly rather than
// through the canonical system. Each returns (lhs - rhs) / |rhs| per state.
Vector toda_equation_residual(const Vector& coeff, const Vector& beta, const Vector& gross_return,
                              double gamma, const MarkovChain& chain);
Vector epstein_zin_equation_residual(const Vector& v, double beta, double rho, double alpha,
                                     const Vector& c, const MarkovChain& chain);
Vector wealth_consumption_equation_residual(const Vector& w, double beta, double s,
                                            const NonnegMatrix& q);
Vector ces_equation_residual(const Vector& k, double savings, double theta, double rho,
                             const NonnegMatrix& technology);

}  // namespace pta
