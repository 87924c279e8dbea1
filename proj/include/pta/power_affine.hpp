#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pta/nonneg_linalg.hpp"

namespace pta {

/// The system x = (A x^s)^{1/s} + b, with powers taken componentwise, together
/// with its conjugate form y = ((A y)^{1/s} + b)^s under y = x^s.
///
/// Construction enforces the standing hypotheses: A irreducible, b strictly
/// positive and s nonzero. Instances are immutable.
class PowerAffineSystem {
 public:
  static PowerAffineSystem make(NonnegMatrix a, Vector b, double s);

  const NonnegMatrix& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  double s() const noexcept { return s_; }
  std::size_t size() const noexcept { return a_.size(); }

 private:
  PowerAffineSystem(NonnegMatrix a, Vector b, double s)
      : a_(std::move(a)), b_(std::move(b)), s_(s) {}

  NonnegMatrix a_;
  Vector b_;
  double s_;
};

inline PowerAffineSystem make_system(NonnegMatrix a, Vector b, double s) {
  return PowerAffineSystem::make(std::move(a), std::move(b), s);
}

/// x -> (A x^s)^{1/s} + b. Requires x >> 0.
Vector x_map(const PowerAffineSystem& sys, const Vector& x);
/// y -> ((A y)^{1/s} + b)^s. Requires y >> 0.
Vector y_map(const PowerAffineSystem& sys, const Vector& y);

/// Componentwise x^s and y^{1/s}; both require strictly positive arguments.
Vector to_y(const PowerAffineSystem& sys, const Vector& x);
Vector to_x(const PowerAffineSystem& sys, const Vector& y);

/// ||x_map(x) - x||_inf and ||y_map(y) - y||_inf.
double residual_x(const PowerAffineSystem& sys, const Vector& x);
double residual_y(const PowerAffineSystem& sys, const Vector& y);
/// max_i |y_map(y)_i - y_i| / y_i, the stopping measure used by solve().
double relative_residual_y(const PowerAffineSystem& sys, const Vector& y);

enum class Verdict { UniqueSolution, NoSolution };

constexpr const char* to_string(Verdict v) {
  return v == Verdict::UniqueSolution ? "UniqueSolution" : "NoSolution";
}

struct SolvabilityCertificate {
  double r = 0.0;
  double s = 0.0;
  double criterion = 0.0;  // s * ln r
  double r_pow_s = 0.0;
  double margin = 0.0;     // |s * ln r|
  Verdict verdict = Verdict::NoSolution;
  // Set when r^s is within boundary_band of 1. Such systems are reported as
  // NoSolution because they cannot be told apart from r^s = 1.
  bool boundary_warning = false;

  static constexpr double boundary_band = 1e-9;
};

/// Verdict from the spectral radius alone, evaluated through the sign of
/// s * ln r rather than r^s itself.
SolvabilityCertificate certificate_from(double r, double s);
SolvabilityCertificate certify(const PowerAffineSystem& sys, const PerronOptions& opts = {});

struct Bracket {
  PositiveVector p;
  PositiveVector q;
  double c_lo = 0.0;
  double c_hi = 0.0;
};

struct BracketOptions {
  double eps = 1e-10;
  int max_steps = 200;
};

/// Strict sub- and super-solutions p = c_lo e <= y0 <= c_hi e = q along the
/// Perron vector e, with y_map(p) >> p and y_map(q) << q.
Bracket bracket(const PowerAffineSystem& sys, const Vector& y0, const BracketOptions& opts = {});
Bracket bracket(const PowerAffineSystem& sys, const Vector& y0, const Vector& perron_vector,
                const BracketOptions& opts = {});

enum class StartRule { BracketMid, Ones, Perron, Given };

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iters = 100000;
  StartRule start = StartRule::BracketMid;
  /// Used with StartRule::Given. May lie on the boundary of the cone when
  /// s > 0, since one step then lands in the interior.
  std::optional<Vector> start_vector;
};

struct SolveReport {
  PositiveVector y_star;
  PositiveVector x_star;
  std::size_t iterations = 0;
  // ||y_map(y_k) - y_k||_inf for k = 0..iterations.
  std::vector<double> residual_history;
  Bracket bracket;
  SolvabilityCertificate certificate;
  PerronData perron;

  double residual_y = 0.0;
  double relative_residual_y = 0.0;
  double residual_x = 0.0;
  // Bound on residual_x implied by the y-domain stopping rule.
  double x_tolerance = 0.0;
};

class NoSolutionError : public Error {
 public:
  explicit NoSolutionError(SolvabilityCertificate cert);
  const SolvabilityCertificate& certificate() const noexcept { return cert_; }

 private:
  SolvabilityCertificate cert_;
};

class MaxIterationsError : public Error {
 public:
  MaxIterationsError(std::size_t iterations, double last_relative_residual);
  std::size_t iterations() const noexcept { return iterations_; }
  double last_relative_residual() const noexcept { return last_; }

 private:
  std::size_t iterations_;
  double last_;
};

/// Iterates y_{k+1} = y_map(y_k) until max_i |y_map(y)_i - y_i| / y_i <= tol.
/// Refuses to iterate (NoSolutionError) unless the certificate is positive.
SolveReport solve(const PowerAffineSystem& sys, const SolveOptions& opts = {});

}  // namespace pta
