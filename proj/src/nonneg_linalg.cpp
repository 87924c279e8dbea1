#include "pta/nonneg_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pta {

namespace {

void check_entries(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NotSquare, "matrix is " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
  if (m.rows() == 0) throw Error(ErrorKind::NotSquare, "matrix is empty");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::NonFiniteEntry, "entry (" + std::to_string(i) + "," +
                                                   std::to_string(j) + ") is not finite");
      }
      if (v < 0.0) {
        throw Error(ErrorKind::NegativeEntry, "entry (" + std::to_string(i) + "," +
                                                  std::to_string(j) + ") is negative");
      }
    }
  }
}

// Visits every node reachable from node 0, following edges i -> j with
// m(i, j) > 0 (or their reverses when `reverse` is set).
std::size_t count_reachable(const Matrix& m, bool reverse) {
  const Eigen::Index n = m.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = reverse ? m(j, i) : m(i, j);
      if (w > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count;
}

struct PowerResult {
  Vector x;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t iterations = 0;
};

// Power iteration on B = M + shift * I. For shift > 0 and irreducible M the
// matrix B is primitive, its Perron vector equals that of M and its root is
// r(M) + shift. Returns the Collatz-Wielandt bounds for r(M).
PowerResult shifted_power_iteration(const Matrix& m, double shift, double tol,
                                    std::size_t max_iters) {
  const Eigen::Index n = m.rows();
  Vector x = Vector::Ones(n);
  Vector y(n);
  for (std::size_t it = 1; it <= max_iters; ++it) {
    y.noalias() = m * x;
    y += shift * x;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ratio = y(i) / x(i);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    x = y / y.maxCoeff();
    const double upper = hi - shift;
    if (hi - lo <= tol * upper) {
      return {std::move(x), lo - shift, upper, it};
    }
  }
  throw Error(ErrorKind::NoConvergence,
              "power iteration did not converge in " + std::to_string(max_iters) +
                  " iterations");
}

}  // namespace

NonnegMatrix NonnegMatrix::validate(const Matrix& raw) {
  check_entries(raw);
  return NonnegMatrix(raw);
}

NonnegMatrix NonnegMatrix::validate(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw Error(ErrorKind::NotSquare, "matrix is empty");
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorKind::NotSquare, "row " + std::to_string(i) + " has " +
                                             std::to_string(rows[i].size()) +
                                             " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return validate(m);
}

NonnegMatrix NonnegMatrix::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::InvalidParameter, "scale factor must be finite and >= 0");
  }
  return validate(Matrix(c * m_));
}

NonnegMatrix NonnegMatrix::row_scaled(const Vector& weights) const {
  if (weights.size() != m_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "row weights do not match matrix size");
  }
  return validate(Matrix(weights.asDiagonal() * m_));
}

PositiveVector PositiveVector::strictly_positive(Vector v) {
  if (!is_strictly_positive(v)) {
    throw Error(ErrorKind::DomainError, "vector is not strictly positive");
  }
  return PositiveVector(std::move(v), Kind::StrictlyPositive);
}

PositiveVector PositiveVector::nonneg(Vector v) {
  if (!is_nonneg(v)) throw Error(ErrorKind::DomainError, "vector is not nonnegative");
  return PositiveVector(std::move(v), Kind::Nonneg);
}

bool is_strictly_positive(const Vector& v) {
  if (v.size() == 0) return false;
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

bool is_nonneg(const Vector& v) {
  if (v.size() == 0) return false;
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x >= 0.0; });
}

bool is_irreducible(const NonnegMatrix& m) {
  const Matrix& a = m.matrix();
  if (a.rows() == 1) return a(0, 0) > 0.0;
  const auto n = static_cast<std::size_t>(a.rows());
  return count_reachable(a, false) == n && count_reachable(a, true) == n;
}

PerronData perron(const NonnegMatrix& m, const PerronOptions& opts) {
  if (!is_irreducible(m)) {
    throw Error(ErrorKind::NotIrreducible, "Perron data requires an irreducible matrix");
  }
  const Matrix& a = m.matrix();
  const std::size_t max_iters =
      opts.max_iters == 0 ? 100 * m.size() + 10000 : opts.max_iters;

  // Shifting by the max row sum (an upper bound on r) keeps the iteration
  // scale-equivariant: perron(c M) performs the same steps as perron(M).
  const double shift = a.rowwise().sum().maxCoeff();

  PowerResult right = shifted_power_iteration(a, shift, opts.tol, max_iters);
  const Matrix at = a.transpose();
  const double shift_t = at.rowwise().sum().maxCoeff();
  PowerResult left = shifted_power_iteration(at, shift_t, opts.tol, max_iters);

  PerronData out;
  out.r_lower = right.lo;
  out.r_upper = right.hi;
  out.r = 0.5 * (right.lo + right.hi);
  out.e = right.x / right.x.maxCoeff();
  out.e_star = left.x / left.x.dot(out.e);
  out.iterations = std::max(right.iterations, left.iterations);
  const double res_right = sup_norm(a * out.e - out.r * out.e);
  const double res_left = sup_norm(at * out.e_star - out.r * out.e_star);
  out.residual = std::max(res_right, res_left);
  return out;
}

double gelfand_estimate(const NonnegMatrix& m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "Gelfand power k must be >= 1");
  const Matrix& a = m.matrix();
  Matrix power = a;
  double log_scale = 0.0;
  for (int i = 1; i < k; ++i) {
    power = (power * a).eval();
    const double norm = power.rowwise().sum().maxCoeff();
    if (norm == 0.0) return 0.0;
    // Renormalize to keep entries representable; the scale is tracked in logs.
    if (norm > 1e100 || norm < 1e-100) {
      power /= norm;
      log_scale += std::log(norm);
    }
  }
  const double norm = power.rowwise().sum().maxCoeff();
  if (norm == 0.0) return 0.0;
  return std::exp((std::log(norm) + log_scale) / k);
}

Vector apply(const NonnegMatrix& m, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != m.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector of size " + std::to_string(v.size()) +
                                                  " applied to " + std::to_string(m.size()) +
                                                  "x" + std::to_string(m.size()) + " matrix");
  }
  return m.matrix() * v;
}

Vector apply_transpose(const NonnegMatrix& m, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != m.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector of size " + std::to_string(v.size()) +
                                                  " applied to " + std::to_string(m.size()) +
                                                  "x" + std::to_string(m.size()) + " matrix");
  }
  return m.matrix().transpose() * v;
}

double sup_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace pta
