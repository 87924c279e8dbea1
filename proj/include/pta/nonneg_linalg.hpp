#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "pta/error.hpp"

namespace pta {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Square matrix with finite, nonnegative entries. The only way to obtain one
/// is through validate(), so holders never need to re-check the entries.
class NonnegMatrix {
 public:
  static NonnegMatrix validate(const Matrix& raw);
  static NonnegMatrix validate(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& matrix() const noexcept { return m_; }

  /// c * M for c >= 0.
  NonnegMatrix scaled(double c) const;
  /// Rows scaled by weights, i.e. diag(weights) * M.
  NonnegMatrix row_scaled(const Vector& weights) const;

 private:
  explicit NonnegMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Vector known to lie in the positive cone (Nonneg) or in its interior
/// (StrictlyPositive).
class PositiveVector {
 public:
  enum class Kind { Nonneg, StrictlyPositive };

  static PositiveVector strictly_positive(Vector v);
  static PositiveVector nonneg(Vector v);

  Kind kind() const noexcept { return kind_; }
  const Vector& values() const noexcept { return v_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(v_.size()); }
  double operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }

 private:
  PositiveVector(Vector v, Kind kind) : v_(std::move(v)), kind_(kind) {}
  Vector v_;
  Kind kind_;
};

bool is_strictly_positive(const Vector& v);
bool is_nonneg(const Vector& v);

/// Strong connectivity of the digraph with an edge i -> j whenever M(i,j) > 0.
/// A 1x1 matrix is irreducible iff its entry is positive.
bool is_irreducible(const NonnegMatrix& m);

struct PerronOptions {
  /// Convergence threshold on the Collatz-Wielandt gap. The gap is measured
  /// relative to max(1, r).
  double tol = 1e-12;
  /// 0 selects the default 100 * n + 10000.
  std::size_t max_iters = 0;
};

struct PerronData {
  double r = 0.0;
  Vector e;       // right vector, sup-norm 1
  Vector e_star;  // left vector, <e_star, e> = 1
  double residual = 0.0;
  // Collatz-Wielandt bounds on r from the right iteration.
  double r_lower = 0.0;
  double r_upper = 0.0;
  std::size_t iterations = 0;
};

/// Perron root and strictly positive left/right eigenvectors of an irreducible
/// matrix. Uses power iteration on M + I so that periodic matrices converge,
/// with Collatz-Wielandt bounds as the stopping certificate.
PerronData perron(const NonnegMatrix& m, const PerronOptions& opts = {});

/// ||M^k||^{1/k} in the induced sup-norm (max row sum). Never below r(M).
double gelfand_estimate(const NonnegMatrix& m, int k);

Vector apply(const NonnegMatrix& m, const Vector& v);
Vector apply_transpose(const NonnegMatrix& m, const Vector& v);

double sup_norm(const Vector& v);

}  // namespace pta
