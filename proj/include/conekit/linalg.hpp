#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "conekit/random.hpp"

namespace conekit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Rank and orthogonality tolerance, relative to the largest singular value.
/// Every geometric predicate in the library inherits it.
inline constexpr double kTolerance = 1e-9;

/// Linear subspace of R^d stored as an orthonormal basis (columns).
class Subspace {
 public:
  Subspace() = default;
  /// Zero subspace of R^ambient.
  explicit Subspace(int ambient);
  /// `basis` columns must already be orthonormal.
  Subspace(int ambient, Matrix basis);

  static Subspace whole(int ambient);
  /// span(e_0, ..., e_{k-1}) in R^ambient.
  static Subspace coordinate(int ambient, int k);

  int ambient() const noexcept { return ambient_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }

  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double tol = kTolerance) const;
  Subspace complement() const;
  Subspace rotated(const Matrix& r) const;

 private:
  int ambient_ = 0;
  Matrix basis_;
};

/// Proper rotation of R^d.
class Rotation {
 public:
  Rotation() = default;
  /// Throws InvalidArgument unless `m` is orthogonal with det +1 within 1e-10.
  explicit Rotation(Matrix m);

  static Rotation identity(int d);
  /// Rotation by `angle` in the (e_0, e_1) plane of R^d.
  static Rotation planar(int d, double angle);

  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  Vector apply(const Vector& x) const { return matrix_ * x; }
  Vector apply_inverse(const Vector& x) const { return matrix_.transpose() * x; }
  Rotation inverse() const;

 private:
  Matrix matrix_;
};

Vector sample_gaussian(int d, RandomStream& rs);
Vector sample_sphere(int d, RandomStream& rs);
/// Haar-distributed proper rotation: QR of a Gaussian matrix, columns of Q
/// rescaled by sign(diag R), then the first column negated if det Q = -1.
Rotation sample_rotation(int d, RandomStream& rs);

/// Numerical rank of the columns of `m` (relative tolerance kTolerance).
int numerical_rank(const Matrix& m);

/// Orthonormal basis of the span of `vectors` (given as columns of a d x n
/// matrix). An empty matrix yields the zero subspace of R^d.
Subspace orthonormal_basis(const Matrix& vectors);
Subspace orthonormal_basis(int ambient, std::span<const Vector> vectors);

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);

/// Generalized sine [L1, L2]: volume of the parallelepiped spanned by the
/// union of orthonormal bases when dim L1 + dim L2 <= d, and [L1^perp, L2^perp]
/// otherwise. Equals 1 if either subspace is {o}.
double generalized_sine(const Subspace& l1, const Subspace& l2);

}  // namespace conekit
