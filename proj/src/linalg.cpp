#include "conekit/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "conekit/errors.hpp"

namespace conekit {

Subspace::Subspace(int ambient) : ambient_(ambient), basis_(ambient, 0) {}

Subspace::Subspace(int ambient, Matrix basis) : ambient_(ambient), basis_(std::move(basis)) {
  if (basis_.rows() != ambient) throw InvalidArgument("Subspace: basis rows must equal ambient dimension");
}

Subspace Subspace::whole(int ambient) { return Subspace(ambient, Matrix::Identity(ambient, ambient)); }

Subspace Subspace::coordinate(int ambient, int k) {
  if (k < 0 || k > ambient) throw InvalidArgument("Subspace::coordinate: k out of range");
  return Subspace(ambient, Matrix::Identity(ambient, k));
}

Vector Subspace::project(const Vector& x) const {
  if (dim() == 0) return Vector::Zero(ambient_);
  return basis_ * (basis_.transpose() * x);
}

bool Subspace::contains(const Vector& x, double tol) const {
  return (x - project(x)).norm() <= tol * std::max(1.0, x.norm());
}

Subspace Subspace::complement() const {
  if (dim() == 0) return whole(ambient_);
  if (dim() == ambient_) return Subspace(ambient_);
  Eigen::HouseholderQR<Matrix> qr(basis_);
  Matrix q = qr.householderQ() * Matrix::Identity(ambient_, ambient_);
  return Subspace(ambient_, q.rightCols(ambient_ - dim()));
}

Subspace Subspace::rotated(const Matrix& r) const { return Subspace(ambient_, r * basis_); }

Rotation::Rotation(Matrix m) : matrix_(std::move(m)) {
  const auto d = matrix_.rows();
  if (d < 1 || matrix_.cols() != d) throw InvalidArgument("Rotation: matrix must be square and nonempty");
  const double orth = (matrix_.transpose() * matrix_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (orth > 1e-10 || std::abs(matrix_.determinant() - 1.0) > 1e-10)
    throw InvalidArgument("Rotation: matrix is not a proper rotation");
}

Rotation Rotation::identity(int d) { return Rotation(Matrix::Identity(d, d)); }

Rotation Rotation::planar(int d, double angle) {
  if (d < 2) throw InvalidArgument("Rotation::planar: d >= 2 required");
  Matrix m = Matrix::Identity(d, d);
  m(0, 0) = std::cos(angle);
  m(0, 1) = -std::sin(angle);
  m(1, 0) = std::sin(angle);
  m(1, 1) = std::cos(angle);
  return Rotation(m);
}

Rotation Rotation::inverse() const {
  Rotation r;
  r.matrix_ = matrix_.transpose();
  return r;
}

Vector sample_gaussian(int d, RandomStream& rs) {
  if (d < 1) throw InvalidArgument("sample_gaussian: d >= 1 required");
  Vector g(d);
  rs.fill_gaussian(std::span<double>(g.data(), static_cast<std::size_t>(d)));
  return g;
}

Vector sample_sphere(int d, RandomStream& rs) {
  if (d < 1) throw InvalidArgument("sample_sphere: d >= 1 required");
  for (;;) {
    Vector g = sample_gaussian(d, rs);
    const double n = g.norm();
    if (n > 0.0) return g / n;
  }
}

Rotation sample_rotation(int d, RandomStream& rs) {
  if (d < 2) throw InvalidArgument("sample_rotation: d >= 2 required");
  Matrix g(d, d);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rs.gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return Rotation(q);
}

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  if (!(smax > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > kTolerance * smax) ++r;
  return r;
}

Subspace orthonormal_basis(const Matrix& vectors) {
  const int d = static_cast<int>(vectors.rows());
  if (vectors.cols() == 0) return Subspace(d);
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  int r = 0;
  if (smax > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > kTolerance * smax) ++r;
  return Subspace(d, svd.matrixU().leftCols(r));
}

Subspace orthonormal_basis(int ambient, std::span<const Vector> vectors) {
  Matrix m(ambient, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient) throw InvalidArgument("orthonormal_basis: dimension mismatch");
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return orthonormal_basis(m);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw InvalidArgument("sum: ambient dimension mismatch");
  Matrix m(a.ambient(), a.dim() + b.dim());
  m << a.basis(), b.basis();
  return orthonormal_basis(m);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw InvalidArgument("intersect: ambient dimension mismatch");
  // (A cap B)^perp = A^perp + B^perp
  return sum(a.complement(), b.complement()).complement();
}

double generalized_sine(const Subspace& l1, const Subspace& l2) {
  if (l1.ambient() != l2.ambient()) throw InvalidArgument("generalized_sine: ambient dimension mismatch");
  const int d = l1.ambient();
  if (l1.dim() + l2.dim() > d) return generalized_sine(l1.complement(), l2.complement());
  if (l1.dim() == 0 || l2.dim() == 0) return 1.0;
  Matrix m(d, l1.dim() + l2.dim());
  m << l1.basis(), l2.basis();
  const double gram = (m.transpose() * m).determinant();
  return std::clamp(std::sqrt(std::max(gram, 0.0)), 0.0, 1.0);
}

}  // namespace conekit
