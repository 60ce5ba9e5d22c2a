#include "conekit/double_description.hpp"

#include <cmath>

#include "conekit/errors.hpp"

namespace conekit {

DoubleDescription::DoubleDescription(int ambient)
    : ambient_(ambient), lineality_(Matrix::Identity(ambient, ambient)) {
  if (ambient < 1) throw InvalidArgument("DoubleDescription: ambient dimension must be >= 1");
}

Matrix DoubleDescription::generators() const {
  const auto r = static_cast<Eigen::Index>(rays_.size());
  const auto l = lineality_.cols();
  Matrix g(ambient_, r + 2 * l);
  for (Eigen::Index i = 0; i < r; ++i) g.col(i) = rays_[static_cast<std::size_t>(i)];
  g.middleCols(r, l) = lineality_;
  g.rightCols(l) = -lineality_;
  return g;
}

bool DoubleDescription::is_split_by(const Vector& a) const {
  const Vector unit = a / a.norm();
  if (lineality_.cols() > 0 && (lineality_.transpose() * unit).cwiseAbs().maxCoeff() > kTolerance) return true;
  bool pos = false;
  bool neg = false;
  for (const auto& r : rays_) {
    const double v = unit.dot(r);
    pos = pos || v > kTolerance;
    neg = neg || v < -kTolerance;
  }
  return pos && neg;
}

void DoubleDescription::eliminate_lineality(const Vector& a, Eigen::Index pivot, double pivot_value,
                                            std::size_t idx) {
  const Vector lstar = lineality_.col(pivot);
  const Vector along = lineality_.transpose() * a;
  Matrix rest(ambient_, lineality_.cols() - 1);
  for (Eigen::Index j = 0, c = 0; j < lineality_.cols(); ++j) {
    if (j == pivot) continue;
    rest.col(c++) = lineality_.col(j) - (along(j) / pivot_value) * lstar;
  }
  lineality_ = orthonormal_basis(rest).basis();

  auto orthogonalize = [this](Vector v) {
    if (lineality_.cols() > 0) v -= lineality_ * (lineality_.transpose() * v);
    return Vector(v / v.norm());
  };
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    rays_[i] = orthogonalize(rays_[i] - (a.dot(rays_[i]) / pivot_value) * lstar);
    zero_sets_[i][idx] = true;
  }
  rays_.push_back(orthogonalize(pivot_value > 0.0 ? Vector(-lstar) : lstar));
  boost::dynamic_bitset<> z(idx + 1);
  z.set();
  z[idx] = false;
  zero_sets_.push_back(std::move(z));
}

void DoubleDescription::add_constraint(const Vector& a_in) {
  if (a_in.size() != ambient_) throw InvalidArgument("DoubleDescription: constraint dimension mismatch");
  const double norm = a_in.norm();
  if (!(norm > 0.0)) throw InvalidArgument("DoubleDescription: zero constraint normal");
  const Vector a = a_in / norm;
  const std::size_t idx = n_constraints_++;
  for (auto& z : zero_sets_) z.push_back(false);

  if (lineality_.cols() > 0) {
    const Vector along = lineality_.transpose() * a;
    Eigen::Index pivot = 0;
    const double vmax = along.cwiseAbs().maxCoeff(&pivot);
    if (vmax > kTolerance) {
      eliminate_lineality(a, pivot, along(pivot), idx);
      return;
    }
  }

  const std::size_t n = rays_.size();
  std::vector<double> value(n);
  std::vector<std::size_t> plus;
  std::vector<std::size_t> minus;
  for (std::size_t i = 0; i < n; ++i) {
    value[i] = a.dot(rays_[i]);
    if (value[i] > kTolerance)
      plus.push_back(i);
    else if (value[i] < -kTolerance)
      minus.push_back(i);
  }

  std::vector<Vector> next_rays;
  std::vector<boost::dynamic_bitset<>> next_zero;
  next_rays.reserve(n);
  next_zero.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (value[i] > kTolerance) continue;
    next_rays.push_back(rays_[i]);
    next_zero.push_back(zero_sets_[i]);
    if (value[i] >= -kTolerance) next_zero.back()[idx] = true;
  }

  // Rank of the active constraints of a 2-face is (d - lineality - 2), so
  // adjacent pairs share at least that many zero-set indices.
  const auto min_common = static_cast<std::size_t>(std::max<Eigen::Index>(0, ambient_ - lineality_.cols() - 2));
  for (std::size_t p : plus) {
    for (std::size_t q : minus) {
      boost::dynamic_bitset<> common = zero_sets_[p] & zero_sets_[q];
      if (common.count() < min_common) continue;
      bool adjacent = true;
      for (std::size_t r = 0; r < n && adjacent; ++r) {
        if (r == p || r == q) continue;
        if (common.is_subset_of(zero_sets_[r])) adjacent = false;
      }
      if (!adjacent) continue;
      Vector v = value[p] * rays_[q] - value[q] * rays_[p];
      if (lineality_.cols() > 0) v -= lineality_ * (lineality_.transpose() * v);
      next_rays.push_back(v / v.norm());
      common[idx] = true;
      next_zero.push_back(std::move(common));
    }
  }
  rays_ = std::move(next_rays);
  zero_sets_ = std::move(next_zero);
}

DoubleDescription halfspaces_to_generators(int ambient, const Matrix& normals) {
  if (normals.rows() != ambient && normals.cols() > 0)
    throw InvalidArgument("halfspaces_to_generators: dimension mismatch");
  DoubleDescription dd(ambient);
  for (Eigen::Index i = 0; i < normals.cols(); ++i) dd.add_constraint(normals.col(i));
  return dd;
}

}  // namespace conekit
