#pragma once

#include <boost/dynamic_bitset.hpp>

#include <vector>

#include "conekit/linalg.hpp"

namespace conekit {

/// Incremental double-description (Motzkin) state for {x : <a_i, x> <= 0}.
///
/// Starts at R^d and intersects one halfspace at a time. The state keeps an
/// orthonormal basis of the lineality space and the extreme rays of the
/// pointed part (unit vectors orthogonal to the lineality space). Each ray
/// carries its zero set: the indices of the processed constraints it satisfies
/// with equality. New rays are formed only from pairs passing the
/// combinatorial adjacency test, so the ray list stays irredundant.
class DoubleDescription {
 public:
  explicit DoubleDescription(int ambient);

  /// Intersects the current cone with {x : <a, x> <= 0}. `a` must be nonzero.
  void add_constraint(const Vector& a);

  int ambient() const noexcept { return ambient_; }
  std::size_t constraint_count() const noexcept { return n_constraints_; }
  const Matrix& lineality() const noexcept { return lineality_; }
  const std::vector<Vector>& rays() const noexcept { return rays_; }
  const std::vector<boost::dynamic_bitset<>>& zero_sets() const noexcept { return zero_sets_; }

  /// Rays followed by +/- the lineality basis, as columns.
  Matrix generators() const;

  /// True when some ray lies strictly on each side of the hyperplane a^perp,
  /// or the lineality space is not orthogonal to a.
  bool is_split_by(const Vector& a) const;

 private:
  void eliminate_lineality(const Vector& a, Eigen::Index pivot, double pivot_value, std::size_t idx);

  int ambient_;
  std::size_t n_constraints_ = 0;
  Matrix lineality_;
  std::vector<Vector> rays_;
  std::vector<boost::dynamic_bitset<>> zero_sets_;
};

/// Generators (columns) of {x : <a_i, x> <= 0 for all columns a_i of `normals`}.
DoubleDescription halfspaces_to_generators(int ambient, const Matrix& normals);

}  // namespace conekit
