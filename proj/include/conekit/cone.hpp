#pragma once

#include <boost/dynamic_bitset.hpp>

#include <memory>
#include <optional>
#include <vector>

#include "conekit/linalg.hpp"

namespace conekit {

namespace detail {
struct ConeImpl;
class Projector;
}  // namespace detail

class Face;
class DoubleDescription;

/// Closed convex polyhedral cone {x : <a_i, x> <= 0} with both
/// representations populated and irredundant.
///
/// Layout of the columns:
///  - normals():    facet normals, then +b / -b for an orthonormal basis b of
///                  L(C)^perp (the implicit equalities);
///  - generators(): extreme rays modulo lineality, then +l / -l for an
///                  orthonormal basis l of the lineality space.
/// Every column is a unit vector. Swapping the two lists yields the polar.
///
/// Values are immutable and cheap to copy. The face lattice and projection
/// tables are built on first use and shared by all copies.
class PolyhedralCone {
 public:
  int ambient_dim() const;
  int dim() const;
  int lineality_dim() const;
  bool is_subspace() const { return dim() == lineality_dim(); }
  bool is_zero() const { return dim() == 0; }

  const Matrix& normals() const;
  const Matrix& generators() const;
  int facet_count() const;
  int ray_count() const;
  const Subspace& lineality() const;
  const Subspace& linear_hull() const;

  bool contains(const Vector& x, double tol = kTolerance) const;
  /// Set inclusion other ⊆ *this, decided on the generators of `other`.
  bool contains(const PolyhedralCone& other, double tol = kTolerance) const;

  /// All faces sorted by (dimension, active set).
  std::vector<Face> faces() const;
  std::size_t face_count() const;

  const detail::Projector& projector() const;
  const std::shared_ptr<const detail::ConeImpl>& impl() const { return impl_; }

 private:
  friend PolyhedralCone make_cone(std::shared_ptr<const detail::ConeImpl>);
  std::shared_ptr<const detail::ConeImpl> impl_;
};

/// One face F = C ∩ {<a_i, x> = 0, i in active_set} of a parent cone.
class Face {
 public:
  Face(std::shared_ptr<const detail::ConeImpl> parent, std::size_t index);

  std::size_t index() const noexcept { return index_; }
  int dim() const;
  /// Indices into parent.normals() held at equality (closed under the
  /// active-set closure, so it always contains the implicit equalities).
  const std::vector<int>& active_set() const;
  /// Indices into parent.generators() lying in F.
  const std::vector<int>& generator_indices() const;
  /// L(F).
  const Subspace& hull() const;

  PolyhedralCone parent() const;
  bool belongs_to(const PolyhedralCone& cone) const { return cone.impl() == parent_; }
  /// F as a cone in its own right.
  PolyhedralCone as_cone() const;
  /// Strict relative-interior membership with relative slack kTolerance.
  bool relint_contains(const Vector& x) const;

  friend bool operator==(const Face& a, const Face& b) {
    return a.parent_ == b.parent_ && a.index_ == b.index_;
  }

 private:
  std::shared_ptr<const detail::ConeImpl> parent_;
  std::size_t index_;
};

/// JSON cone literal: at least one of the two lists is present.
struct ConeLiteral {
  int dim = 0;
  std::optional<std::vector<Vector>> halfspaces;
  std::optional<std::vector<Vector>> generators;
};

/// {x : <a_i, x> <= 0}. An empty list is R^d. Zero normals are rejected.
PolyhedralCone cone_from_halfspaces(int ambient, std::span<const Vector> normals);
PolyhedralCone cone_from_halfspaces(int ambient, const Matrix& normals_as_columns);
/// Conic hull. An empty list is {o}.
PolyhedralCone cone_from_generators(int ambient, std::span<const Vector> generators);
PolyhedralCone cone_from_generators(int ambient, const Matrix& generators_as_columns);
/// Canonical cone from a finished double-description state of its
/// halfspace list.
PolyhedralCone cone_from_double_description(const DoubleDescription& primal);
/// Builds the canonical cone from a literal. When both lists are given they
/// must describe the same set.
PolyhedralCone convert_representation(const ConeLiteral& literal);

PolyhedralCone whole_space(int ambient);
PolyhedralCone zero_cone(int ambient);
PolyhedralCone subspace_cone(const Subspace& l);

PolyhedralCone dual(const PolyhedralCone& c);
std::vector<Face> faces(const PolyhedralCone& c, std::optional<int> k = std::nullopt);
/// N(C, F): conic hull of the active constraint normals.
PolyhedralCone normal_cone(const PolyhedralCone& c, const Face& f);
PolyhedralCone intersect(const PolyhedralCone& c, const PolyhedralCone& d);
/// Conic (Minkowski) sum C + D, from concatenated generators.
PolyhedralCone conic_sum(const PolyhedralCone& c, const PolyhedralCone& d);
/// C x D in R^{d1 + d2}.
PolyhedralCone direct_product(const PolyhedralCone& c, const PolyhedralCone& d);
/// C viewed inside R^{ambient}, padded with zero coordinates.
PolyhedralCone embed(const PolyhedralCone& c, int ambient);
PolyhedralCone rotate(const PolyhedralCone& c, const Rotation& r);

bool same_set(const PolyhedralCone& a, const PolyhedralCone& b, double tol = kTolerance);

struct PositionFlags {
  bool general_position = false;  // of L(C) and L(D)
  bool transverse = false;
  bool c_is_subspace = false;
  bool d_is_subspace = false;
};

bool general_position(const Subspace& l1, const Subspace& l2);
/// relint C ∩ relint D ≠ ∅.
bool relative_interiors_meet(const PolyhedralCone& c, const PolyhedralCone& d);
/// Same, reusing a precomputed cap = C ∩ D.
bool relative_interiors_meet(const PolyhedralCone& c, const PolyhedralCone& d, const PolyhedralCone& cap);
/// dim(C ∩ D) = dim C + dim D - d and the relative interiors meet.
bool transverse(const PolyhedralCone& c, const PolyhedralCone& d, const PolyhedralCone& cap);
PositionFlags position_predicates(const PolyhedralCone& c, const PolyhedralCone& d);

}  // namespace conekit
