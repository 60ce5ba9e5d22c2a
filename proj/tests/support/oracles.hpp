#pragma once

#include <conekit/cone.hpp>

#include <vector>

namespace oracle {

using conekit::Matrix;
using conekit::Vector;

/// Nearest point of cone(columns of g) to x by exhaustive search over
/// linearly independent generator subsets (Carathéodory): each subset's
/// unconstrained least-squares fit is kept when its weights are nonnegative.
Vector brute_force_projection(const Matrix& g, const Vector& x);

/// Coordinatewise clamp: projection onto the nonnegative orthant.
Vector orthant_clamp(const Vector& x);

/// Random cone in R^d: either up to `max_constraints` Gaussian halfspaces or
/// the conic hull of up to `max_generators` Gaussian vectors.
conekit::PolyhedralCone random_cone(int d, conekit::RandomStream& rs, int max_constraints = 6,
                                    int max_generators = 6);

/// Like random_cone but never a subspace (redraws).
conekit::PolyhedralCone random_non_subspace_cone(int d, conekit::RandomStream& rs);

/// Membership straight from the halfspace list, with tolerance.
bool h_member(const conekit::PolyhedralCone& c, const Vector& x, double tol = 1e-9);

/// Membership in cone(generators) via brute_force_projection.
bool v_member(const conekit::PolyhedralCone& c, const Vector& x, double tol = 1e-7);

}  // namespace oracle
