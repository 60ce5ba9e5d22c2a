#pragma once

#include "conekit/cone.hpp"

namespace conekit {

struct ProjectionResult {
  Vector point;     // Π_C(x)
  Face face;        // the face whose relative interior contains Π_C(x)
  Vector residual;  // x - Π_C(x), an element of N(C, face)
};

/// Metric projection by face decomposition: the unique face F with
/// x ∈ relint F + N(C, F) is found by testing every face of the lattice.
/// Throws DegenerateProjection when no face or more than one face accepts.
ProjectionResult project(const PolyhedralCone& c, const Vector& x);

struct MoreauSplit {
  Vector p;  // Π_C(x)
  Vector q;  // Π_{C°}(x)
};

/// Projects independently onto C and onto its polar.
MoreauSplit moreau_split(const PolyhedralCone& c, const Vector& x);

Face classify_face(const PolyhedralCone& c, const Vector& x);

}  // namespace conekit
