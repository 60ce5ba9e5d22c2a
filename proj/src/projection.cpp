#include "conekit/projection.hpp"

#include <sstream>

#include "conekit/detail/cone_impl.hpp"
#include "conekit/errors.hpp"

namespace conekit {

ProjectionResult project(const PolyhedralCone& c, const Vector& x) {
  if (x.size() != c.ambient_dim()) throw InvalidArgument("project: dimension mismatch");
  const auto& proj = c.projector();
  Vector p(x.size());
  const int hit = proj.classify(x.data(), p.data());
  if (hit < 0) {
    auto candidates = proj.accepting_faces(x.data());
    std::ostringstream msg;
    msg << "project: " << candidates.size() << " faces accepted the point (expected exactly one)";
    throw DegenerateProjection(msg.str(), std::move(candidates));
  }
  return ProjectionResult{p, Face(c.impl(), static_cast<std::size_t>(hit)), x - p};
}

MoreauSplit moreau_split(const PolyhedralCone& c, const Vector& x) {
  return MoreauSplit{project(c, x).point, project(dual(c), x).point};
}

Face classify_face(const PolyhedralCone& c, const Vector& x) { return project(c, x).face; }

}  // namespace conekit
