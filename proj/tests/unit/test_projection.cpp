#include <doctest.h>

#include <conekit/catalog.hpp>
#include <conekit/detail/cone_impl.hpp>
#include <conekit/projection.hpp>

#include "support/oracles.hpp"

using namespace conekit;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("projection onto the quadrant") {
  const PolyhedralCone q = build_cone(ConeDescriptor::orthant(2));
  auto r = project(q, vec({1, -1}));
  CHECK((r.point - vec({1, 0})).norm() < 1e-12);
  CHECK(r.face.dim() == 1);
  CHECK((r.residual - vec({0, -1})).norm() < 1e-12);

  r = project(q, vec({-1, -1}));
  CHECK(r.point.norm() < 1e-12);
  CHECK(r.face.dim() == 0);

  r = project(q, Vector::Zero(2));
  CHECK(r.face.dim() == 0);
}

TEST_CASE("classification on the orthant matches the clamp oracle") {
  const PolyhedralCone o = build_cone(ConeDescriptor::orthant(3));
  CHECK(classify_face(o, vec({1, 2, 3})).dim() == 3);
  CHECK(classify_face(o, vec({-1, -1, -1})).dim() == 0);
  CHECK(classify_face(o, vec({1, -1, -1})).dim() == 1);

  RandomStream rs(200, 0);
  for (int t = 0; t < 10000; ++t) {
    const Vector x = sample_gaussian(3, rs);
    const auto r = project(o, x);
    const Vector clamp = oracle::orthant_clamp(x);
    CHECK((r.point - clamp).norm() < 1e-12);
    CHECK(r.face.dim() == (clamp.array() > 0).count());
  }
}

TEST_CASE("projection matches the brute-force minimizer on random cones") {
  RandomStream rs(201, 0);
  int failures = 0;
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + static_cast<int>(rs.uniform_index(3));
    const PolyhedralCone c = oracle::random_cone(d, rs);
    for (int s = 0; s < 1000; ++s) {
      const Vector x = sample_gaussian(d, rs);
      const auto r = project(c, x);
      const Vector p = oracle::brute_force_projection(c.generators(), x);
      if ((r.point - p).norm() > 1e-6) ++failures;
      CHECK(r.face.relint_contains(r.point));
      CHECK(std::abs(r.point.dot(r.residual)) <= 1e-9 * std::max(1.0, x.squaredNorm()));
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("Moreau decomposition") {
  const PolyhedralCone h = build_cone(ConeDescriptor::halfspace(2));
  const MoreauSplit m = moreau_split(h, vec({3, 1}));
  CHECK((m.p - vec({0, 1})).norm() < 1e-12);
  CHECK((m.q - vec({3, 0})).norm() < 1e-12);

  const MoreauSplit w = moreau_split(whole_space(3), vec({1, 2, 3}));
  CHECK((w.p - vec({1, 2, 3})).norm() < 1e-12);
  CHECK(w.q.norm() < 1e-12);

  RandomStream rs(202, 0);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + static_cast<int>(rs.uniform_index(4));
    const PolyhedralCone c = oracle::random_cone(d, rs);
    for (int s = 0; s < 50; ++s) {
      const Vector x = sample_gaussian(d, rs);
      const MoreauSplit ms = moreau_split(c, x);
      CHECK((ms.p + ms.q - x).norm() <= 1e-9);
      CHECK(std::abs(ms.p.dot(ms.q)) <= 1e-9);
    }
  }
}

TEST_CASE("homogeneity, idempotence and equivariance") {
  RandomStream rs(203, 0);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + static_cast<int>(rs.uniform_index(3));
    const PolyhedralCone c = oracle::random_cone(d, rs);
    const Rotation r = sample_rotation(d, rs);
    const PolyhedralCone rc = rotate(c, r);
    for (int s = 0; s < 50; ++s) {
      const Vector x = sample_gaussian(d, rs);
      const Vector p = project(c, x).point;
      const double lambda = 0.01 + 10 * rs.uniform();
      CHECK((project(c, lambda * x).point - lambda * p).norm() <= 1e-9 * std::max(1.0, lambda * x.norm()));
      CHECK((project(c, p).point - p).norm() <= 1e-9);
      CHECK((project(rc, r.apply(x)).point - r.apply(p)).norm() <= 1e-9);
    }
  }
}

TEST_CASE("exactly one face accepts almost every Gaussian sample") {
  RandomStream rs(204, 0);
  std::uint64_t ambiguous = 0;
  std::uint64_t total = 0;
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + static_cast<int>(rs.uniform_index(3));
    const PolyhedralCone c = oracle::random_cone(d, rs);
    const auto& proj = c.projector();
    for (int s = 0; s < 5000; ++s) {
      const Vector x = sample_gaussian(d, rs);
      ambiguous += proj.accepting_faces(x.data()).size() != 1;
      ++total;
    }
  }
  CHECK(static_cast<double>(ambiguous) <= 1e-3 * static_cast<double>(total));
}

TEST_CASE("a point on a ray is classified to that ray only") {
  const PolyhedralCone q = build_cone(ConeDescriptor::orthant(2));
  const auto candidates = q.projector().accepting_faces(vec({1, 0}).data());
  CHECK(candidates.size() == 1);
  CHECK(q.faces()[candidates[0]].dim() == 1);
}
