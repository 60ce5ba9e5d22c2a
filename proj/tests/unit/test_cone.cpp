#include <doctest.h>

#include <conekit/cone.hpp>
#include <conekit/errors.hpp>

#include <numbers>

#include "support/oracles.hpp"

using namespace conekit;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

PolyhedralCone quadrant() { return cone_from_halfspaces(2, std::vector<Vector>{vec({-1, 0}), vec({0, -1})}); }

PolyhedralCone orthant3() {
  return cone_from_halfspaces(3, std::vector<Vector>{vec({-1, 0, 0}), vec({0, -1, 0}), vec({0, 0, -1})});
}

std::vector<int> face_counts(const PolyhedralCone& c) {
  std::vector<int> n(static_cast<std::size_t>(c.ambient_dim()) + 1, 0);
  for (const auto& f : c.faces()) ++n[static_cast<std::size_t>(f.dim())];
  return n;
}

}  // namespace

TEST_CASE("halfspace construction") {
  const PolyhedralCone q = quadrant();
  CHECK(q.dim() == 2);
  CHECK(q.lineality_dim() == 0);
  CHECK(q.ray_count() == 2);

  const PolyhedralCone all = cone_from_halfspaces(3, std::vector<Vector>{});
  CHECK(all.dim() == 3);
  CHECK(all.is_subspace());

  const PolyhedralCone line = cone_from_halfspaces(2, std::vector<Vector>{vec({1, 0}), vec({-1, 0})});
  CHECK(line.dim() == 1);
  CHECK(line.lineality_dim() == 1);
  CHECK(line.contains(vec({0, 5})));
  CHECK_FALSE(line.contains(vec({1, 5})));

  CHECK_THROWS_AS(cone_from_halfspaces(2, std::vector<Vector>{vec({0, 0})}), InvalidArgument);
  CHECK_THROWS_AS(cone_from_halfspaces(2, std::vector<Vector>{vec({1, 0, 0})}), InvalidArgument);
}

TEST_CASE("generator construction") {
  const PolyhedralCone q = cone_from_generators(2, std::vector<Vector>{vec({1, 0}), vec({0, 1})});
  CHECK(same_set(q, quadrant()));

  const PolyhedralCone upper = cone_from_generators(2, std::vector<Vector>{vec({1, 0}), vec({-1, 0}), vec({0, 1})});
  CHECK(upper.dim() == 2);
  CHECK(upper.lineality_dim() == 1);
  CHECK(upper.facet_count() == 1);
  CHECK(upper.contains(vec({-3, 0.1})));
  CHECK_FALSE(upper.contains(vec({0, -0.1})));

  const PolyhedralCone o = cone_from_generators(3, std::vector<Vector>{});
  CHECK(o.dim() == 0);
  CHECK(o.is_zero());
}

TEST_CASE("representations of simple cones") {
  const PolyhedralCone o3 = orthant3();
  CHECK(o3.ray_count() == 3);
  for (int j = 0; j < 3; ++j) {
    const Vector g = o3.generators().col(j);
    CHECK(g.minCoeff() > -1e-12);
    CHECK(std::abs(g.maxCoeff() - 1.0) < 1e-12);
  }

  const PolyhedralCone h = cone_from_halfspaces(2, std::vector<Vector>{vec({1, 0})});
  // generators: -e1 then +/- e2
  CHECK(h.generators().cols() == 3);
  CHECK((h.generators().col(0) - vec({-1, 0})).norm() < 1e-12);
  CHECK(std::abs(std::abs(h.generators()(1, 1)) - 1.0) < 1e-12);
}

TEST_CASE("round trip on random cones agrees with both membership oracles") {
  RandomStream rs(100, 0);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + static_cast<int>(rs.uniform_index(6));
    Matrix n(4, m);
    for (int j = 0; j < m; ++j) n.col(j) = sample_gaussian(4, rs);
    const PolyhedralCone c = cone_from_halfspaces(4, n);
    // Every generator satisfies the original constraints.
    if (c.generators().cols() > 0) CHECK((n.transpose() * c.generators()).maxCoeff() <= 1e-9);
    int disagreements = 0;
    for (int s = 0; s < 10000; ++s) {
      const Vector x = sample_gaussian(4, rs);
      const bool by_h = (n.transpose() * x).maxCoeff() <= 0.0;
      if (s < 300) disagreements += by_h != oracle::v_member(c, x);
      disagreements += by_h != c.contains(x);
    }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("irredundancy: removing any generator or normal changes the set") {
  RandomStream rs(101, 0);
  for (int t = 0; t < 30; ++t) {
    const PolyhedralCone c = oracle::random_cone(3, rs);
    for (int j = 0; j < c.ray_count(); ++j) {
      Matrix g(3, c.generators().cols() - 1);
      for (Eigen::Index i = 0, k = 0; i < c.generators().cols(); ++i)
        if (i != j) g.col(k++) = c.generators().col(i);
      CHECK_FALSE(same_set(cone_from_generators(3, g), c));
    }
  }
}

TEST_CASE("duality") {
  CHECK(dual(whole_space(3)).is_zero());
  CHECK(dual(zero_cone(3)).dim() == 3);
  const PolyhedralCone nq = cone_from_generators(2, std::vector<Vector>{vec({-1, 0}), vec({0, -1})});
  CHECK(same_set(dual(quadrant()), nq));

  RandomStream rs(102, 0);
  for (int t = 0; t < 100; ++t) {
    const PolyhedralCone c = oracle::random_cone(1 + static_cast<int>(rs.uniform_index(4)), rs);
    CHECK(same_set(dual(dual(c)), c));
    const PolyhedralCone pc = dual(c);
    const Matrix prod = c.generators().transpose() * pc.generators();
    CHECK((prod.size() == 0 || prod.maxCoeff() <= 1e-9));
  }
}

TEST_CASE("face lattice") {
  CHECK(face_counts(orthant3()) == std::vector<int>{1, 3, 3, 1});

  const PolyhedralCone h3 = cone_from_halfspaces(3, std::vector<Vector>{vec({1, 0, 0})});
  CHECK(face_counts(h3) == std::vector<int>{0, 0, 1, 1});
  CHECK(faces(h3, 2).size() == 1);
  CHECK(faces(h3, 2)[0].hull().dim() == 2);

  const PolyhedralCone plane = subspace_cone(Subspace::coordinate(4, 2));
  CHECK(plane.face_count() == 1);
  CHECK(plane.faces()[0].dim() == 2);

  // Brute force over coordinate subsets: the face of the orthant fixing
  // coordinates S to zero has dimension 3 - |S|.
  const PolyhedralCone o = orthant3();
  for (const auto& f : o.faces()) {
    CHECK(static_cast<int>(f.active_set().size()) == 3 - f.dim());
    CHECK(static_cast<int>(f.generator_indices().size()) == f.dim());
  }
}

TEST_CASE("normal cones") {
  const PolyhedralCone q = quadrant();
  for (const auto& f : q.faces()) {
    const PolyhedralCone n = normal_cone(q, f);
    CHECK(n.dim() == 2 - f.dim());
    if (f.dim() == 1 && f.hull().contains(vec({1, 0}))) CHECK(same_set(n, cone_from_generators(2, std::vector<Vector>{vec({0, -1})})));
    if (f.dim() == 2) CHECK(n.is_zero());
  }
  CHECK_THROWS_AS(normal_cone(q, orthant3().faces()[0]), InvalidArgument);

  RandomStream rs(103, 0);
  for (int t = 0; t < 50; ++t) {
    const PolyhedralCone c = oracle::random_cone(3, rs);
    const PolyhedralCone pc = dual(c);
    std::vector<int> by_dim_c(4, 0), by_dim_p(4, 0);
    for (const auto& f : c.faces()) ++by_dim_c[static_cast<std::size_t>(f.dim())];
    for (const auto& f : pc.faces()) ++by_dim_p[static_cast<std::size_t>(f.dim())];
    for (int k = 0; k <= 3; ++k) CHECK(by_dim_c[static_cast<std::size_t>(k)] == by_dim_p[static_cast<std::size_t>(3 - k)]);
    for (const auto& f : c.faces()) {
      const PolyhedralCone n = normal_cone(c, f);
      CHECK(n.dim() == 3 - f.dim());
      // N(C°, N(C, F)) = F: locate N(C, F) among the faces of C°.
      bool found = false;
      for (const auto& g : pc.faces()) {
        if (g.dim() != n.dim() || !same_set(g.as_cone(), n)) continue;
        found = true;
        CHECK(same_set(normal_cone(pc, g), f.as_cone()));
      }
      CHECK(found);
    }
  }
}

TEST_CASE("intersections") {
  const PolyhedralCone q = quadrant();
  CHECK(same_set(intersect(q, whole_space(2)), q));
  const PolyhedralCone left = cone_from_halfspaces(2, std::vector<Vector>{vec({1, 0})});
  const PolyhedralCone ray = intersect(q, left);
  CHECK(ray.dim() == 1);
  CHECK(ray.contains(vec({0, 1})));

  RandomStream rs(104, 0);
  for (int t = 0; t < 100; ++t) {
    const PolyhedralCone a = oracle::random_cone(3, rs);
    const PolyhedralCone b = oracle::random_cone(3, rs);
    const PolyhedralCone e = intersect(a, b);
    int bad = 0;
    for (int s = 0; s < 10000; ++s) {
      const Vector x = sample_gaussian(3, rs);
      bad += e.contains(x) != (a.contains(x) && b.contains(x));
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("rotation of cones") {
  const PolyhedralCone q = quadrant();
  CHECK(same_set(rotate(q, Rotation::identity(2)), q));
  const PolyhedralCone r = rotate(q, Rotation::planar(2, std::numbers::pi / 2));
  CHECK(same_set(r, cone_from_halfspaces(2, std::vector<Vector>{vec({1, 0}), vec({0, -1})})));

  RandomStream rs(105, 0);
  const PolyhedralCone c = oracle::random_cone(4, rs);
  for (int t = 0; t < 100; ++t) {
    const PolyhedralCone rc = rotate(c, sample_rotation(4, rs));
    CHECK(rc.dim() == c.dim());
    CHECK(rc.face_count() == c.face_count());
  }
}

TEST_CASE("products, embedding and conic sums") {
  const PolyhedralCone p = direct_product(quadrant(), cone_from_halfspaces(1, std::vector<Vector>{vec({-1})}));
  CHECK(same_set(p, orthant3()));
  const PolyhedralCone e = embed(quadrant(), 4);
  CHECK(e.ambient_dim() == 4);
  CHECK(e.dim() == 2);
  const PolyhedralCone s = conic_sum(cone_from_generators(2, std::vector<Vector>{vec({1, 0})}),
                                     cone_from_generators(2, std::vector<Vector>{vec({0, 1})}));
  CHECK(same_set(s, quadrant()));
}

TEST_CASE("literal conversion") {
  ConeLiteral lit;
  lit.dim = 2;
  lit.halfspaces = std::vector<Vector>{vec({-1, 0}), vec({0, -1})};
  lit.generators = std::vector<Vector>{vec({1, 0}), vec({0, 1})};
  CHECK(same_set(convert_representation(lit), quadrant()));
  lit.generators = std::vector<Vector>{vec({1, 0}), vec({-1, 1})};
  CHECK_THROWS_AS(convert_representation(lit), InvalidArgument);
  CHECK_THROWS_AS(convert_representation(ConeLiteral{2, std::nullopt, std::nullopt}), InvalidArgument);
}

TEST_CASE("position predicates") {
  const Subspace a = Subspace::coordinate(2, 1);
  Matrix m(2, 1);
  m << 1, 1;
  CHECK(general_position(a, orthonormal_basis(m)));

  Matrix p(4, 2), q(4, 2);
  p << 1, 0, 0, 1, 0, 0, 0, 0;
  q << 1, 0, 0, 0, 0, 1, 0, 0;
  CHECK_FALSE(general_position(orthonormal_basis(p), orthonormal_basis(q)));

  const PolyhedralCone h = cone_from_halfspaces(2, std::vector<Vector>{vec({1, 0})});
  const PositionFlags f = position_predicates(h, h);
  CHECK(f.transverse);
  CHECK_FALSE(f.c_is_subspace);

  const PolyhedralCone line = subspace_cone(Subspace::coordinate(2, 1));
  CHECK(position_predicates(line, line).c_is_subspace);
  // boundary line of {x2 <= 0} does not meet its interior
  const PolyhedralCone lower = cone_from_halfspaces(2, std::vector<Vector>{vec({0, 1})});
  CHECK_FALSE(relative_interiors_meet(lower, line));
}

TEST_CASE("random rotations give trivial or transverse intersections") {
  RandomStream rs(106, 0);
  const PolyhedralCone c = orthant3();
  const PolyhedralCone d = cone_from_generators(3, std::vector<Vector>{vec({1, 0, 0}), vec({0, 1, 0})});
  int bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const PolyhedralCone rd = rotate(d, sample_rotation(3, rs));
    const PolyhedralCone e = intersect(c, rd);
    if (!e.is_zero() && !transverse(c, rd, e)) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("faces of an intersection are intersections of faces") {
  RandomStream rs(107, 0);
  for (int t = 0; t < 20; ++t) {
    const PolyhedralCone c = oracle::random_non_subspace_cone(3, rs);
    const PolyhedralCone d = rotate(oracle::random_non_subspace_cone(3, rs), sample_rotation(3, rs));
    const PolyhedralCone e = intersect(c, d);
    for (const auto& g : e.faces()) {
      const PolyhedralCone gc = g.as_cone();
      bool found = false;
      for (const auto& f1 : c.faces()) {
        for (const auto& f2 : d.faces())
          if (same_set(intersect(f1.as_cone(), f2.as_cone()), gc, 1e-7)) {
            found = true;
            break;
          }
        if (found) break;
      }
      CHECK(found);
    }
  }
}
