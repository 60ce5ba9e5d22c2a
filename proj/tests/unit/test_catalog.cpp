#include <doctest.h>

#include <conekit/catalog.hpp>
#include <conekit/errors.hpp>
#include <conekit/measures.hpp>

#include <numbers>

using namespace conekit;

namespace {

void check_close(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

}  // namespace

TEST_CASE("catalog values") {
  check_close(exact_intrinsic_volumes(ConeDescriptor::halfspace(3)), {0, 0, 0.5, 0.5});
  check_close(exact_intrinsic_volumes(ConeDescriptor::orthant(2)), {0.25, 0.5, 0.25});
  check_close(exact_intrinsic_volumes(ConeDescriptor::wedge2d(std::numbers::pi / 2)),
              exact_intrinsic_volumes(ConeDescriptor::orthant(2)));
  check_close(exact_intrinsic_volumes(ConeDescriptor::subspace(2, 4)), {0, 0, 1, 0, 0});
  check_close(exact_intrinsic_volumes(ConeDescriptor::product(ConeDescriptor::orthant(2), ConeDescriptor::orthant(2))),
              exact_intrinsic_volumes(ConeDescriptor::orthant(4)));
  check_close(exact_intrinsic_volumes(ConeDescriptor::wedge2d(std::numbers::pi)),
              exact_intrinsic_volumes(ConeDescriptor::halfspace(2)));
}

TEST_CASE("orthant(2) agrees with a brute-force sample of 10^7 points") {
  // Classify by coordinate signs directly; no projection code involved.
  RandomStream rs(300, 0);
  const int n = 10000000;
  std::uint64_t counts[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const double a = rs.gaussian();
    const double b = rs.gaussian();
    ++counts[(a > 0) + (b > 0)];
  }
  const auto exact = exact_intrinsic_volumes(ConeDescriptor::orthant(2));
  for (int k = 0; k < 3; ++k) {
    const double p = static_cast<double>(counts[k]) / n;
    CHECK(std::abs(p - exact[static_cast<std::size_t>(k)]) <= 4 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("descriptor parsing") {
  CHECK(parse_descriptor("orthant(3)").ambient == 3);
  CHECK(parse_descriptor(" quadrant ").kind == ConeDescriptor::Kind::orthant);
  CHECK(parse_descriptor("halfplane").kind == ConeDescriptor::Kind::halfspace);
  CHECK(parse_descriptor("wedge2d(pi/2)").angle == doctest::Approx(std::numbers::pi / 2));
  CHECK(parse_descriptor("wedge2d(3*pi/4)").angle == doctest::Approx(3 * std::numbers::pi / 4));
  CHECK(parse_descriptor("wedge2d(0.5)").angle == 0.5);
  CHECK(parse_descriptor("subspace(1,3)").sub_dim == 1);
  CHECK(parse_descriptor("product(halfline, orthant(2), halfspace(1))").ambient == 4);
  CHECK(to_string(parse_descriptor("product(orthant(2),halfspace(3))")) == "product(orthant(2),halfspace(3))");

  CHECK_THROWS_AS(parse_descriptor("cube(3)"), InvalidArgument);
  CHECK_THROWS_AS(parse_descriptor("orthant(3"), InvalidArgument);
  CHECK_THROWS_AS(parse_descriptor("orthant(3) x"), InvalidArgument);
  CHECK_THROWS_AS(parse_descriptor("wedge2d(4)"), InvalidArgument);
  CHECK_THROWS_AS(parse_descriptor("subspace(4,3)"), InvalidArgument);
}

TEST_CASE("built cones match their catalog volumes") {
  const char* names[] = {"halfspace(3)", "orthant(3)", "wedge2d(1)", "wedge2d(pi)", "subspace(1,2)",
                         "product(wedge2d(2),halfline)"};
  std::uint64_t stream = 0;
  for (const char* name : names) {
    const ConeDescriptor desc = parse_descriptor(name);
    const PolyhedralCone c = build_cone(desc);
    CHECK(c.ambient_dim() == desc.ambient);
    const auto exact = exact_intrinsic_volumes(desc);
    const auto est = estimate_intrinsic_volumes(c, 100000, RandomStream(301, stream++));
    for (std::size_t k = 0; k < exact.size(); ++k) {
      const double p = exact[k];
      CHECK(std::abs(est[k].value - p) <= 4 * std::sqrt(p * (1 - p) / 100000) + 1e-12);
    }
  }
}
