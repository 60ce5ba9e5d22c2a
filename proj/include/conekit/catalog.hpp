#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "conekit/cone.hpp"

namespace conekit {

/// Special cones with closed-form intrinsic volumes.
///
///   subspace(j, d)   span(e_1..e_j) in R^d
///   halfspace(d)     {x_1 <= 0}
///   orthant(d)       nonnegative orthant
///   wedge2d(a)       planar cone between angles 0 and a, 0 < a <= pi
///   product(A, B)    direct product
///
/// Aliases: halfline = orthant(1), quadrant = orthant(2),
/// halfplane = halfspace(2), whole(d) = subspace(d, d), zero(d) = subspace(0, d).
struct ConeDescriptor {
  enum class Kind { subspace, halfspace, orthant, wedge2d, product };

  Kind kind = Kind::orthant;
  int ambient = 1;
  int sub_dim = 0;     // subspace only
  double angle = 0.0;  // wedge2d only
  std::vector<ConeDescriptor> factors;

  static ConeDescriptor subspace(int j, int d);
  static ConeDescriptor halfspace(int d);
  static ConeDescriptor orthant(int d);
  static ConeDescriptor wedge2d(double angle);
  static ConeDescriptor product(ConeDescriptor a, ConeDescriptor b);
};

/// Accepts numbers and simple pi expressions for angles: 1.2, pi, pi/2,
/// 3*pi/4, 0.25*pi. Throws InvalidArgument on anything else.
ConeDescriptor parse_descriptor(std::string_view text);
std::string to_string(const ConeDescriptor& desc);

std::vector<double> exact_intrinsic_volumes(const ConeDescriptor& desc);
PolyhedralCone build_cone(const ConeDescriptor& desc);

}  // namespace conekit
