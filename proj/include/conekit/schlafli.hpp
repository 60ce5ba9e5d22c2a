#pragma once

#include <cstdint>
#include <vector>

#include "conekit/measures.hpp"

namespace conekit {

/// Number of cells of n central hyperplanes in general position in R^d:
/// 2 Σ_{r<d} binom(n-1, r). By convention n = 0 gives 1 (the whole space).
std::uint64_t schlafli_count(int n, int d);

/// Central arrangement {u_i^perp}. Cell c is ∩_i {x : ε_ci <u_i, x> <= 0}
/// with ε = sign_vectors[c].
struct Arrangement {
  int ambient = 0;
  std::vector<Vector> normals;
  std::vector<PolyhedralCone> cells;
  std::vector<std::vector<int>> sign_vectors;

  /// Index of the cell whose interior contains x, or -1 if x is within
  /// tolerance of some hyperplane.
  int locate(const Vector& x) const;
};

/// Every subset of at most d normals is linearly independent, with rank
/// decided at tolerance kTolerance.
bool in_general_position(int d, const std::vector<Vector>& normals);

/// Incremental insertion: each new hyperplane splits the cells it crosses.
/// Throws DegenerateInput unless the normals are in general position.
Arrangement enumerate_cells(int d, const std::vector<Vector>& normals);

struct SchlafliSample {
  Arrangement arrangement;
  std::size_t chosen_index = 0;
  int redraws = 0;

  const PolyhedralCone& cone() const { return arrangement.cells[chosen_index]; }
};

/// n uniform normals, then a uniformly chosen cell. Degenerate draws are
/// redrawn up to `retry_budget` times before RetryBudgetExceeded.
SchlafliSample sample_typical_cone(int n, int d, RandomStream& rs, int retry_budget = 3);

/// (1 / C(n,d)) Σ_{s=0}^{min(n, d-k)} binom(n, s) Φ_{k+s}; `curvatures` is
/// indexed 0..d.
double expected_curvature_formula(const std::vector<double>& curvatures, int n, int k);

/// a_{n,j} = Σ_{k=0}^{⌊(j-1)/2⌋} binom(n, j-2k-1).
std::uint64_t intersection_coefficient(int n, int j);

/// P{C ∩ S_n ≠ {o}} = (2 / C(n,d)) Σ_{j=1}^{d} a_{n,j} V_j(C); `volumes` is
/// indexed 0..d.
double fixed_intersection_prob(const std::vector<double>& volumes, int n);

/// P{S_n ∩ T_m ≠ {o}} for independent typical cones.
double pair_intersection_prob(int n, int m, int d);

/// E V_i(S_n) = binom(n, d-i) / C(n,d) for 1 <= i <= d.
double expected_schlafli_volume(int n, int d, int i);

struct SchlafliRun {
  std::vector<Estimate> estimates;
  std::uint64_t redraws = 0;
  std::uint64_t inner_discarded = 0;
};

/// E Φ̂_k(C ∩ S_n, A) for k = 0..d. Draw r uses rs.substream(r).
SchlafliRun schlafli_curvature_mc(const PolyhedralCone& c, const ConicRegion& a, int n, std::uint64_t n_draws,
                                  std::uint64_t n_g, const RandomStream& rs, unsigned workers = 1);
/// E V̂_i(S_n) for i = 0..d.
SchlafliRun schlafli_volume_mc(int n, int d, std::uint64_t n_draws, std::uint64_t n_g, const RandomStream& rs,
                               unsigned workers = 1);
/// Frequency of C ∩ S_n ≠ {o}.
SchlafliRun fixed_intersection_mc(const PolyhedralCone& c, int n, std::uint64_t n_draws, const RandomStream& rs,
                                  unsigned workers = 1);
/// Frequency of S_n ∩ T_m ≠ {o}.
SchlafliRun pair_intersection_mc(int n, int m, int d, std::uint64_t n_draws, const RandomStream& rs,
                                 unsigned workers = 1);

}  // namespace conekit
