#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conekit/measures.hpp"

namespace conekit {

/// Bounded weight f : [0, 1] -> R applied to generalized sines.
class WeightFunction {
 public:
  WeightFunction(std::function<double(double)> f, double bound, std::string name);

  static WeightFunction one();
  static WeightFunction t();
  static WeightFunction t_squared();
  /// [t >= c].
  static WeightFunction step(double c);
  /// "1", "t", "t^2" or "step(c)".
  static WeightFunction parse(const std::string& text);

  /// Throws InvalidArgument if |f(t)| exceeds the bound.
  double operator()(double t) const;
  double bound() const noexcept { return bound_; }
  const std::string& name() const noexcept { return name_; }
  bool is_constant_one() const noexcept { return name_ == "1"; }

 private:
  std::function<double(double)> f_;
  double bound_;
  std::string name_;
};

struct KinematicCheckReport {
  std::string name;
  Estimate lhs;
  double rhs = 0.0;
  double rhs_std_error = 0.0;  // 0 when the right side is exact
  double discrepancy_sigma = 0.0;
  std::uint64_t n_rotations = 0;
  std::uint64_t n_gaussians = 0;
  std::uint64_t discarded = 0;   // rotations or inner samples left out
  std::uint64_t violations = 0;  // almost-sure properties that failed
};

/// |lhs - rhs| / sqrt(se_lhs^2 + se_rhs^2); 0 or +inf when both errors vanish.
double discrepancy_sigma(double lhs, double lhs_se, double rhs, double rhs_se);

/// Options shared by the rotation-average checks.
struct KinematicOptions {
  std::uint64_t n_rot = 10000;
  std::uint64_t n_g = 1000;
  /// Samples per cone for right-hand sides estimated by Monte Carlo.
  std::uint64_t n_rhs = 1000000;
  unsigned workers = 1;
  /// Exact intrinsic volumes (or curvature measures) replacing the
  /// Monte Carlo right-hand side.
  std::optional<std::vector<double>> exact_c;
  std::optional<std::vector<double>> exact_d;
};

/// Global kinematic formula for every k = 1..d. Stream layout: substream 1
/// drives rotations (rotation r uses its substream r), 2 and 3 the right
/// side for C and D. Violations count rotations where C ∩ ϑD is neither
/// {o} nor a transverse intersection.
std::vector<KinematicCheckReport> check_global_kinematic_all(const PolyhedralCone& c, const PolyhedralCone& d,
                                                             const RandomStream& rs, const KinematicOptions& opt);
KinematicCheckReport check_global_kinematic(const PolyhedralCone& c, const PolyhedralCone& d, int k,
                                            const RandomStream& rs, const KinematicOptions& opt);

/// Local kinematic formula for every k = 1..d, with the same stream layout;
/// A = B = R^d reproduces the global numbers exactly.
std::vector<KinematicCheckReport> check_local_kinematic_all(const PolyhedralCone& c, const PolyhedralCone& d,
                                                            const ConicRegion& a, const ConicRegion& b,
                                                            const RandomStream& rs, const KinematicOptions& opt);
KinematicCheckReport check_local_kinematic(const PolyhedralCone& c, const PolyhedralCone& d, const ConicRegion& a,
                                           const ConicRegion& b, int k, const RandomStream& rs,
                                           const KinematicOptions& opt);

/// 2 Σ_k Σ_{i=2k+1}^{d} V_i(C) V_{d+2k+1-i}(D).
double strike_probability_formula(const std::vector<double>& c_volumes, const std::vector<double>& d_volumes);

/// A closed form evaluated at sampled intrinsic volumes.
struct FormulaEstimate {
  double value = 0.0;
  double std_error = 0.0;  // delta method over the multinomial volume estimates
  std::vector<double> c_volumes;
  std::vector<double> d_volumes;
  std::uint64_t n = 0;  // accepted samples per cone
};

/// strike_probability_formula at volumes of C and D sampled from substreams
/// 0 and 1 of `rs`.
FormulaEstimate strike_probability_sampled(const PolyhedralCone& c, const PolyhedralCone& d, std::uint64_t n,
                                           const RandomStream& rs, unsigned workers = 1);

struct StrikeResult {
  Estimate estimate;
  std::uint64_t violations = 0;  // C ∩ ϑD a nonzero subspace
  std::uint64_t discarded = 0;   // nonzero but not transverse (tangency within tolerance)
};

/// Fraction of Haar rotations with C ∩ ϑD ≠ {o}. Rotation r uses
/// rs.substream(r).
StrikeResult strike_probability_mc(const PolyhedralCone& c, const PolyhedralCone& d, std::uint64_t n_rot,
                                   const RandomStream& rs, unsigned workers = 1);

/// Mean of f([L_i, ϑL_j]) over Haar rotations, with L_i = ρ span(e_1..e_i)
/// and L_j = ρ span(e_1..e_j) for a fixed representative rotation ρ.
Estimate c_ij_constant(int d, int i, int j, const WeightFunction& f, std::uint64_t n_rot, const RandomStream& rs,
                       unsigned workers = 1, const Rotation* representative = nullptr);

struct WeightedOptions {
  KinematicOptions base;
  /// Rotations for the c_ij(f) estimate.
  std::uint64_t n_c = 100000;
};

/// Requires dim C + dim D > d. Substreams: 1 rotations, 2 and 3 the curvature
/// measures, 4 the constant c_ij(f).
KinematicCheckReport check_weighted_top(const PolyhedralCone& c, const PolyhedralCone& d, const ConicRegion& a,
                                        const ConicRegion& b, const WeightFunction& f, const RandomStream& rs,
                                        const WeightedOptions& opt);

/// Requires dim C + dim D < d. Same stream layout as check_weighted_top.
KinematicCheckReport check_weighted_sum(const PolyhedralCone& c, const PolyhedralCone& d, const WeightFunction& f,
                                        const RandomStream& rs, const WeightedOptions& opt);

}  // namespace conekit
