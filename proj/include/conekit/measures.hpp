#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conekit/cone.hpp"

namespace conekit {

/// Monte Carlo result. `n_samples` counts the accepted samples that form the
/// denominator; ambiguous samples are excluded and counted in `n_discarded`.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_discarded = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// hits / n with the binomial standard error sqrt(p(1-p)/n).
Estimate proportion(std::uint64_t hits, std::uint64_t n, std::uint64_t discarded, const RandomStream& rs);

/// Conic test set: the union of `components`, or its complement.
class ConicRegion {
 public:
  ConicRegion() = default;
  ConicRegion(int ambient, std::vector<PolyhedralCone> components, bool complement = false);
  explicit ConicRegion(const PolyhedralCone& c);

  static ConicRegion whole(int ambient) { return ConicRegion(ambient, {}, true); }

  int ambient() const noexcept { return ambient_; }
  const std::vector<PolyhedralCone>& components() const noexcept { return components_; }
  bool complement() const noexcept { return complement_; }
  bool is_whole() const noexcept { return complement_ && components_.empty(); }

  bool contains(const double* x) const;
  bool contains(const Vector& x) const { return contains(x.data()); }
  /// ϑA.
  ConicRegion rotated(const Rotation& r) const;

 private:
  int ambient_ = 0;
  std::vector<PolyhedralCone> components_;
  bool complement_ = false;
  std::vector<std::vector<double>> rows_;  // per component: normals, row-major
};

/// Membership test on pairs (x, y), required to be invariant under
/// independent positive scaling of x and y.
class BiconicPredicate {
 public:
  using Evaluator = std::function<bool(const Vector&, const Vector&)>;

  explicit BiconicPredicate(Evaluator f) : f_(std::move(f)) {}

  static BiconicPredicate always();
  /// [x ∈ A].
  static BiconicPredicate first_in(ConicRegion a);
  /// [<x, y> <= 1e-9 |x| |y|].
  static BiconicPredicate orthogonal();

  bool operator()(const Vector& x, const Vector& y) const { return f_(x, y); }

 private:
  Evaluator f_;
};

/// Scaling spot-check on Moreau pairs of `c` and on raw Gaussian pairs.
bool scale_invariant(const BiconicPredicate& eta, const PolyhedralCone& c, RandomStream& rs, int trials = 64);

/// What to record for each classified Gaussian sample. Every region entry is
/// the intersection of its listed regions.
struct SampleRequest {
  std::vector<std::vector<ConicRegion>> regions;
  std::vector<BiconicPredicate> predicates;
  bool by_face = false;
};

/// Integer counts from one shared pass of classified projections.
struct SampleTally {
  int ambient = 0;
  std::uint64_t accepted = 0;
  std::uint64_t discarded = 0;
  std::vector<std::uint64_t> by_dim;                        // [k]
  std::vector<std::uint64_t> by_face;                       // [face]
  std::vector<std::vector<std::uint64_t>> region_by_dim;    // [region][k]
  std::vector<std::vector<std::uint64_t>> region_by_face;   // [region][face]
  std::vector<std::vector<std::uint64_t>> predicate_by_dim; // [predicate][k]

  SampleTally() = default;
  SampleTally(const PolyhedralCone& c, const SampleRequest& request);
  void merge(const SampleTally& other);
};

/// n Gaussian samples in batches (batch b draws from rs.substream(b)).
/// Results do not depend on `workers`.
SampleTally sample_projections(const PolyhedralCone& c, const SampleRequest& request, std::uint64_t n,
                               const RandomStream& rs, unsigned workers = 1);
/// n samples drawn sequentially from `rs`, for nested loops.
SampleTally sample_projections_serial(const PolyhedralCone& c, const SampleRequest& request, std::uint64_t n,
                                      RandomStream& rs);

std::vector<Estimate> volumes_from(const SampleTally& t, const RandomStream& rs);
std::vector<Estimate> curvature_from(const SampleTally& t, std::size_t region, const RandomStream& rs);
std::vector<Estimate> support_from(const SampleTally& t, std::size_t predicate, const RandomStream& rs);

std::vector<Estimate> estimate_intrinsic_volumes(const PolyhedralCone& c, std::uint64_t n, const RandomStream& rs,
                                                 unsigned workers = 1);

struct FaceWeightEstimate {
  Estimate weight;          // v_F(C)
  Estimate internal_angle;  // β(o, F), sampled in L(F)
  Estimate external_angle;  // γ(F, C), sampled in L(F)^perp
};

/// Substreams 0, 1, 2 of `rs` feed the three estimates.
FaceWeightEstimate estimate_face_weight(const PolyhedralCone& c, const Face& f, std::uint64_t n,
                                        const RandomStream& rs, unsigned workers = 1);

std::vector<Estimate> estimate_curvature_measure(const PolyhedralCone& c, const ConicRegion& a, std::uint64_t n,
                                                 const RandomStream& rs, unsigned workers = 1);

/// Throws InvalidArgument if `eta` fails the scaling spot-check.
std::vector<Estimate> estimate_support_measure(const PolyhedralCone& c, const BiconicPredicate& eta,
                                               std::uint64_t n, const RandomStream& rs, unsigned workers = 1);

/// Standard error of Σ w_i p̂_i when p̂ are multinomial cell fractions from n
/// samples: sqrt((Σ w_i² p_i - (Σ w_i p_i)²) / n). Zero when n = 0.
double linear_std_error(const std::vector<double>& w, const std::vector<double>& p, std::uint64_t n);

/// Fraction of n independent Bernoulli trials that succeed. Trial i draws
/// from rs.substream(i).
Estimate bernoulli_trials(std::uint64_t n, const RandomStream& rs, unsigned workers,
                          const std::function<bool(RandomStream&)>& trial);

}  // namespace conekit
