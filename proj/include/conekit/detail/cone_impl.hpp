#pragma once

#include <boost/dynamic_bitset.hpp>

#include <memory>
#include <mutex>
#include <vector>

#include "conekit/linalg.hpp"

namespace conekit::detail {

class Projector;

struct FaceRecord {
  boost::dynamic_bitset<> active;      // over normals
  boost::dynamic_bitset<> generators;  // over generators
  std::vector<int> active_indices;
  std::vector<int> generator_indices;
  Subspace hull;
  int dim = 0;
};

struct ConeImpl {
  int ambient = 0;
  int dim = 0;
  int lineality_dim = 0;
  int facets = 0;
  int rays = 0;
  Matrix normals;
  Matrix generators;
  Subspace lineality;
  Subspace hull;

  ConeImpl();
  ~ConeImpl();

  const std::vector<FaceRecord>& face_records() const;
  const Projector& projector() const;

 private:
  mutable std::once_flag lattice_once_;
  mutable std::vector<FaceRecord> records_;
  mutable std::once_flag projector_once_;
  mutable std::unique_ptr<Projector> projector_;
};

/// Precomputed face-decomposition classifier. For a point x it tests every
/// face F: p = orthogonal projection of x onto L(F) must lie in relint F and
/// x - p must lie in N(C, F), both with slack kTolerance * |x|. Exactly one
/// face accepts away from a null set.
class Projector {
 public:
  static constexpr int kNone = -1;
  static constexpr int kAmbiguous = -2;

  explicit Projector(const ConeImpl& cone);

  int ambient() const noexcept { return ambient_; }
  std::size_t face_count() const noexcept { return faces_.size(); }
  int face_dim(std::size_t f) const noexcept { return faces_[f].k; }

  /// Accepted face index, kNone or kAmbiguous. When a face is accepted and
  /// `point` is non-null, the projection is written to point[0..d).
  int classify(const double* x, double* point) const;
  /// Every accepting face index (slow path for diagnostics).
  std::vector<std::size_t> accepting_faces(const double* x) const;

 private:
  struct FaceTable {
    int k = 0;
    std::vector<double> basis;  // k x d, row-major
    std::vector<int> inactive;  // normals not held at equality
    std::vector<double> aq;     // |inactive| x k
    std::vector<double> gq;     // generators x k
  };

  bool accepts(const FaceTable& f, const double* x, const double* gx, double tol, double* c) const;

  int ambient_;
  std::vector<double> generators_;  // g x d, row-major
  std::size_t n_generators_ = 0;
  std::size_t minimal_face_ = 0;
  std::vector<FaceTable> faces_;
};

}  // namespace conekit::detail
