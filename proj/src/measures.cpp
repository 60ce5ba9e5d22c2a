#include "conekit/measures.hpp"

#include <cmath>

#include "conekit/detail/cone_impl.hpp"
#include "conekit/errors.hpp"
#include "conekit/parallel.hpp"

namespace conekit {

Estimate proportion(std::uint64_t hits, std::uint64_t n, std::uint64_t discarded, const RandomStream& rs) {
  Estimate e;
  e.hits = hits;
  e.n_samples = n;
  e.n_discarded = discarded;
  e.seed = rs.seed();
  e.stream = rs.stream();
  if (n > 0) {
    e.value = static_cast<double>(hits) / static_cast<double>(n);
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n));
  }
  return e;
}

// ---------------------------------------------------------------- regions

ConicRegion::ConicRegion(int ambient, std::vector<PolyhedralCone> components, bool complement)
    : ambient_(ambient), components_(std::move(components)), complement_(complement) {
  rows_.reserve(components_.size());
  for (const auto& c : components_) {
    if (c.ambient_dim() != ambient_) throw InvalidArgument("ConicRegion: component ambient dimension mismatch");
    const Matrix& n = c.normals();
    std::vector<double> r(static_cast<std::size_t>(n.size()));
    for (Eigen::Index j = 0; j < n.cols(); ++j)
      for (Eigen::Index i = 0; i < n.rows(); ++i) r[static_cast<std::size_t>(j * n.rows() + i)] = n(i, j);
    rows_.push_back(std::move(r));
  }
}

ConicRegion::ConicRegion(const PolyhedralCone& c) : ConicRegion(c.ambient_dim(), {c}, false) {}

bool ConicRegion::contains(const double* x) const {
  const int d = ambient_;
  double norm2 = 0.0;
  for (int i = 0; i < d; ++i) norm2 += x[i] * x[i];
  const double tol = kTolerance * std::sqrt(norm2);
  bool in_union = false;
  for (const auto& rows : rows_) {
    bool inside = true;
    for (std::size_t off = 0; off < rows.size() && inside; off += static_cast<std::size_t>(d)) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += rows[off + static_cast<std::size_t>(i)] * x[i];
      inside = s <= tol;
    }
    if (inside) {
      in_union = true;
      break;
    }
  }
  return in_union != complement_;
}

ConicRegion ConicRegion::rotated(const Rotation& r) const {
  std::vector<PolyhedralCone> rc;
  rc.reserve(components_.size());
  for (const auto& c : components_) rc.push_back(rotate(c, r));
  return ConicRegion(ambient_, std::move(rc), complement_);
}

BiconicPredicate BiconicPredicate::always() {
  return BiconicPredicate([](const Vector&, const Vector&) { return true; });
}

BiconicPredicate BiconicPredicate::first_in(ConicRegion a) {
  return BiconicPredicate([a = std::move(a)](const Vector& x, const Vector&) { return a.contains(x); });
}

BiconicPredicate BiconicPredicate::orthogonal() {
  return BiconicPredicate(
      [](const Vector& x, const Vector& y) { return x.dot(y) <= kTolerance * x.norm() * y.norm(); });
}

bool scale_invariant(const BiconicPredicate& eta, const PolyhedralCone& c, RandomStream& rs, int trials) {
  static constexpr double kScales[] = {1e-3, 0.5, 3.0, 1e3};
  const auto& proj = c.projector();
  const int d = c.ambient_dim();
  Vector p(d);
  for (int t = 0; t < trials; ++t) {
    Vector x = sample_gaussian(d, rs);
    Vector y = sample_gaussian(d, rs);
    if (t % 2 == 0 && proj.classify(x.data(), p.data()) >= 0) {
      y = x - p;
      x = p;
    }
    const bool base = eta(x, y);
    for (double l : kScales)
      for (double m : kScales)
        if (eta(l * x, m * y) != base) return false;
  }
  return true;
}

// ---------------------------------------------------------------- tallies

SampleTally::SampleTally(const PolyhedralCone& c, const SampleRequest& request) : ambient(c.ambient_dim()) {
  const auto dims = static_cast<std::size_t>(ambient) + 1;
  by_dim.assign(dims, 0);
  region_by_dim.assign(request.regions.size(), std::vector<std::uint64_t>(dims, 0));
  predicate_by_dim.assign(request.predicates.size(), std::vector<std::uint64_t>(dims, 0));
  if (request.by_face) {
    by_face.assign(c.face_count(), 0);
    region_by_face.assign(request.regions.size(), std::vector<std::uint64_t>(c.face_count(), 0));
  }
}

namespace {

void add_into(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

}  // namespace

void SampleTally::merge(const SampleTally& o) {
  accepted += o.accepted;
  discarded += o.discarded;
  add_into(by_dim, o.by_dim);
  add_into(by_face, o.by_face);
  for (std::size_t r = 0; r < region_by_dim.size(); ++r) add_into(region_by_dim[r], o.region_by_dim[r]);
  for (std::size_t r = 0; r < region_by_face.size(); ++r) add_into(region_by_face[r], o.region_by_face[r]);
  for (std::size_t q = 0; q < predicate_by_dim.size(); ++q) add_into(predicate_by_dim[q], o.predicate_by_dim[q]);
}

SampleTally sample_projections_serial(const PolyhedralCone& c, const SampleRequest& request, std::uint64_t n,
                                      RandomStream& rs) {
  for (const auto& meet : request.regions)
    for (const auto& a : meet)
      if (a.ambient() != c.ambient_dim()) throw InvalidArgument("sample_projections: region dimension mismatch");
  SampleTally t(c, request);
  const auto& proj = c.projector();
  const int d = c.ambient_dim();
  Vector x(d);
  Vector p(d);
  Vector q(d);
  const bool need_q = !request.predicates.empty();
  for (std::uint64_t s = 0; s < n; ++s) {
    rs.fill_gaussian(std::span<double>(x.data(), static_cast<std::size_t>(d)));
    const int f = proj.classify(x.data(), p.data());
    if (f < 0) {
      ++t.discarded;
      continue;
    }
    ++t.accepted;
    const auto face = static_cast<std::size_t>(f);
    const auto k = static_cast<std::size_t>(proj.face_dim(face));
    ++t.by_dim[k];
    if (request.by_face) ++t.by_face[face];
    for (std::size_t r = 0; r < request.regions.size(); ++r) {
      bool in = true;
      for (const auto& a : request.regions[r])
        if (!a.contains(p.data())) {
          in = false;
          break;
        }
      if (!in) continue;
      ++t.region_by_dim[r][k];
      if (request.by_face) ++t.region_by_face[r][face];
    }
    if (need_q) {
      q = x - p;
      for (std::size_t j = 0; j < request.predicates.size(); ++j)
        if (request.predicates[j](p, q)) ++t.predicate_by_dim[j][k];
    }
  }
  return t;
}

SampleTally sample_projections(const PolyhedralCone& c, const SampleRequest& request, std::uint64_t n,
                               const RandomStream& rs, unsigned workers) {
  c.projector();  // build the tables once, before the workers start
  const std::uint64_t batches = batch_count(n);
  std::vector<SampleTally> parts(batches);
  parallel_for(batches, workers, [&](std::uint64_t b) {
    RandomStream sub = rs.substream(b);
    const std::uint64_t len = std::min(kBatchSize, n - b * kBatchSize);
    parts[b] = sample_projections_serial(c, request, len, sub);
  });
  SampleTally total(c, request);
  for (const auto& p : parts) total.merge(p);
  return total;
}

namespace {

std::vector<Estimate> per_dim(const std::vector<std::uint64_t>& counts, const SampleTally& t, const RandomStream& rs) {
  std::vector<Estimate> out;
  out.reserve(counts.size());
  for (auto h : counts) out.push_back(proportion(h, t.accepted, t.discarded, rs));
  return out;
}

}  // namespace

std::vector<Estimate> volumes_from(const SampleTally& t, const RandomStream& rs) { return per_dim(t.by_dim, t, rs); }

std::vector<Estimate> curvature_from(const SampleTally& t, std::size_t region, const RandomStream& rs) {
  return per_dim(t.region_by_dim.at(region), t, rs);
}

std::vector<Estimate> support_from(const SampleTally& t, std::size_t predicate, const RandomStream& rs) {
  return per_dim(t.predicate_by_dim.at(predicate), t, rs);
}

// ---------------------------------------------------------------- estimators

std::vector<Estimate> estimate_intrinsic_volumes(const PolyhedralCone& c, std::uint64_t n, const RandomStream& rs,
                                                 unsigned workers) {
  if (n < 1) throw InvalidArgument("estimate_intrinsic_volumes: n must be >= 1");
  return volumes_from(sample_projections(c, {}, n, rs, workers), rs);
}

Estimate bernoulli_trials(std::uint64_t n, const RandomStream& rs, unsigned workers,
                          const std::function<bool(RandomStream&)>& trial) {
  const std::uint64_t batches = batch_count(n);
  std::vector<std::uint64_t> hits(batches, 0);
  parallel_for(batches, workers, [&](std::uint64_t b) {
    const std::uint64_t end = std::min(n, (b + 1) * kBatchSize);
    for (std::uint64_t i = b * kBatchSize; i < end; ++i) {
      RandomStream sub = rs.substream(i);
      if (trial(sub)) ++hits[b];
    }
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return proportion(total, n, 0, rs);
}

FaceWeightEstimate estimate_face_weight(const PolyhedralCone& c, const Face& f, std::uint64_t n,
                                        const RandomStream& rs, unsigned workers) {
  if (!f.belongs_to(c)) throw InvalidArgument("estimate_face_weight: face does not belong to this cone");
  if (n < 1) throw InvalidArgument("estimate_face_weight: n must be >= 1");
  FaceWeightEstimate out;

  const RandomStream s0 = rs.substream(0);
  SampleRequest req;
  req.by_face = true;
  const SampleTally t = sample_projections(c, req, n, s0, workers);
  out.weight = proportion(t.by_face[f.index()], t.accepted, t.discarded, s0);

  // F = C ∩ L(F), so β is the Gaussian mass of C inside L(F).
  const Matrix& qf = f.hull().basis();
  const RandomStream s1 = rs.substream(1);
  out.internal_angle = bernoulli_trials(n, s1, workers, [&](RandomStream& r) {
    if (qf.cols() == 0) return true;
    const Vector y = qf * sample_gaussian(static_cast<int>(qf.cols()), r);
    return c.contains(y);
  });

  // N(C, F) = C° ∩ L(F)^perp.
  const PolyhedralCone polar = dual(c);
  const Matrix qn = f.hull().complement().basis();
  const RandomStream s2 = rs.substream(2);
  out.external_angle = bernoulli_trials(n, s2, workers, [&](RandomStream& r) {
    if (qn.cols() == 0) return true;
    const Vector y = qn * sample_gaussian(static_cast<int>(qn.cols()), r);
    return polar.contains(y);
  });
  return out;
}

std::vector<Estimate> estimate_curvature_measure(const PolyhedralCone& c, const ConicRegion& a, std::uint64_t n,
                                                 const RandomStream& rs, unsigned workers) {
  if (a.ambient() != c.ambient_dim()) throw InvalidArgument("estimate_curvature_measure: region dimension mismatch");
  if (n < 1) throw InvalidArgument("estimate_curvature_measure: n must be >= 1");
  SampleRequest req;
  req.regions.push_back({a});
  return curvature_from(sample_projections(c, req, n, rs, workers), 0, rs);
}

std::vector<Estimate> estimate_support_measure(const PolyhedralCone& c, const BiconicPredicate& eta,
                                               std::uint64_t n, const RandomStream& rs, unsigned workers) {
  if (n < 1) throw InvalidArgument("estimate_support_measure: n must be >= 1");
  RandomStream check = rs.substream(~std::uint64_t{0});
  if (!scale_invariant(eta, c, check))
    throw InvalidArgument("estimate_support_measure: predicate is not invariant under positive scaling");
  SampleRequest req;
  req.predicates.push_back(eta);
  return support_from(sample_projections(c, req, n, rs, workers), 0, rs);
}

double linear_std_error(const std::vector<double>& w, const std::vector<double>& p, std::uint64_t n) {
  if (w.size() != p.size()) throw InvalidArgument("linear_std_error: size mismatch");
  if (n == 0) return 0.0;
  double sq = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sq += w[i] * w[i] * p[i];
    lin += w[i] * p[i];
  }
  return std::sqrt(std::max(0.0, sq - lin * lin) / static_cast<double>(n));
}

}  // namespace conekit
