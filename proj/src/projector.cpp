#include <cmath>

#include "conekit/detail/cone_impl.hpp"

namespace conekit::detail {

namespace {

std::vector<double> row_major(const Matrix& columns) {
  // columns is d x n; store as n x d.
  std::vector<double> out(static_cast<std::size_t>(columns.size()));
  const auto d = columns.rows();
  for (Eigen::Index j = 0; j < columns.cols(); ++j)
    for (Eigen::Index i = 0; i < d; ++i) out[static_cast<std::size_t>(j * d + i)] = columns(i, j);
  return out;
}

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Projector::Projector(const ConeImpl& cone)
    : ambient_(cone.ambient),
      generators_(row_major(cone.generators)),
      n_generators_(static_cast<std::size_t>(cone.generators.cols())) {
  const auto& records = cone.face_records();
  faces_.reserve(records.size());
  for (const auto& rec : records) {
    FaceTable t;
    t.k = rec.dim;
    t.basis = row_major(rec.hull.basis());
    for (Eigen::Index i = 0; i < cone.normals.cols(); ++i)
      if (!rec.active[static_cast<std::size_t>(i)]) t.inactive.push_back(static_cast<int>(i));
    if (t.k > 0) {
      const Matrix aq = cone.normals.transpose() * rec.hull.basis();
      for (int i : t.inactive)
        for (int j = 0; j < t.k; ++j) t.aq.push_back(aq(i, j));
      const Matrix gq = cone.generators.transpose() * rec.hull.basis();
      for (Eigen::Index g = 0; g < gq.rows(); ++g)
        for (int j = 0; j < t.k; ++j) t.gq.push_back(gq(g, j));
    }
    faces_.push_back(std::move(t));
  }
}

bool Projector::accepts(const FaceTable& f, const double* x, const double* gx, double tol, double* c) const {
  const int d = ambient_;
  for (int j = 0; j < f.k; ++j) c[j] = dot(&f.basis[static_cast<std::size_t>(j * d)], x, d);
  // p in relint F: strict slack on every constraint not held at equality.
  for (std::size_t r = 0; r < f.inactive.size(); ++r)
    if (!(dot(&f.aq[r * static_cast<std::size_t>(f.k)], c, f.k) < -tol)) return false;
  // x - p in N(C, F): x - p is orthogonal to L(F), so it suffices that it is
  // in the polar, i.e. has nonpositive product with every generator of C.
  for (std::size_t g = 0; g < n_generators_; ++g) {
    const double gp = f.k > 0 ? dot(&f.gq[g * static_cast<std::size_t>(f.k)], c, f.k) : 0.0;
    if (gx[g] - gp > tol) return false;
  }
  return true;
}

int Projector::classify(const double* x, double* point) const {
  const int d = ambient_;
  thread_local std::vector<double> gx;
  thread_local std::vector<double> c;
  thread_local std::vector<double> c_hit;
  gx.resize(n_generators_);
  c.resize(static_cast<std::size_t>(d) + 1);
  c_hit.resize(static_cast<std::size_t>(d) + 1);

  const double norm = std::sqrt(dot(x, x, d));
  if (norm == 0.0) {
    if (point)
      for (int i = 0; i < d; ++i) point[i] = 0.0;
    return static_cast<int>(minimal_face_);
  }
  const double tol = kTolerance * norm;
  for (std::size_t g = 0; g < n_generators_; ++g) gx[g] = dot(&generators_[g * static_cast<std::size_t>(d)], x, d);

  int hit = kNone;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!accepts(faces_[f], x, gx.data(), tol, c.data())) continue;
    if (hit != kNone) return kAmbiguous;
    hit = static_cast<int>(f);
    std::copy(c.begin(), c.begin() + faces_[f].k, c_hit.begin());
  }
  if (hit >= 0 && point) {
    const auto& f = faces_[static_cast<std::size_t>(hit)];
    for (int i = 0; i < d; ++i) point[i] = 0.0;
    for (int j = 0; j < f.k; ++j)
      for (int i = 0; i < d; ++i) point[i] += c_hit[static_cast<std::size_t>(j)] * f.basis[static_cast<std::size_t>(j * d + i)];
  }
  return hit;
}

std::vector<std::size_t> Projector::accepting_faces(const double* x) const {
  const int d = ambient_;
  std::vector<double> gx(n_generators_);
  std::vector<double> c(static_cast<std::size_t>(d) + 1);
  const double norm = std::sqrt(dot(x, x, d));
  const double tol = kTolerance * norm;
  for (std::size_t g = 0; g < n_generators_; ++g) gx[g] = dot(&generators_[g * static_cast<std::size_t>(d)], x, d);
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < faces_.size(); ++f)
    if (accepts(faces_[f], x, gx.data(), tol, c.data())) out.push_back(f);
  return out;
}

}  // namespace conekit::detail
