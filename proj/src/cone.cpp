#include "conekit/cone.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "conekit/detail/cone_impl.hpp"
#include "conekit/double_description.hpp"
#include "conekit/errors.hpp"

namespace conekit {

namespace detail {

ConeImpl::ConeImpl() = default;
ConeImpl::~ConeImpl() = default;

namespace {

// Faces are closed sets of the constraint/generator incidence relation. Start
// from the closure of the empty active set (the cone itself) and descend by
// adding one constraint at a time; every face is reached this way.
std::vector<FaceRecord> build_lattice(const ConeImpl& c) {
  const auto m = static_cast<std::size_t>(c.normals.cols());
  const auto g = static_cast<std::size_t>(c.generators.cols());
  std::vector<boost::dynamic_bitset<>> gens_on(m, boost::dynamic_bitset<>(g));
  std::vector<boost::dynamic_bitset<>> cons_on(g, boost::dynamic_bitset<>(m));
  if (m > 0 && g > 0) {
    const Matrix inc = c.normals.transpose() * c.generators;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < g; ++j)
        if (std::abs(inc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) <= kTolerance) {
          gens_on[i][j] = true;
          cons_on[j][i] = true;
        }
  }

  auto close = [&](const boost::dynamic_bitset<>& gens) {
    boost::dynamic_bitset<> active(m);
    active.set();
    for (auto j = gens.find_first(); j != boost::dynamic_bitset<>::npos; j = gens.find_next(j)) active &= cons_on[j];
    return active;
  };

  boost::dynamic_bitset<> all_gens(g);
  all_gens.set();
  std::map<boost::dynamic_bitset<>, boost::dynamic_bitset<>> found;  // active -> generators
  std::vector<boost::dynamic_bitset<>> queue;
  {
    auto active = close(all_gens);
    found.emplace(active, all_gens);
    queue.push_back(active);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto active = queue[head];
    const auto gens = found.at(active);
    for (std::size_t i = 0; i < m; ++i) {
      if (active[i]) continue;
      boost::dynamic_bitset<> sub = gens & gens_on[i];
      auto next = close(sub);
      if (found.emplace(next, sub).second) queue.push_back(next);
    }
  }

  std::vector<FaceRecord> out;
  out.reserve(found.size());
  for (const auto& [active, gens] : found) {
    FaceRecord r;
    r.active = active;
    r.generators = gens;
    for (auto i = active.find_first(); i != boost::dynamic_bitset<>::npos; i = active.find_next(i))
      r.active_indices.push_back(static_cast<int>(i));
    Matrix cols(c.ambient, static_cast<Eigen::Index>(gens.count()));
    Eigen::Index col = 0;
    for (auto j = gens.find_first(); j != boost::dynamic_bitset<>::npos; j = gens.find_next(j)) {
      r.generator_indices.push_back(static_cast<int>(j));
      cols.col(col++) = c.generators.col(static_cast<Eigen::Index>(j));
    }
    r.hull = orthonormal_basis(cols);
    r.dim = r.hull.dim();
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const FaceRecord& a, const FaceRecord& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.active > b.active;
  });
  return out;
}

}  // namespace

const std::vector<FaceRecord>& ConeImpl::face_records() const {
  std::call_once(lattice_once_, [this] { records_ = build_lattice(*this); });
  return records_;
}

const Projector& ConeImpl::projector() const {
  std::call_once(projector_once_, [this] { projector_ = std::make_unique<Projector>(*this); });
  return *projector_;
}

}  // namespace detail

PolyhedralCone make_cone(std::shared_ptr<const detail::ConeImpl> impl) {
  PolyhedralCone c;
  c.impl_ = std::move(impl);
  return c;
}

namespace {

Matrix stack_columns(int ambient, std::span<const Vector> vs, const char* who) {
  Matrix m(ambient, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].size() != ambient) throw InvalidArgument(std::string(who) + ": inconsistent vector dimensions");
    m.col(static_cast<Eigen::Index>(i)) = vs[i];
  }
  return m;
}

PolyhedralCone assemble(int ambient, const DoubleDescription& primal, const DoubleDescription& polar) {
  auto impl = std::make_shared<detail::ConeImpl>();
  impl->ambient = ambient;
  impl->generators = primal.generators();
  impl->normals = polar.generators();
  impl->rays = static_cast<int>(primal.rays().size());
  impl->facets = static_cast<int>(polar.rays().size());
  impl->lineality = Subspace(ambient, primal.lineality());
  impl->lineality_dim = impl->lineality.dim();
  impl->hull = orthonormal_basis(impl->generators);
  impl->dim = impl->hull.dim();
  return make_cone(std::move(impl));
}

void check_nonzero(const Matrix& m, const char* who) {
  for (Eigen::Index i = 0; i < m.cols(); ++i)
    if (!(m.col(i).norm() > 0.0)) throw InvalidArgument(std::string(who) + ": zero vector");
}

}  // namespace

int PolyhedralCone::ambient_dim() const { return impl_->ambient; }
int PolyhedralCone::dim() const { return impl_->dim; }
int PolyhedralCone::lineality_dim() const { return impl_->lineality_dim; }
const Matrix& PolyhedralCone::normals() const { return impl_->normals; }
const Matrix& PolyhedralCone::generators() const { return impl_->generators; }
int PolyhedralCone::facet_count() const { return impl_->facets; }
int PolyhedralCone::ray_count() const { return impl_->rays; }
const Subspace& PolyhedralCone::lineality() const { return impl_->lineality; }
const Subspace& PolyhedralCone::linear_hull() const { return impl_->hull; }

bool PolyhedralCone::contains(const Vector& x, double tol) const {
  if (x.size() != ambient_dim()) throw InvalidArgument("contains: dimension mismatch");
  if (normals().cols() == 0) return true;
  return (normals().transpose() * x).maxCoeff() <= tol * x.norm();
}

bool PolyhedralCone::contains(const PolyhedralCone& other, double tol) const {
  if (other.ambient_dim() != ambient_dim()) throw InvalidArgument("contains: dimension mismatch");
  const Matrix& g = other.generators();
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    if (!contains(Vector(g.col(j)), tol)) return false;
  return true;
}

std::vector<Face> PolyhedralCone::faces() const {
  const auto& records = impl_->face_records();
  std::vector<Face> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) out.emplace_back(impl_, i);
  return out;
}

std::size_t PolyhedralCone::face_count() const { return impl_->face_records().size(); }

const detail::Projector& PolyhedralCone::projector() const { return impl_->projector(); }

Face::Face(std::shared_ptr<const detail::ConeImpl> parent, std::size_t index)
    : parent_(std::move(parent)), index_(index) {}

int Face::dim() const { return parent_->face_records()[index_].dim; }
const std::vector<int>& Face::active_set() const { return parent_->face_records()[index_].active_indices; }
const std::vector<int>& Face::generator_indices() const {
  return parent_->face_records()[index_].generator_indices;
}
const Subspace& Face::hull() const { return parent_->face_records()[index_].hull; }
PolyhedralCone Face::parent() const { return make_cone(parent_); }

PolyhedralCone Face::as_cone() const {
  const auto& idx = generator_indices();
  Matrix g(parent_->ambient, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = parent_->generators.col(idx[j]);
  return cone_from_generators(parent_->ambient, g);
}

bool Face::relint_contains(const Vector& x) const {
  const auto& rec = parent_->face_records()[index_];
  const double scale = x.norm();
  if (!rec.hull.contains(x)) return false;
  const Matrix& n = parent_->normals;
  for (Eigen::Index i = 0; i < n.cols(); ++i) {
    if (rec.active[static_cast<std::size_t>(i)]) continue;
    if (!(n.col(i).dot(x) < -kTolerance * scale)) return false;
  }
  return true;
}

PolyhedralCone cone_from_halfspaces(int ambient, const Matrix& normals) {
  if (ambient < 1) throw InvalidArgument("cone_from_halfspaces: ambient dimension must be >= 1");
  if (normals.cols() > 0 && normals.rows() != ambient)
    throw InvalidArgument("cone_from_halfspaces: inconsistent vector dimensions");
  check_nonzero(normals, "cone_from_halfspaces");
  DoubleDescription primal = halfspaces_to_generators(ambient, normals);
  DoubleDescription polar = halfspaces_to_generators(ambient, primal.generators());
  return assemble(ambient, primal, polar);
}

PolyhedralCone cone_from_double_description(const DoubleDescription& primal) {
  DoubleDescription polar = halfspaces_to_generators(primal.ambient(), primal.generators());
  return assemble(primal.ambient(), primal, polar);
}

PolyhedralCone cone_from_halfspaces(int ambient, std::span<const Vector> normals) {
  return cone_from_halfspaces(ambient, stack_columns(ambient, normals, "cone_from_halfspaces"));
}

PolyhedralCone cone_from_generators(int ambient, const Matrix& gens) {
  if (ambient < 1) throw InvalidArgument("cone_from_generators: ambient dimension must be >= 1");
  if (gens.cols() > 0 && gens.rows() != ambient)
    throw InvalidArgument("cone_from_generators: inconsistent vector dimensions");
  Matrix nonzero(ambient, gens.cols());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < gens.cols(); ++j)
    if (gens.col(j).norm() > 0.0) nonzero.col(k++) = gens.col(j);
  DoubleDescription polar = halfspaces_to_generators(ambient, nonzero.leftCols(k));
  DoubleDescription primal = halfspaces_to_generators(ambient, polar.generators());
  return assemble(ambient, primal, polar);
}

PolyhedralCone cone_from_generators(int ambient, std::span<const Vector> gens) {
  return cone_from_generators(ambient, stack_columns(ambient, gens, "cone_from_generators"));
}

PolyhedralCone convert_representation(const ConeLiteral& literal) {
  if (!literal.halfspaces && !literal.generators)
    throw InvalidArgument("convert_representation: literal needs halfspaces or generators");
  if (literal.halfspaces) {
    PolyhedralCone c = cone_from_halfspaces(literal.dim, *literal.halfspaces);
    if (literal.generators) {
      PolyhedralCone v = cone_from_generators(literal.dim, *literal.generators);
      if (!same_set(c, v))
        throw InvalidArgument("convert_representation: halfspaces and generators describe different cones");
    }
    return c;
  }
  return cone_from_generators(literal.dim, *literal.generators);
}

PolyhedralCone whole_space(int ambient) { return cone_from_halfspaces(ambient, Matrix(ambient, 0)); }
PolyhedralCone zero_cone(int ambient) { return cone_from_generators(ambient, Matrix(ambient, 0)); }

PolyhedralCone subspace_cone(const Subspace& l) {
  Matrix g(l.ambient(), 2 * l.dim());
  g << l.basis(), -l.basis();
  return cone_from_generators(l.ambient(), g);
}

PolyhedralCone dual(const PolyhedralCone& c) {
  const auto& src = *c.impl();
  auto impl = std::make_shared<detail::ConeImpl>();
  impl->ambient = src.ambient;
  impl->normals = src.generators;
  impl->generators = src.normals;
  impl->facets = src.rays;
  impl->rays = src.facets;
  impl->lineality = src.hull.complement();
  impl->lineality_dim = impl->lineality.dim();
  impl->hull = src.lineality.complement();
  impl->dim = impl->hull.dim();
  return make_cone(std::move(impl));
}

std::vector<Face> faces(const PolyhedralCone& c, std::optional<int> k) {
  std::vector<Face> all = c.faces();
  if (!k) return all;
  std::vector<Face> out;
  for (auto& f : all)
    if (f.dim() == *k) out.push_back(f);
  return out;
}

PolyhedralCone normal_cone(const PolyhedralCone& c, const Face& f) {
  if (!f.belongs_to(c)) throw InvalidArgument("normal_cone: face does not belong to this cone");
  const auto& idx = f.active_set();
  Matrix g(c.ambient_dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = c.normals().col(idx[j]);
  return cone_from_generators(c.ambient_dim(), g);
}

PolyhedralCone intersect(const PolyhedralCone& c, const PolyhedralCone& d) {
  if (c.ambient_dim() != d.ambient_dim()) throw InvalidArgument("intersect: ambient dimension mismatch");
  Matrix n(c.ambient_dim(), c.normals().cols() + d.normals().cols());
  n << c.normals(), d.normals();
  return cone_from_halfspaces(c.ambient_dim(), n);
}

PolyhedralCone conic_sum(const PolyhedralCone& c, const PolyhedralCone& d) {
  if (c.ambient_dim() != d.ambient_dim()) throw InvalidArgument("conic_sum: ambient dimension mismatch");
  Matrix g(c.ambient_dim(), c.generators().cols() + d.generators().cols());
  g << c.generators(), d.generators();
  return cone_from_generators(c.ambient_dim(), g);
}

PolyhedralCone direct_product(const PolyhedralCone& c, const PolyhedralCone& d) {
  const int d1 = c.ambient_dim();
  const int d2 = d.ambient_dim();
  Matrix n = Matrix::Zero(d1 + d2, c.normals().cols() + d.normals().cols());
  n.topLeftCorner(d1, c.normals().cols()) = c.normals();
  n.bottomRightCorner(d2, d.normals().cols()) = d.normals();
  return cone_from_halfspaces(d1 + d2, n);
}

PolyhedralCone embed(const PolyhedralCone& c, int ambient) {
  if (ambient < c.ambient_dim()) throw InvalidArgument("embed: target dimension too small");
  if (ambient == c.ambient_dim()) return c;
  return direct_product(c, zero_cone(ambient - c.ambient_dim()));
}

PolyhedralCone rotate(const PolyhedralCone& c, const Rotation& r) {
  if (r.dim() != c.ambient_dim()) throw InvalidArgument("rotate: dimension mismatch");
  const auto& src = *c.impl();
  auto impl = std::make_shared<detail::ConeImpl>();
  impl->ambient = src.ambient;
  impl->dim = src.dim;
  impl->lineality_dim = src.lineality_dim;
  impl->facets = src.facets;
  impl->rays = src.rays;
  impl->normals = r.matrix() * src.normals;
  impl->generators = r.matrix() * src.generators;
  impl->lineality = src.lineality.rotated(r.matrix());
  impl->hull = src.hull.rotated(r.matrix());
  return make_cone(std::move(impl));
}

bool same_set(const PolyhedralCone& a, const PolyhedralCone& b, double tol) {
  return a.ambient_dim() == b.ambient_dim() && a.contains(b, tol) && b.contains(a, tol);
}

bool general_position(const Subspace& l1, const Subspace& l2) {
  if (l1.ambient() != l2.ambient()) throw InvalidArgument("general_position: ambient dimension mismatch");
  const int expected = std::max(0, l1.dim() + l2.dim() - l1.ambient());
  return intersect(l1, l2).dim() == expected;
}

namespace {

bool strictly_inside_facets(const PolyhedralCone& c, const Vector& x) {
  const double scale = x.norm();
  for (int i = 0; i < c.facet_count(); ++i)
    if (!(c.normals().col(i).dot(x) < -kTolerance * scale)) return false;
  return true;
}

}  // namespace

bool relative_interiors_meet(const PolyhedralCone& c, const PolyhedralCone& d) {
  return relative_interiors_meet(c, d, intersect(c, d));
}

bool relative_interiors_meet(const PolyhedralCone& c, const PolyhedralCone& d, const PolyhedralCone& e) {
  // Each facet constraint of C or D is either identically zero on E = C ∩ D
  // or strictly negative on relint E, so one relint point of E decides it.
  Vector x = Vector::Zero(e.ambient_dim());
  for (int j = 0; j < e.ray_count(); ++j) x += e.generators().col(j);
  return strictly_inside_facets(c, x) && strictly_inside_facets(d, x);
}

PositionFlags position_predicates(const PolyhedralCone& c, const PolyhedralCone& d) {
  if (c.ambient_dim() != d.ambient_dim()) throw InvalidArgument("position_predicates: ambient dimension mismatch");
  PositionFlags f;
  f.general_position = general_position(c.linear_hull(), d.linear_hull());
  f.c_is_subspace = c.is_subspace();
  f.d_is_subspace = d.is_subspace();
  f.transverse = transverse(c, d, intersect(c, d));
  return f;
}

bool transverse(const PolyhedralCone& c, const PolyhedralCone& d, const PolyhedralCone& cap) {
  return cap.dim() == c.dim() + d.dim() - c.ambient_dim() && relative_interiors_meet(c, d, cap);
}

}  // namespace conekit
