#include "conekit/schlafli.hpp"

#include <cmath>
#include <sstream>

#include "conekit/detail/outer_average.hpp"
#include "conekit/double_description.hpp"
#include "conekit/errors.hpp"

namespace conekit {

namespace {

/// Exact binomial coefficient; 0 outside 0 <= k <= n.
std::uint64_t binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  return r;
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

std::uint64_t schlafli_count(int n, int d) {
  require(n >= 0 && d >= 1, "schlafli_count: need n >= 0 and d >= 1");
  if (n == 0) return 1;
  std::uint64_t s = 0;
  for (int r = 0; r < d; ++r) s += binom(n - 1, r);
  return 2 * s;
}

// ---------------------------------------------------------------- cells

int Arrangement::locate(const Vector& x) const {
  std::vector<int> eps(normals.size());
  const double tol = kTolerance * x.norm();
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double v = normals[i].dot(x);
    if (std::abs(v) <= tol) return -1;
    eps[i] = v < 0 ? 1 : -1;
  }
  for (std::size_t c = 0; c < sign_vectors.size(); ++c)
    if (sign_vectors[c] == eps) return static_cast<int>(c);
  return -1;
}

bool in_general_position(int d, const std::vector<Vector>& normals) {
  const int n = static_cast<int>(normals.size());
  const int k = std::min(n, d);
  if (k == 0) return true;
  if (n <= d) {
    Matrix m(d, n);
    for (int i = 0; i < n; ++i) m.col(i) = normals[static_cast<std::size_t>(i)].normalized();
    return numerical_rank(m) == n;
  }
  // Every d-subset must be a basis; the normals are unit so |det| <= 1.
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
  Matrix m(d, d);
  for (;;) {
    for (int i = 0; i < d; ++i) m.col(i) = normals[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].normalized();
    if (!(std::abs(m.partialPivLu().determinant()) > kTolerance)) return false;
    int i = d - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - d + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

Arrangement enumerate_cells(int d, const std::vector<Vector>& normals) {
  require(d >= 1, "enumerate_cells: d must be >= 1");
  for (const auto& u : normals) {
    require(u.size() == d, "enumerate_cells: normal dimension mismatch");
    require(u.norm() > 0.0, "enumerate_cells: zero normal");
  }
  if (!in_general_position(d, normals))
    throw DegenerateInput("enumerate_cells: normals are not in general position");

  struct Cell {
    DoubleDescription dd;
    std::vector<int> eps;
  };
  std::vector<Cell> cells{Cell{DoubleDescription(d), {}}};
  for (const auto& u_raw : normals) {
    const Vector u = u_raw.normalized();
    std::vector<Cell> next;
    next.reserve(2 * cells.size());
    for (auto& cell : cells) {
      if (cell.dd.is_split_by(u)) {
        Cell other = cell;
        cell.dd.add_constraint(u);
        cell.eps.push_back(1);
        other.dd.add_constraint(-u);
        other.eps.push_back(-1);
        next.push_back(std::move(cell));
        next.push_back(std::move(other));
      } else {
        // Not crossed: every ray lies on one side of u^perp.
        double side = 0.0;
        for (const auto& r : cell.dd.rays()) {
          const double v = u.dot(r);
          if (std::abs(v) > std::abs(side)) side = v;
        }
        const int e = side <= 0.0 ? 1 : -1;
        cell.dd.add_constraint(static_cast<double>(e) * u);
        cell.eps.push_back(e);
        next.push_back(std::move(cell));
      }
    }
    cells = std::move(next);
  }

  const int n = static_cast<int>(normals.size());
  if (cells.size() != schlafli_count(n, d)) {
    std::ostringstream msg;
    msg << "enumerate_cells: found " << cells.size() << " cells, expected " << schlafli_count(n, d);
    throw DegenerateInput(msg.str());
  }
  Arrangement a;
  a.ambient = d;
  for (const auto& u : normals) a.normals.push_back(u.normalized());
  for (auto& cell : cells) {
    a.cells.push_back(cone_from_double_description(cell.dd));
    if (a.cells.back().dim() != d) throw DegenerateInput("enumerate_cells: lower-dimensional cell");
    a.sign_vectors.push_back(std::move(cell.eps));
  }
  return a;
}

SchlafliSample sample_typical_cone(int n, int d, RandomStream& rs, int retry_budget) {
  require(n >= 0 && d >= 1, "sample_typical_cone: need n >= 0 and d >= 1");
  SchlafliSample s;
  for (;;) {
    std::vector<Vector> normals;
    normals.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) normals.push_back(sample_sphere(d, rs));
    try {
      s.arrangement = enumerate_cells(d, normals);
      break;
    } catch (const DegenerateInput&) {
      if (s.redraws >= retry_budget)
        throw RetryBudgetExceeded("sample_typical_cone: degenerate arrangement after " +
                                  std::to_string(s.redraws) + " redraws");
      ++s.redraws;
    }
  }
  s.chosen_index = static_cast<std::size_t>(rs.uniform_index(s.arrangement.cells.size()));
  return s;
}

// ---------------------------------------------------------------- closed forms

double expected_curvature_formula(const std::vector<double>& phi, int n, int k) {
  require(!phi.empty(), "expected_curvature_formula: empty curvature vector");
  const int d = static_cast<int>(phi.size()) - 1;
  require(d >= 1 && n >= 0 && k >= 0 && k <= d, "expected_curvature_formula: need n >= 0 and 0 <= k <= d");
  double s = 0.0;
  for (int t = 0; t <= std::min(n, d - k); ++t)
    s += static_cast<double>(binom(n, t)) * phi[static_cast<std::size_t>(k + t)];
  return s / static_cast<double>(schlafli_count(n, d));
}

std::uint64_t intersection_coefficient(int n, int j) {
  require(n >= 0 && j >= 1, "intersection_coefficient: need n >= 0 and j >= 1");
  std::uint64_t a = 0;
  for (int k = 0; 2 * k <= j - 1; ++k) a += binom(n, j - 2 * k - 1);
  return a;
}

double fixed_intersection_prob(const std::vector<double>& v, int n) {
  require(v.size() >= 2, "fixed_intersection_prob: volume vector must have d + 1 entries");
  const int d = static_cast<int>(v.size()) - 1;
  require(n >= 0, "fixed_intersection_prob: n must be >= 0");
  double s = 0.0;
  for (int j = 1; j <= d; ++j) s += static_cast<double>(intersection_coefficient(n, j)) * v[static_cast<std::size_t>(j)];
  return 2.0 * s / static_cast<double>(schlafli_count(n, d));
}

double pair_intersection_prob(int n, int m, int d) {
  require(n >= 1 && m >= 1 && d >= 1, "pair_intersection_prob: need n, m, d >= 1");
  double s = 0.0;
  for (int k = 0; 2 * k + 1 <= d; ++k) {
    const int total = d - 2 * k - 1;
    for (int p = 0; p <= total; ++p) s += static_cast<double>(binom(n, p)) * static_cast<double>(binom(m, total - p));
  }
  return 2.0 * s / (static_cast<double>(schlafli_count(n, d)) * static_cast<double>(schlafli_count(m, d)));
}

double expected_schlafli_volume(int n, int d, int i) {
  require(n >= 0 && d >= 1 && i >= 1 && i <= d, "expected_schlafli_volume: need 1 <= i <= d");
  return static_cast<double>(binom(n, d - i)) / static_cast<double>(schlafli_count(n, d));
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

std::vector<double> fractions(const std::vector<std::uint64_t>& counts, std::uint64_t accepted) {
  std::vector<double> v;
  v.reserve(counts.size());
  for (auto h : counts) v.push_back(accepted ? static_cast<double>(h) / static_cast<double>(accepted) : 0.0);
  return v;
}

SchlafliRun collect(const detail::OuterStats& s, std::uint64_t n, const RandomStream& rs) {
  SchlafliRun run;
  for (std::size_t j = 0; j < s.mean.size(); ++j) run.estimates.push_back(detail::outer_estimate(s, j, n, rs));
  run.redraws = s.redraws;
  run.inner_discarded = s.inner_discarded;
  return run;
}

}  // namespace

SchlafliRun schlafli_curvature_mc(const PolyhedralCone& c, const ConicRegion& a, int n, std::uint64_t n_draws,
                                  std::uint64_t n_g, const RandomStream& rs, unsigned workers) {
  const int d = c.ambient_dim();
  require(a.ambient() == d, "schlafli_curvature_mc: region dimension mismatch");
  require(n >= 0 && n_g >= 1, "schlafli_curvature_mc: need n >= 0 and n_g >= 1");
  const auto width = static_cast<std::size_t>(d) + 1;
  const bool origin_in_a = a.contains(Vector(Vector::Zero(d)));
  const auto s = detail::over_draws(n_draws, width, rs, workers, [&](RandomStream& sub) {
    detail::OuterSample out;
    const SchlafliSample smp = sample_typical_cone(n, d, sub);
    out.redraws = static_cast<std::uint64_t>(smp.redraws);
    const PolyhedralCone e = intersect(c, smp.cone());
    out.values.assign(width, 0.0);
    if (e.is_zero()) {
      out.values[0] = origin_in_a ? 1.0 : 0.0;
      return out;
    }
    SampleRequest req;
    req.regions.push_back({a});
    const SampleTally t = sample_projections_serial(e, req, n_g, sub);
    out.inner_discarded = t.discarded;
    out.values = fractions(t.region_by_dim[0], t.accepted);
    return out;
  });
  return collect(s, n_draws, rs);
}

SchlafliRun schlafli_volume_mc(int n, int d, std::uint64_t n_draws, std::uint64_t n_g, const RandomStream& rs,
                               unsigned workers) {
  require(n >= 0 && d >= 1 && n_g >= 1, "schlafli_volume_mc: need n >= 0, d >= 1 and n_g >= 1");
  const auto width = static_cast<std::size_t>(d) + 1;
  const auto s = detail::over_draws(n_draws, width, rs, workers, [&](RandomStream& sub) {
    detail::OuterSample out;
    const SchlafliSample smp = sample_typical_cone(n, d, sub);
    out.redraws = static_cast<std::uint64_t>(smp.redraws);
    const SampleTally t = sample_projections_serial(smp.cone(), {}, n_g, sub);
    out.inner_discarded = t.discarded;
    out.values = fractions(t.by_dim, t.accepted);
    return out;
  });
  return collect(s, n_draws, rs);
}

namespace {

SchlafliRun frequency(const detail::OuterStats& s, std::uint64_t n, const RandomStream& rs) {
  const auto hits = static_cast<std::uint64_t>(std::llround(s.mean[0] * static_cast<double>(n)));
  SchlafliRun run;
  run.estimates.push_back(proportion(hits, n, 0, rs));
  run.redraws = s.redraws;
  return run;
}

}  // namespace

SchlafliRun fixed_intersection_mc(const PolyhedralCone& c, int n, std::uint64_t n_draws, const RandomStream& rs,
                                  unsigned workers) {
  const int d = c.ambient_dim();
  const auto s = detail::over_draws(n_draws, 1, rs, workers, [&](RandomStream& sub) {
    detail::OuterSample out;
    const SchlafliSample smp = sample_typical_cone(n, d, sub);
    out.redraws = static_cast<std::uint64_t>(smp.redraws);
    out.values = {intersect(c, smp.cone()).is_zero() ? 0.0 : 1.0};
    return out;
  });
  return frequency(s, n_draws, rs);
}

SchlafliRun pair_intersection_mc(int n, int m, int d, std::uint64_t n_draws, const RandomStream& rs,
                                 unsigned workers) {
  require(n >= 1 && m >= 1 && d >= 1, "pair_intersection_mc: need n, m, d >= 1");
  const auto s = detail::over_draws(n_draws, 1, rs, workers, [&](RandomStream& sub) {
    detail::OuterSample out;
    const SchlafliSample a = sample_typical_cone(n, d, sub);
    const SchlafliSample b = sample_typical_cone(m, d, sub);
    out.redraws = static_cast<std::uint64_t>(a.redraws + b.redraws);
    out.values = {intersect(a.cone(), b.cone()).is_zero() ? 0.0 : 1.0};
    return out;
  });
  return frequency(s, n_draws, rs);
}

}  // namespace conekit
