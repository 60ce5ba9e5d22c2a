#include "conekit/kinematics.hpp"

#include <cmath>
#include <limits>

#include "conekit/detail/outer_average.hpp"
#include "conekit/errors.hpp"
#include "conekit/parallel.hpp"

namespace conekit {

using detail::OuterSample;
using detail::OuterStats;
using detail::outer_estimate;

// ---------------------------------------------------------------- weights

WeightFunction::WeightFunction(std::function<double(double)> f, double bound, std::string name)
    : f_(std::move(f)), bound_(bound), name_(std::move(name)) {
  if (!(bound_ >= 0.0) || !std::isfinite(bound_)) throw InvalidArgument("WeightFunction: bound must be finite");
}

WeightFunction WeightFunction::one() {
  return WeightFunction([](double) { return 1.0; }, 1.0, "1");
}
WeightFunction WeightFunction::t() {
  return WeightFunction([](double x) { return x; }, 1.0, "t");
}
WeightFunction WeightFunction::t_squared() {
  return WeightFunction([](double x) { return x * x; }, 1.0, "t^2");
}
WeightFunction WeightFunction::step(double c) {
  return WeightFunction([c](double x) { return x >= c ? 1.0 : 0.0; }, 1.0, "step(" + std::to_string(c) + ")");
}

WeightFunction WeightFunction::parse(const std::string& text) {
  if (text == "1") return one();
  if (text == "t") return t();
  if (text == "t^2" || text == "t2") return t_squared();
  if (text.starts_with("step(") && text.ends_with(")")) {
    try {
      std::size_t used = 0;
      const std::string arg = text.substr(5, text.size() - 6);
      const double c = std::stod(arg, &used);
      if (used == arg.size()) return step(c);
    } catch (const std::exception&) {
    }
  }
  throw InvalidArgument("unknown weight function '" + text + "' (expected 1, t, t^2 or step(c))");
}

double WeightFunction::operator()(double x) const {
  const double v = f_(x);
  if (!(std::abs(v) <= bound_ * (1.0 + 1e-12))) throw InvalidArgument("weight function '" + name_ + "' exceeds its bound");
  return v;
}

double discrepancy_sigma(double lhs, double lhs_se, double rhs, double rhs_se) {
  const double diff = std::abs(lhs - rhs);
  const double se = std::hypot(lhs_se, rhs_se);
  if (se > 0.0) return diff / se;
  return diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- helpers

namespace {

/// Multinomial cell probabilities with their sample size (0 = exact).
struct CellProbabilities {
  std::vector<double> p;
  std::uint64_t n = 0;
};

CellProbabilities exact_cells(const std::vector<double>& v, int d, const char* who) {
  if (static_cast<int>(v.size()) != d + 1)
    throw InvalidArgument(std::string(who) + ": exact vector must have d + 1 entries");
  return {v, 0};
}

CellProbabilities sampled_cells(const PolyhedralCone& c, const ConicRegion& a, std::uint64_t n,
                                const RandomStream& rs, unsigned workers) {
  SampleRequest req;
  req.regions.push_back({a});
  const SampleTally t = sample_projections(c, req, n, rs, workers);
  CellProbabilities out;
  out.n = t.accepted;
  for (auto h : t.region_by_dim[0])
    out.p.push_back(t.accepted ? static_cast<double>(h) / static_cast<double>(t.accepted) : 0.0);
  return out;
}

double linear_variance(const std::vector<double>& g, const CellProbabilities& c) {
  return std::pow(linear_std_error(g, c.p, c.n), 2);
}

/// Σ_{i=k}^{d} P_i Q_{d+k-i} with its delta-method standard error.
std::pair<double, double> bilinear(const CellProbabilities& pc, const CellProbabilities& pd, int d, int k) {
  const auto size = static_cast<std::size_t>(d) + 1;
  std::vector<double> gp(size, 0.0);
  std::vector<double> gq(size, 0.0);
  double value = 0.0;
  for (int i = k; i <= d; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const auto jj = static_cast<std::size_t>(d + k - i);
    value += pc.p[ii] * pd.p[jj];
    gp[ii] += pd.p[jj];
    gq[jj] += pc.p[ii];
  }
  return {value, std::sqrt(linear_variance(gp, pc) + linear_variance(gq, pd))};
}

std::vector<double> region_fractions(const SampleTally& t) {
  std::vector<double> v;
  for (auto h : t.region_by_dim[0])
    v.push_back(t.accepted ? static_cast<double>(h) / static_cast<double>(t.accepted) : 0.0);
  return v;
}

void require_same_ambient(const PolyhedralCone& c, const PolyhedralCone& d, const char* who) {
  if (c.ambient_dim() != d.ambient_dim()) throw InvalidArgument(std::string(who) + ": ambient dimension mismatch");
}

KinematicCheckReport finish(std::string name, Estimate lhs, double rhs, double rhs_se, std::uint64_t n_rot,
                            std::uint64_t n_g, std::uint64_t discarded, std::uint64_t violations) {
  KinematicCheckReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.rhs_std_error = rhs_se;
  r.discrepancy_sigma = discrepancy_sigma(lhs.value, lhs.std_error, rhs, rhs_se);
  r.n_rotations = n_rot;
  r.n_gaussians = n_g;
  r.discarded = discarded;
  r.violations = violations;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- kinematic

std::vector<KinematicCheckReport> check_local_kinematic_all(const PolyhedralCone& c, const PolyhedralCone& d,
                                                            const ConicRegion& a, const ConicRegion& b,
                                                            const RandomStream& rs, const KinematicOptions& opt) {
  require_same_ambient(c, d, "check_local_kinematic");
  const int dim = c.ambient_dim();
  if (a.ambient() != dim || b.ambient() != dim)
    throw InvalidArgument("check_local_kinematic: region dimension mismatch");
  if (opt.n_g < 1) throw InvalidArgument("check_local_kinematic: n_g must be >= 1");
  c.projector();
  const auto width = static_cast<std::size_t>(dim) + 1;

  const RandomStream rot_stream = rs.substream(1);
  const OuterStats lhs = detail::over_draws(opt.n_rot, width, rot_stream, opt.workers, [&](RandomStream& s) {
    const Rotation r = sample_rotation(dim, s);
    const PolyhedralCone rd = rotate(d, r);
    const PolyhedralCone e = intersect(c, rd);
    OuterSample out;
    out.values.assign(width, 0.0);
    out.violation = !e.is_zero() && !transverse(c, rd, e);
    if (e.is_zero()) {
      out.values[0] = a.contains(Vector(Vector::Zero(dim))) && b.contains(Vector(Vector::Zero(dim))) ? 1.0 : 0.0;
      return out;
    }
    SampleRequest req;
    req.regions.push_back({});
    if (!a.is_whole()) req.regions[0].push_back(a);
    if (!b.is_whole()) req.regions[0].push_back(b.rotated(r));
    const SampleTally t = sample_projections_serial(e, req, opt.n_g, s);
    out.inner_discarded = t.discarded;
    out.values = region_fractions(t);
    return out;
  });

  const CellProbabilities pc = opt.exact_c ? exact_cells(*opt.exact_c, dim, "check_local_kinematic")
                                           : sampled_cells(c, a, opt.n_rhs, rs.substream(2), opt.workers);
  const CellProbabilities pd = opt.exact_d ? exact_cells(*opt.exact_d, dim, "check_local_kinematic")
                                           : sampled_cells(d, b, opt.n_rhs, rs.substream(3), opt.workers);

  std::vector<KinematicCheckReport> out;
  for (int k = 1; k <= dim; ++k) {
    const auto [rhs, rhs_se] = bilinear(pc, pd, dim, k);
    out.push_back(finish("kinematic k=" + std::to_string(k), outer_estimate(lhs, static_cast<std::size_t>(k), opt.n_rot, rot_stream),
                         rhs, rhs_se, opt.n_rot, opt.n_g, lhs.inner_discarded, lhs.violations));
  }
  return out;
}

KinematicCheckReport check_local_kinematic(const PolyhedralCone& c, const PolyhedralCone& d, const ConicRegion& a,
                                           const ConicRegion& b, int k, const RandomStream& rs,
                                           const KinematicOptions& opt) {
  if (k < 1 || k > c.ambient_dim()) throw InvalidArgument("check_local_kinematic: need 1 <= k <= d");
  return check_local_kinematic_all(c, d, a, b, rs, opt)[static_cast<std::size_t>(k - 1)];
}

std::vector<KinematicCheckReport> check_global_kinematic_all(const PolyhedralCone& c, const PolyhedralCone& d,
                                                             const RandomStream& rs, const KinematicOptions& opt) {
  require_same_ambient(c, d, "check_global_kinematic");
  const int dim = c.ambient_dim();
  return check_local_kinematic_all(c, d, ConicRegion::whole(dim), ConicRegion::whole(dim), rs, opt);
}

KinematicCheckReport check_global_kinematic(const PolyhedralCone& c, const PolyhedralCone& d, int k,
                                            const RandomStream& rs, const KinematicOptions& opt) {
  if (k < 1 || k > c.ambient_dim()) throw InvalidArgument("check_global_kinematic: need 1 <= k <= d");
  return check_global_kinematic_all(c, d, rs, opt)[static_cast<std::size_t>(k - 1)];
}

// ---------------------------------------------------------------- strike

double strike_probability_formula(const std::vector<double>& cv, const std::vector<double>& dv) {
  if (cv.size() != dv.size() || cv.size() < 2)
    throw InvalidArgument("strike_probability_formula: volume vectors must both have length d + 1");
  const int d = static_cast<int>(cv.size()) - 1;
  for (std::size_t i = 0; i < cv.size(); ++i)
    if (cv[i] < 0.0 || cv[i] > 1.0 || dv[i] < 0.0 || dv[i] > 1.0)
      throw InvalidArgument("strike_probability_formula: entries must lie in [0, 1]");
  double s = 0.0;
  for (int k = 0; 2 * k + 1 <= d; ++k)
    for (int i = 2 * k + 1; i <= d; ++i)
      s += cv[static_cast<std::size_t>(i)] * dv[static_cast<std::size_t>(d + 2 * k + 1 - i)];
  return 2.0 * s;
}

FormulaEstimate strike_probability_sampled(const PolyhedralCone& c, const PolyhedralCone& d, std::uint64_t n,
                                           const RandomStream& rs, unsigned workers) {
  require_same_ambient(c, d, "strike_probability_sampled");
  const int dim = c.ambient_dim();
  const ConicRegion all = ConicRegion::whole(dim);
  const CellProbabilities pc = sampled_cells(c, all, n, rs.substream(0), workers);
  const CellProbabilities pd = sampled_cells(d, all, n, rs.substream(1), workers);
  const auto size = static_cast<std::size_t>(dim) + 1;
  std::vector<double> gp(size, 0.0);
  std::vector<double> gq(size, 0.0);
  for (int k = 0; 2 * k + 1 <= dim; ++k)
    for (int i = 2 * k + 1; i <= dim; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(dim + 2 * k + 1 - i);
      gp[ii] += 2.0 * pd.p[jj];
      gq[jj] += 2.0 * pc.p[ii];
    }
  FormulaEstimate out;
  out.value = strike_probability_formula(pc.p, pd.p);
  out.std_error = std::sqrt(linear_variance(gp, pc) + linear_variance(gq, pd));
  out.c_volumes = pc.p;
  out.d_volumes = pd.p;
  out.n = pc.n;
  return out;
}

StrikeResult strike_probability_mc(const PolyhedralCone& c, const PolyhedralCone& d, std::uint64_t n_rot,
                                   const RandomStream& rs, unsigned workers) {
  require_same_ambient(c, d, "strike_probability_mc");
  if (c.is_subspace() && d.is_subspace())
    throw InvalidArgument("strike_probability_mc: C and D must not both be subspaces");
  if (n_rot < 1) throw InvalidArgument("strike_probability_mc: n_rot must be >= 1");
  enum : std::uint8_t { kMiss, kHit, kViolation, kTangent };
  std::vector<std::uint8_t> outcome(n_rot, kMiss);
  const int dim = c.ambient_dim();
  parallel_for(batch_count(n_rot), workers, [&](std::uint64_t b) {
    const std::uint64_t end = std::min(n_rot, (b + 1) * kBatchSize);
    for (std::uint64_t r = b * kBatchSize; r < end; ++r) {
      RandomStream s = rs.substream(r);
      const PolyhedralCone rd = rotate(d, sample_rotation(dim, s));
      const PolyhedralCone e = intersect(c, rd);
      if (e.is_zero())
        outcome[r] = kMiss;
      else if (e.is_subspace())
        outcome[r] = kViolation;
      else
        outcome[r] = transverse(c, rd, e) ? kHit : kTangent;
    }
  });
  StrikeResult res;
  std::uint64_t hits = 0;
  for (auto o : outcome) {
    if (o == kHit || o == kViolation) ++hits;
    if (o == kViolation) ++res.violations;
    if (o == kTangent) ++res.discarded;
  }
  res.estimate = proportion(hits, n_rot - res.discarded, res.discarded, rs);
  return res;
}

// ---------------------------------------------------------------- weighted

Estimate c_ij_constant(int d, int i, int j, const WeightFunction& f, std::uint64_t n_rot, const RandomStream& rs,
                       unsigned workers, const Rotation* representative) {
  if (d < 1 || i < 0 || j < 0 || i > d || j > d) throw InvalidArgument("c_ij_constant: need 0 <= i, j <= d");
  Subspace li = Subspace::coordinate(d, i);
  Subspace lj = Subspace::coordinate(d, j);
  if (representative) {
    li = li.rotated(representative->matrix());
    lj = lj.rotated(representative->matrix());
  }
  const OuterStats s = detail::over_draws(n_rot, 1, rs, workers, [&](RandomStream& sub) {
    OuterSample out;
    if (d < 2) {
      out.values = {f(generalized_sine(li, lj))};
      return out;
    }
    const Rotation r = sample_rotation(d, sub);
    out.values = {f(generalized_sine(li, lj.rotated(r.matrix())))};
    return out;
  });
  return outer_estimate(s, 0, n_rot, rs);
}

namespace {

/// c · x · y for independent estimates, with the delta-method error.
std::pair<double, double> triple_product(const Estimate& c, double x, double x_se, double y, double y_se) {
  const double value = c.value * x * y;
  const double var = std::pow(x * y * c.std_error, 2) + std::pow(c.value * y * x_se, 2) +
                     std::pow(c.value * x * y_se, 2);
  return {value, std::sqrt(var)};
}

Estimate weight_constant(int d, int i, int j, const WeightFunction& f, const RandomStream& rs,
                         const WeightedOptions& opt) {
  if (f.is_constant_one()) {
    Estimate one;
    one.value = 1.0;
    one.n_samples = opt.n_c;
    one.seed = rs.seed();
    one.stream = rs.stream();
    return one;
  }
  return c_ij_constant(d, i, j, f, opt.n_c, rs, opt.base.workers);
}

}  // namespace

KinematicCheckReport check_weighted_top(const PolyhedralCone& c, const PolyhedralCone& d, const ConicRegion& a,
                                        const ConicRegion& b, const WeightFunction& f, const RandomStream& rs,
                                        const WeightedOptions& opt) {
  require_same_ambient(c, d, "check_weighted_top");
  const int dim = c.ambient_dim();
  const int i = c.dim();
  const int j = d.dim();
  const int k = i + j - dim;
  if (k < 1) throw InvalidArgument("check_weighted_top: requires dim C + dim D > d");
  if (a.ambient() != dim || b.ambient() != dim) throw InvalidArgument("check_weighted_top: region dimension mismatch");
  c.projector();

  const RandomStream rot_stream = rs.substream(1);
  const OuterStats lhs = detail::over_draws(opt.base.n_rot, 1, rot_stream, opt.base.workers, [&](RandomStream& s) {
    const Rotation r = sample_rotation(dim, s);
    const PolyhedralCone rd = rotate(d, r);
    const PolyhedralCone e = intersect(c, rd);
    OuterSample out;
    out.violation = !e.is_zero() && !transverse(c, rd, e);
    SampleRequest req;
    req.regions.push_back({});
    if (!a.is_whole()) req.regions[0].push_back(a);
    if (!b.is_whole()) req.regions[0].push_back(b.rotated(r));
    const SampleTally t = sample_projections_serial(e, req, opt.base.n_g, s);
    out.inner_discarded = t.discarded;
    const double phi = region_fractions(t)[static_cast<std::size_t>(k)];
    out.values = {phi * f(generalized_sine(c.linear_hull(), rd.linear_hull()))};
    return out;
  });

  const CellProbabilities pc = sampled_cells(c, a, opt.base.n_rhs, rs.substream(2), opt.base.workers);
  const CellProbabilities pd = sampled_cells(d, b, opt.base.n_rhs, rs.substream(3), opt.base.workers);
  const Estimate cij = weight_constant(dim, i, j, f, rs.substream(4), opt);
  const double x = pc.p[static_cast<std::size_t>(i)];
  const double y = pd.p[static_cast<std::size_t>(j)];
  const auto [rhs, rhs_se] = triple_product(cij, x, std::sqrt(x * (1 - x) / static_cast<double>(pc.n)), y,
                                            std::sqrt(y * (1 - y) / static_cast<double>(pd.n)));
  return finish("weighted-top f=" + f.name(), outer_estimate(lhs, 0, opt.base.n_rot, rot_stream), rhs, rhs_se,
                opt.base.n_rot, opt.base.n_g, lhs.inner_discarded, lhs.violations);
}

KinematicCheckReport check_weighted_sum(const PolyhedralCone& c, const PolyhedralCone& d, const WeightFunction& f,
                                        const RandomStream& rs, const WeightedOptions& opt) {
  require_same_ambient(c, d, "check_weighted_sum");
  const int dim = c.ambient_dim();
  const int i = c.dim();
  const int j = d.dim();
  if (i + j >= dim) throw InvalidArgument("check_weighted_sum: requires dim C + dim D < d");
  const auto top = static_cast<std::size_t>(i + j);

  const RandomStream rot_stream = rs.substream(1);
  const OuterStats lhs = detail::over_draws(opt.base.n_rot, 1, rot_stream, opt.base.workers, [&](RandomStream& s) {
    const Rotation r = sample_rotation(dim, s);
    const PolyhedralCone rd = rotate(d, r);
    const PolyhedralCone sum = conic_sum(c, rd);
    OuterSample out;
    out.violation = sum.dim() != i + j;
    const SampleTally t = sample_projections_serial(sum, {}, opt.base.n_g, s);
    out.inner_discarded = t.discarded;
    const double v = t.accepted ? static_cast<double>(t.by_dim[top]) / static_cast<double>(t.accepted) : 0.0;
    out.values = {v * f(generalized_sine(c.linear_hull(), rd.linear_hull()))};
    return out;
  });

  const ConicRegion all = ConicRegion::whole(dim);
  const CellProbabilities pc = sampled_cells(c, all, opt.base.n_rhs, rs.substream(2), opt.base.workers);
  const CellProbabilities pd = sampled_cells(d, all, opt.base.n_rhs, rs.substream(3), opt.base.workers);
  const Estimate cij = weight_constant(dim, i, j, f, rs.substream(4), opt);
  const double x = pc.p[static_cast<std::size_t>(i)];
  const double y = pd.p[static_cast<std::size_t>(j)];
  const auto [rhs, rhs_se] = triple_product(cij, x, std::sqrt(x * (1 - x) / static_cast<double>(pc.n)), y,
                                            std::sqrt(y * (1 - y) / static_cast<double>(pd.n)));
  return finish("weighted-sum f=" + f.name(), outer_estimate(lhs, 0, opt.base.n_rot, rot_stream), rhs, rhs_se,
                opt.base.n_rot, opt.base.n_g, lhs.inner_discarded, lhs.violations);
}

}  // namespace conekit
