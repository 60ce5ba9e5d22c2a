#include "conekit/experiment.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>

#include "conekit/catalog.hpp"
#include "conekit/detail/outer_average.hpp"
#include "conekit/errors.hpp"
#include "conekit/io.hpp"
#include "conekit/kinematics.hpp"
#include "conekit/projection.hpp"
#include "conekit/schlafli.hpp"

namespace conekit {

using nlohmann::json;

namespace {

/// Validation error tied to a config key, so the parser can point at it.
class KeyError : public InvalidArgument {
 public:
  KeyError(std::string key, const std::string& what) : InvalidArgument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// ---------------------------------------------------------------- schema

enum class Kind { cone, region, count, natural, integer, weight, flag, point, normals };

/// `fallback` is JSON text for the default; kRequired and kOptional mark
/// parameters without one.
struct Param {
  const char* key;
  Kind kind;
  const char* fallback;
};

constexpr const char* kRequired = nullptr;
constexpr const char* kOptional = "";

const std::map<std::string, std::vector<Param>>& schema() {
  static const std::map<std::string, std::vector<Param>> s = {
      {"volumes", {{"cone", Kind::cone, kRequired}, {"n_samples", Kind::count, "1000000"}}},
      {"project", {{"cone", Kind::cone, kRequired}, {"point", Kind::point, kRequired}}},
      {"faces", {{"cone", Kind::cone, kRequired}}},
      {"kinematic-global",
       {{"C", Kind::cone, kRequired},
        {"D", Kind::cone, kRequired},
        {"k", Kind::integer, kOptional},
        {"n_rot", Kind::count, "10000"},
        {"n_g", Kind::count, "1000"},
        {"n_rhs", Kind::count, "1000000"},
        {"exact", Kind::flag, "true"}}},
      {"kinematic-local",
       {{"C", Kind::cone, kRequired},
        {"D", Kind::cone, kRequired},
        {"A", Kind::region, "\"whole\""},
        {"B", Kind::region, "\"whole\""},
        {"k", Kind::integer, kOptional},
        {"n_rot", Kind::count, "10000"},
        {"n_g", Kind::count, "1000"},
        {"n_rhs", Kind::count, "1000000"},
        {"exact", Kind::flag, "true"}}},
      {"strike",
       {{"C", Kind::cone, kRequired},
        {"D", Kind::cone, kRequired},
        {"n_rot", Kind::count, "100000"},
        {"n_rhs", Kind::count, "1000000"},
        {"exact", Kind::flag, "true"}}},
      {"weighted-top",
       {{"C", Kind::cone, kRequired},
        {"D", Kind::cone, kRequired},
        {"A", Kind::region, "\"whole\""},
        {"B", Kind::region, "\"whole\""},
        {"weight", Kind::weight, "\"1\""},
        {"n_rot", Kind::count, "10000"},
        {"n_g", Kind::count, "1000"},
        {"n_rhs", Kind::count, "1000000"},
        {"n_c", Kind::count, "100000"}}},
      {"weighted-sum",
       {{"C", Kind::cone, kRequired},
        {"D", Kind::cone, kRequired},
        {"weight", Kind::weight, "\"1\""},
        {"n_rot", Kind::count, "10000"},
        {"n_g", Kind::count, "1000"},
        {"n_rhs", Kind::count, "1000000"},
        {"n_c", Kind::count, "100000"}}},
      {"schlafli-count",
       {{"n", Kind::natural, kRequired},
        {"d", Kind::count, kRequired},
        {"normals", Kind::normals, kOptional},
        {"draws", Kind::count, kOptional}}},
      {"schlafli-expect",
       {{"n", Kind::natural, kRequired},
        {"d", Kind::count, kOptional},
        {"C", Kind::cone, kOptional},
        {"A", Kind::region, kOptional},
        {"k", Kind::integer, kOptional},
        {"n_draws", Kind::count, "10000"},
        {"n_g", Kind::count, "1000"},
        {"n_rhs", Kind::count, "1000000"},
        {"exact", Kind::flag, "true"}}},
      {"strike-fixed-schlafli",
       {{"C", Kind::cone, kRequired},
        {"n", Kind::count, kRequired},
        {"n_draws", Kind::count, "100000"},
        {"n_rhs", Kind::count, "1000000"},
        {"exact", Kind::flag, "true"}}},
      {"strike-pair-schlafli",
       {{"n", Kind::count, kRequired},
        {"m", Kind::count, kRequired},
        {"d", Kind::count, kRequired},
        {"n_draws", Kind::count, "100000"}}},
  };
  return s;
}

void validate_value(const Param& p, const json& v) {
  const std::string key = p.key;
  try {
    switch (p.kind) {
      case Kind::cone:
        parse_cone(v);
        break;
      case Kind::region:
        break;  // needs the ambient dimension; checked with the cones
      case Kind::count:
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) throw KeyError(key, "must be an integer >= 1");
        break;
      case Kind::natural:
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw KeyError(key, "must be an integer >= 0");
        break;
      case Kind::integer:
        if (!v.is_number_integer()) throw KeyError(key, "must be an integer");
        break;
      case Kind::weight:
        if (!v.is_string()) throw KeyError(key, "must be a string");
        WeightFunction::parse(v.get<std::string>());
        break;
      case Kind::flag:
        if (!v.is_boolean()) throw KeyError(key, "must be true or false");
        break;
      case Kind::point:
        if (!v.is_array() || v.empty()) throw KeyError(key, "must be a nonempty array of numbers");
        for (const auto& x : v)
          if (!x.is_number()) throw KeyError(key, "must be a nonempty array of numbers");
        break;
      case Kind::normals:
        if (!v.is_array() || v.empty()) throw KeyError(key, "must be a nonempty array of vectors");
        break;
    }
  } catch (const KeyError&) {
    throw;
  } catch (const Error& e) {
    throw KeyError(key, e.what());
  }
}

int ambient_of(const json& cone) { return parse_cone(cone).cone.ambient_dim(); }

/// Cross-field checks once every value has the right type.
void validate_command(const std::string& cmd, const json& p) {
  std::optional<int> dim;
  for (const char* key : {"cone", "C", "D"}) {
    if (!p.contains(key)) continue;
    const int a = ambient_of(p[key]);
    if (dim && a != *dim) throw KeyError(key, "ambient dimension differs from the other cone");
    dim = a;
  }
  if (cmd == "schlafli-expect") {
    if (p.contains("C") == p.contains("d")) throw KeyError("C", "give either a cone C or a dimension d, not both");
    if (p.contains("A") && !p.contains("C")) throw KeyError("A", "a region needs the cone C");
    if (p.contains("d")) dim = p["d"].get<int>();
  }
  for (const char* key : {"A", "B"}) {
    if (!p.contains(key) || !dim) continue;
    try {
      parse_region(p[key], *dim);
    } catch (const Error& e) {
      throw KeyError(key, e.what());
    }
  }
  if (p.contains("point") && dim && static_cast<int>(p["point"].size()) != *dim)
    throw KeyError("point", "must have " + std::to_string(*dim) + " entries");
  if (p.contains("k") && dim) {
    const int k = p["k"].get<int>();
    if (k < 1 || k > *dim) throw KeyError("k", "must lie in 1.." + std::to_string(*dim));
  }
  if (cmd == "schlafli-count" && p.contains("normals")) {
    if (p.contains("draws")) throw KeyError("normals", "give either normals or draws, not both");
    const auto& normals = p["normals"];
    if (static_cast<int>(normals.size()) != p["n"].get<int>()) throw KeyError("normals", "must list n vectors");
    for (const auto& u : normals)
      if (!u.is_array() || static_cast<int>(u.size()) != p["d"].get<int>())
        throw KeyError("normals", "every normal must have d entries");
  }
  if (cmd == "strike-fixed-schlafli" && parse_cone(p["C"]).cone.is_subspace())
    throw KeyError("C", "must not be a subspace");
}

// ---------------------------------------------------------------- json helpers

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidArgument("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return number(x).get<std::string>();
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------- report building

Check make_check(std::string name, double lhs, double lhs_se, double rhs, double rhs_se, std::uint64_t violations = 0) {
  Check c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.lhs_std_error = lhs_se;
  c.rhs = rhs;
  c.rhs_std_error = rhs_se;
  c.sigma = discrepancy_sigma(lhs, lhs_se, rhs, rhs_se);
  c.violations = violations;
  c.passed = c.sigma <= c.threshold && violations == 0;
  return c;
}

Check from_kinematic(const KinematicCheckReport& r) {
  return make_check(r.name, r.lhs.value, r.lhs.std_error, r.rhs, r.rhs_std_error, r.violations);
}

std::string indexed(const char* base, int i) { return std::string(base) + "_" + std::to_string(i); }

std::uint64_t count_param(const json& p, const char* key) { return p[key].get<std::uint64_t>(); }

std::optional<std::vector<double>> exact_volumes(const ConeInput& in, bool allowed) {
  if (!allowed || !in.descriptor) return std::nullopt;
  return exact_intrinsic_volumes(*in.descriptor);
}

void add_inner_counters(Report& rep, std::uint64_t outer, std::uint64_t inner, std::uint64_t discarded) {
  rep.counters["discarded"] += discarded;
  rep.counters["accepted"] += outer * inner - std::min(outer * inner, discarded);
}

// ---------------------------------------------------------------- commands

void run_volumes(const ExperimentSpec& spec, const RandomStream& rs, Report& rep) {
  const json& p = spec.params;
  const ConeInput in = parse_cone(p["cone"]);
  const SampleTally t = sample_projections(in.cone, {}, count_param(p, "n_samples"), rs, spec.workers);
  const auto v = volumes_from(t, rs);
  const int d = in.cone.ambient_dim();
  std::uint64_t total = 0;
  for (int k = 0; k <= d; ++k) {
    rep.estimates.push_back({indexed("V", k), v[static_cast<std::size_t>(k)]});
    total += v[static_cast<std::size_t>(k)].hits;
  }
  rep.counters["accepted"] = t.accepted;
  rep.counters["discarded"] = t.discarded;

  Check norm = make_check("normalization", static_cast<double>(total), 0.0, static_cast<double>(t.accepted), 0.0);
  rep.checks.push_back(norm);

  if (!in.cone.is_subspace() && t.accepted > 0) {
    std::uint64_t odd = 0;
    for (int k = 1; k <= d; k += 2) odd += v[static_cast<std::size_t>(k)].hits;
    const double q = static_cast<double>(odd) / static_cast<double>(t.accepted);
    rep.checks.push_back(make_check("Gauss-Bonnet 2 sum V_odd = 1", 2 * q,
                                    2 * std::sqrt(q * (1 - q) / static_cast<double>(t.accepted)), 1.0, 0.0));
  }
  if (in.descriptor) {
    const auto exact = exact_intrinsic_volumes(*in.descriptor);
    for (int k = 0; k <= d; ++k) {
      const double truth = exact[static_cast<std::size_t>(k)];
      rep.formulas.push_back({indexed("V", k) + " exact", truth});
      // Binomial error at the catalog value, so exact zeros test exactly.
      const double se = std::sqrt(truth * (1 - truth) / static_cast<double>(std::max<std::uint64_t>(t.accepted, 1)));
      rep.checks.push_back(make_check(indexed("V", k) + " vs catalog", v[static_cast<std::size_t>(k)].value, se, truth, 0.0));
    }
  }
}

void run_project(const ExperimentSpec& spec, Report& rep) {
  const json& p = spec.params;
  const ConeInput in = parse_cone(p["cone"]);
  const int d = in.cone.ambient_dim();
  Vector x(d);
  for (int i = 0; i < d; ++i) x(i) = p["point"][static_cast<std::size_t>(i)].get<double>();
  const ProjectionResult pr = project(in.cone, x);
  const MoreauSplit m = moreau_split(in.cone, x);
  for (int i = 0; i < d; ++i) rep.formulas.push_back({"p[" + std::to_string(i) + "]", m.p(i)});
  for (int i = 0; i < d; ++i) rep.formulas.push_back({"q[" + std::to_string(i) + "]", m.q(i)});
  rep.formulas.push_back({"distance", m.q.norm()});
  rep.formulas.push_back({"face_dim", static_cast<double>(pr.face.dim())});
  rep.data["face_active_set"] = pr.face.active_set();

  const double scale = std::max(1.0, x.norm());
  Check sum = make_check("|p + q - x|", (m.p + m.q - x).norm(), 0.0, 0.0, 0.0);
  sum.passed = sum.lhs <= 1e-9 * scale;
  Check orth = make_check("|<p, q>|", std::abs(m.p.dot(m.q)), 0.0, 0.0, 0.0);
  orth.passed = orth.lhs <= 1e-9 * scale * scale;
  Check agree = make_check("|project - Moreau p|", (pr.point - m.p).norm(), 0.0, 0.0, 0.0);
  agree.passed = agree.lhs <= 1e-9 * scale;
  rep.checks.push_back(sum);
  rep.checks.push_back(orth);
  rep.checks.push_back(agree);
}

void run_faces(const ExperimentSpec& spec, Report& rep) {
  const ConeInput in = parse_cone(spec.params["cone"]);
  const int d = in.cone.ambient_dim();
  std::vector<std::uint64_t> f(static_cast<std::size_t>(d) + 1, 0);
  json list = json::array();
  for (const Face& face : in.cone.faces()) {
    ++f[static_cast<std::size_t>(face.dim())];
    list.push_back({{"dim", face.dim()}, {"active_set", face.active_set()}, {"generators", face.generator_indices()}});
  }
  long euler = 0;
  for (int k = 0; k <= d; ++k) {
    rep.formulas.push_back({indexed("f", k), static_cast<double>(f[static_cast<std::size_t>(k)])});
    euler += (k % 2 ? -1 : 1) * static_cast<long>(f[static_cast<std::size_t>(k)]);
  }
  rep.data["faces"] = std::move(list);
  rep.data["cone"] = cone_to_json(in.cone);
  if (!in.cone.is_subspace()) rep.checks.push_back(make_check("Euler sum (-1)^k f_k = 0", static_cast<double>(euler), 0.0, 0.0, 0.0));
}

void push_kinematic(const std::vector<KinematicCheckReport>& reports, const json& p, Report& rep) {
  std::uint64_t discarded = 0;
  std::uint64_t violations = 0;
  for (std::size_t idx = 0; idx < reports.size(); ++idx) {
    const int k = static_cast<int>(idx) + 1;
    if (p.contains("k") && p["k"].get<int>() != k) continue;
    const auto& r = reports[idx];
    rep.estimates.push_back({"lhs k=" + std::to_string(k), r.lhs});
    rep.formulas.push_back({"rhs k=" + std::to_string(k), r.rhs});
    rep.checks.push_back(from_kinematic(r));
    discarded = r.discarded;
    violations = r.violations;
  }
  add_inner_counters(rep, count_param(p, "n_rot"), count_param(p, "n_g"), discarded);
  rep.counters["violations"] = violations;
}

KinematicOptions kinematic_options(const ExperimentSpec& spec) {
  const json& p = spec.params;
  KinematicOptions o;
  o.n_rot = count_param(p, "n_rot");
  o.n_g = count_param(p, "n_g");
  o.n_rhs = count_param(p, "n_rhs");
  o.workers = spec.workers;
  return o;
}

void run_kinematic(const ExperimentSpec& spec, const RandomStream& rs, Report& rep, bool local) {
  const json& p = spec.params;
  const ConeInput c = parse_cone(p["C"]);
  const ConeInput d = parse_cone(p["D"]);
  const int dim = c.cone.ambient_dim();
  const ConicRegion a = local ? parse_region(p["A"], dim) : ConicRegion::whole(dim);
  const ConicRegion b = local ? parse_region(p["B"], dim) : ConicRegion::whole(dim);
  KinematicOptions o = kinematic_options(spec);
  const bool exact = p["exact"].get<bool>();
  o.exact_c = exact_volumes(c, exact && a.is_whole());
  o.exact_d = exact_volumes(d, exact && b.is_whole());
  push_kinematic(check_local_kinematic_all(c.cone, d.cone, a, b, rs, o), p, rep);
}

void run_strike(const ExperimentSpec& spec, const RandomStream& rs, Report& rep) {
  const json& p = spec.params;
  const ConeInput c = parse_cone(p["C"]);
  const ConeInput d = parse_cone(p["D"]);
  double formula = 0.0;
  double formula_se = 0.0;
  const auto ec = exact_volumes(c, p["exact"].get<bool>());
  const auto ed = exact_volumes(d, p["exact"].get<bool>());
  if (ec && ed) {
    formula = strike_probability_formula(*ec, *ed);
  } else {
    const FormulaEstimate fe = strike_probability_sampled(c.cone, d.cone, count_param(p, "n_rhs"), rs.substream(2), spec.workers);
    formula = fe.value;
    formula_se = fe.std_error;
  }
  const StrikeResult mc = strike_probability_mc(c.cone, d.cone, count_param(p, "n_rot"), rs.substream(1), spec.workers);
  rep.estimates.push_back({"strike frequency", mc.estimate});
  rep.formulas.push_back({"strike formula", formula});
  if (formula_se > 0) rep.formulas.push_back({"strike formula std_error", formula_se});
  rep.checks.push_back(make_check("strike frequency = formula", mc.estimate.value, mc.estimate.std_error, formula, formula_se,
                                  mc.violations));
  rep.counters["accepted"] = mc.estimate.n_samples;
  rep.counters["discarded"] = mc.discarded;
  rep.counters["violations"] = mc.violations;
}

void run_weighted(const ExperimentSpec& spec, const RandomStream& rs, Report& rep, bool top) {
  const json& p = spec.params;
  const ConeInput c = parse_cone(p["C"]);
  const ConeInput d = parse_cone(p["D"]);
  const int dim = c.cone.ambient_dim();
  WeightedOptions o;
  o.base = kinematic_options(spec);
  o.n_c = count_param(p, "n_c");
  const WeightFunction f = WeightFunction::parse(p["weight"].get<std::string>());
  const KinematicCheckReport r =
      top ? check_weighted_top(c.cone, d.cone, parse_region(p["A"], dim), parse_region(p["B"], dim), f, rs, o)
          : check_weighted_sum(c.cone, d.cone, f, rs, o);
  rep.estimates.push_back({"lhs", r.lhs});
  rep.formulas.push_back({"rhs", r.rhs});
  rep.checks.push_back(from_kinematic(r));
  add_inner_counters(rep, o.base.n_rot, o.base.n_g, r.discarded);
  rep.counters["violations"] = r.violations;
}

void run_schlafli_count(const ExperimentSpec& spec, const RandomStream& rs, Report& rep) {
  const json& p = spec.params;
  const int n = p["n"].get<int>();
  const int d = p["d"].get<int>();
  const std::uint64_t expected = schlafli_count(n, d);
  rep.formulas.push_back({"C(n,d)", static_cast<double>(expected)});
  if (p.contains("normals")) {
    const Arrangement a = arrangement_from_json(json{{"normals", p["normals"]}});
    rep.formulas.push_back({"cells", static_cast<double>(a.cells.size())});
    rep.checks.push_back(make_check("cells = C(n,d)", static_cast<double>(a.cells.size()), 0.0, static_cast<double>(expected), 0.0));
    rep.data["arrangement"] = arrangement_to_json(a);
  }
  if (p.contains("draws")) {
    const std::uint64_t draws = count_param(p, "draws");
    // Value 1 when the count is exact; redraws only for rank-deficient normals.
    const auto stats = detail::over_draws(draws, 1, rs.substream(1), spec.workers, [&](RandomStream& s) {
      detail::OuterSample out;
      for (;;) {
        std::vector<Vector> normals;
        for (int i = 0; i < n; ++i) normals.push_back(sample_sphere(d, s));
        if (!in_general_position(d, normals)) {
          ++out.redraws;
          continue;
        }
        try {
          out.values = {enumerate_cells(d, normals).cells.size() == expected ? 1.0 : 0.0};
        } catch (const DegenerateInput&) {
          out.values = {0.0};
        }
        out.violation = out.values[0] == 0.0;
        return out;
      }
    });
    rep.formulas.push_back({"draws", static_cast<double>(draws)});
    rep.counters["redraws"] = stats.redraws;
    rep.counters["violations"] = stats.violations;
    Check c = make_check("every arrangement has C(n,d) cells", static_cast<double>(draws - stats.violations), 0.0,
                         static_cast<double>(draws), 0.0, stats.violations);
    rep.checks.push_back(c);
  }
}

void run_schlafli_expect(const ExperimentSpec& spec, const RandomStream& rs, Report& rep) {
  const json& p = spec.params;
  const int n = p["n"].get<int>();
  const std::uint64_t draws = count_param(p, "n_draws");
  const std::uint64_t n_g = count_param(p, "n_g");
  if (!p.contains("C")) {
    const int d = p["d"].get<int>();
    const SchlafliRun run = schlafli_volume_mc(n, d, draws, n_g, rs.substream(1), spec.workers);
    for (int i = 0; i <= d; ++i) {
      const Estimate& e = run.estimates[static_cast<std::size_t>(i)];
      rep.estimates.push_back({"E " + indexed("V", i) + "(S_n)", e});
      if (i == 0) continue;
      if (p.contains("k") && p["k"].get<int>() != i) continue;
      const double f = expected_schlafli_volume(n, d, i);
      rep.formulas.push_back({"E " + indexed("V", i) + "(S_n) formula", f});
      rep.checks.push_back(make_check("E " + indexed("V", i) + "(S_n)", e.value, e.std_error, f, 0.0));
    }
    add_inner_counters(rep, draws, n_g, run.inner_discarded);
    rep.counters["redraws"] = run.redraws;
    return;
  }

  const ConeInput c = parse_cone(p["C"]);
  const int d = c.cone.ambient_dim();
  const ConicRegion a = p.contains("A") ? parse_region(p["A"], d) : ConicRegion::whole(d);
  std::vector<double> phi;
  std::uint64_t phi_n = 0;
  if (a.is_whole() && c.descriptor && p["exact"].get<bool>()) {
    phi = exact_intrinsic_volumes(*c.descriptor);
  } else {
    SampleRequest req;
    req.regions.push_back({a});
    const SampleTally t = sample_projections(c.cone, req, count_param(p, "n_rhs"), rs.substream(2), spec.workers);
    phi_n = t.accepted;
    for (auto h : t.region_by_dim[0]) phi.push_back(phi_n ? static_cast<double>(h) / static_cast<double>(phi_n) : 0.0);
  }
  const SchlafliRun run = schlafli_curvature_mc(c.cone, a, n, draws, n_g, rs.substream(1), spec.workers);
  const double cells = static_cast<double>(schlafli_count(n, d));
  for (int k = 0; k <= d; ++k) {
    const Estimate& e = run.estimates[static_cast<std::size_t>(k)];
    rep.estimates.push_back({"E " + indexed("Phi", k) + "(C cap S_n, A)", e});
    if (k == 0) continue;
    if (p.contains("k") && p["k"].get<int>() != k) continue;
    const double f = expected_curvature_formula(phi, n, k);
    std::vector<double> w(phi.size(), 0.0);
    for (int s = 0; s <= std::min(n, d - k); ++s)
      w[static_cast<std::size_t>(k + s)] =
          boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(s)) / cells;
    const double f_se = linear_std_error(w, phi, phi_n);
    rep.formulas.push_back({"E " + indexed("Phi", k) + " formula", f});
    rep.checks.push_back(make_check("E " + indexed("Phi", k) + "(C cap S_n, A)", e.value, e.std_error, f, f_se));
  }
  add_inner_counters(rep, draws, n_g, run.inner_discarded);
  rep.counters["redraws"] = run.redraws;
}

void run_strike_fixed(const ExperimentSpec& spec, const RandomStream& rs, Report& rep) {
  const json& p = spec.params;
  const ConeInput c = parse_cone(p["C"]);
  const int n = p["n"].get<int>();
  const int d = c.cone.ambient_dim();
  std::vector<double> v;
  std::uint64_t v_n = 0;
  if (const auto ex = exact_volumes(c, p["exact"].get<bool>())) {
    v = *ex;
  } else {
    const SampleTally t = sample_projections(c.cone, {}, count_param(p, "n_rhs"), rs.substream(2), spec.workers);
    v_n = t.accepted;
    for (auto h : t.by_dim) v.push_back(v_n ? static_cast<double>(h) / static_cast<double>(v_n) : 0.0);
  }
  const double formula = fixed_intersection_prob(v, n);
  std::vector<double> w(v.size(), 0.0);
  const double cells = static_cast<double>(schlafli_count(n, d));
  for (int j = 1; j <= d; ++j) w[static_cast<std::size_t>(j)] = 2.0 * static_cast<double>(intersection_coefficient(n, j)) / cells;
  const double formula_se = linear_std_error(w, v, v_n);
  const SchlafliRun run = fixed_intersection_mc(c.cone, n, count_param(p, "n_draws"), rs.substream(1), spec.workers);
  rep.estimates.push_back({"P{C cap S_n != o}", run.estimates[0]});
  rep.formulas.push_back({"P{C cap S_n != o} formula", formula});
  rep.checks.push_back(make_check("fixed-cone intersection", run.estimates[0].value, run.estimates[0].std_error, formula, formula_se));
  rep.counters["redraws"] = run.redraws;
}

void run_strike_pair(const ExperimentSpec& spec, const RandomStream& rs, Report& rep) {
  const json& p = spec.params;
  const int n = p["n"].get<int>();
  const int m = p["m"].get<int>();
  const int d = p["d"].get<int>();
  const double formula = pair_intersection_prob(n, m, d);
  const SchlafliRun run = pair_intersection_mc(n, m, d, count_param(p, "n_draws"), rs.substream(1), spec.workers);
  rep.estimates.push_back({"P{S_n cap T_m != o}", run.estimates[0]});
  rep.formulas.push_back({"P{S_n cap T_m != o} formula", formula});
  rep.checks.push_back(make_check("pair intersection", run.estimates[0].value, run.estimates[0].std_error, formula, 0.0));
  rep.counters["redraws"] = run.redraws;
}

}  // namespace

// ---------------------------------------------------------------- spec

const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, params] : schema()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& experiment_parameters() {
  static const std::vector<std::string> keys = [] {
    std::set<std::string> all;
    for (const auto& [name, params] : schema())
      for (const auto& p : params) all.insert(p.key);
    return std::vector<std::string>(all.begin(), all.end());
  }();
  return keys;
}

bool needs_seed(const std::string& command, const json& params) {
  if (command == "project" || command == "faces") return false;
  if (command == "schlafli-count") return params.contains("draws");
  return true;
}

json to_json(const ExperimentSpec& spec) {
  json j = spec.params;
  j["command"] = spec.command;
  if (spec.seed) j["seed"] = *spec.seed;
  j["workers"] = spec.workers;
  return j;
}

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentSpec spec;
  if (!j.contains("command") || !j["command"].is_string()) throw KeyError("command", "missing or not a string");
  spec.command = j["command"].get<std::string>();
  const auto it = schema().find(spec.command);
  if (it == schema().end()) throw KeyError("command", "unknown command '" + spec.command + "'");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
      throw KeyError("seed", "must be a nonnegative integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("workers")) {
    if (!j["workers"].is_number_integer() || j["workers"].get<std::int64_t>() < 1 || j["workers"].get<std::int64_t>() > 1024)
      throw KeyError("workers", "must be an integer in 1..1024");
    spec.workers = j["workers"].get<unsigned>();
  }

  const auto& params = it->second;
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || key == "seed" || key == "workers") continue;
    const bool known = std::any_of(params.begin(), params.end(), [&](const Param& p) { return key == p.key; });
    if (!known) throw KeyError(key, "not a parameter of '" + spec.command + "'");
  }
  for (const Param& p : params) {
    if (j.contains(p.key)) {
      validate_value(p, j[p.key]);
      spec.params[p.key] = j[p.key];
    } else if (p.fallback == kRequired) {
      throw KeyError(p.key, "required by '" + spec.command + "'");
    } else if (*p.fallback != '\0') {
      spec.params[p.key] = json::parse(p.fallback);
    }
  }
  validate_command(spec.command, spec.params);
  return spec;
}

ExperimentSpec parse_spec(const std::string& text, const std::string& origin, const json& overrides) {
  json j = json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
      std::string what = e.what();
      if (const auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
      throw InvalidArgument(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
    }
    if (!j.is_object()) throw InvalidArgument(origin + ":1:1: config must be a JSON object");
  }
  for (const auto& [key, value] : overrides.items()) j[key] = value;
  try {
    return spec_from_json(j);
  } catch (const KeyError& e) {
    if (overrides.contains(e.key())) throw InvalidArgument("--" + std::string(e.what()));
    const auto pos = text.find("\"" + e.key() + "\"");
    if (pos == std::string::npos) throw InvalidArgument(origin + ": " + e.what());
    const auto [line, col] = line_column(text, pos);
    throw InvalidArgument(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

// ---------------------------------------------------------------- report

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

double Report::discard_rate() const {
  const auto get = [&](const char* k) {
    const auto it = counters.find(k);
    return it == counters.end() ? 0.0 : static_cast<double>(it->second);
  };
  const double total = get("accepted") + get("discarded");
  return total > 0 ? get("discarded") / total : 0.0;
}

json to_json(const Report& r) {
  json j;
  j["spec"] = r.spec;
  j["version"] = r.version;
  j["generator"] = r.generator;
  j["estimates"] = json::array();
  for (const auto& e : r.estimates)
    j["estimates"].push_back({{"name", e.name},
                              {"value", number(e.estimate.value)},
                              {"std_error", number(e.estimate.std_error)},
                              {"n", e.estimate.n_samples},
                              {"discarded", e.estimate.n_discarded},
                              {"hits", e.estimate.hits},
                              {"seed", e.estimate.seed},
                              {"stream", e.estimate.stream}});
  j["formulas"] = json::array();
  for (const auto& f : r.formulas) j["formulas"].push_back({{"name", f.name}, {"value", number(f.value)}});
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name},
                           {"lhs", number(c.lhs)},
                           {"lhs_std_error", number(c.lhs_std_error)},
                           {"rhs", number(c.rhs)},
                           {"rhs_std_error", number(c.rhs_std_error)},
                           {"discrepancy_sigma", number(c.sigma)},
                           {"threshold", number(c.threshold)},
                           {"violations", c.violations},
                           {"passed", c.passed}});
  j["counters"] = r.counters;
  j["data"] = r.data;
  if (r.wall_seconds) j["wall_seconds"] = *r.wall_seconds;
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.spec = j.at("spec");
  r.version = j.at("version").get<std::string>();
  r.generator = j.at("generator").get<std::string>();
  for (const auto& e : j.at("estimates")) {
    NamedEstimate ne;
    ne.name = e.at("name").get<std::string>();
    ne.estimate.value = number_from(e.at("value"));
    ne.estimate.std_error = number_from(e.at("std_error"));
    ne.estimate.n_samples = e.at("n").get<std::uint64_t>();
    ne.estimate.n_discarded = e.at("discarded").get<std::uint64_t>();
    ne.estimate.hits = e.at("hits").get<std::uint64_t>();
    ne.estimate.seed = e.at("seed").get<std::uint64_t>();
    ne.estimate.stream = e.at("stream").get<std::uint64_t>();
    r.estimates.push_back(ne);
  }
  for (const auto& f : j.at("formulas")) r.formulas.push_back({f.at("name").get<std::string>(), number_from(f.at("value"))});
  for (const auto& c : j.at("checks")) {
    Check k;
    k.name = c.at("name").get<std::string>();
    k.lhs = number_from(c.at("lhs"));
    k.lhs_std_error = number_from(c.at("lhs_std_error"));
    k.rhs = number_from(c.at("rhs"));
    k.rhs_std_error = number_from(c.at("rhs_std_error"));
    k.sigma = number_from(c.at("discrepancy_sigma"));
    k.threshold = number_from(c.at("threshold"));
    k.violations = c.at("violations").get<std::uint64_t>();
    k.passed = c.at("passed").get<bool>();
    r.checks.push_back(k);
  }
  r.counters = j.at("counters").get<std::map<std::string, std::uint64_t>>();
  r.data = j.at("data");
  if (j.contains("wall_seconds")) r.wall_seconds = j["wall_seconds"].get<double>();
  return r;
}

Report run(const ExperimentSpec& spec) {
  if (needs_seed(spec.command, spec.params) && !spec.seed)
    throw InvalidArgument("command '" + spec.command + "' draws random numbers and needs an explicit seed");
  Report rep;
  rep.spec = to_json(spec);
  rep.generator = RandomStream::algorithm_name();
  const RandomStream rs(spec.seed.value_or(0), 0);
  const std::string& cmd = spec.command;
  if (cmd == "volumes") run_volumes(spec, rs, rep);
  else if (cmd == "project") run_project(spec, rep);
  else if (cmd == "faces") run_faces(spec, rep);
  else if (cmd == "kinematic-global") run_kinematic(spec, rs, rep, false);
  else if (cmd == "kinematic-local") run_kinematic(spec, rs, rep, true);
  else if (cmd == "strike") run_strike(spec, rs, rep);
  else if (cmd == "weighted-top") run_weighted(spec, rs, rep, true);
  else if (cmd == "weighted-sum") run_weighted(spec, rs, rep, false);
  else if (cmd == "schlafli-count") run_schlafli_count(spec, rs, rep);
  else if (cmd == "schlafli-expect") run_schlafli_expect(spec, rs, rep);
  else if (cmd == "strike-fixed-schlafli") run_strike_fixed(spec, rs, rep);
  else if (cmd == "strike-pair-schlafli") run_strike_pair(spec, rs, rep);
  else throw InvalidArgument("unknown command '" + cmd + "'");
  return rep;
}

int exit_status(const Report& r) {
  if (r.discard_rate() > 1e-4) return 3;
  return r.all_passed() ? 0 : 1;
}

std::string emit_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string emit_csv(const Report& r) {
  std::string out = "name,value,std_error,n,seed\n";
  for (const auto& e : r.estimates) {
    std::string name = e.name;
    if (name.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : name) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      name = quoted + "\"";
    }
    out += name + "," + format_double(e.estimate.value) + "," + format_double(e.estimate.std_error) + "," +
           std::to_string(e.estimate.n_samples) + "," + std::to_string(e.estimate.seed) + "\n";
  }
  return out;
}

std::string emit_table(const Report& r) {
  std::ostringstream os;
  os << "command: " << r.spec.value("command", "?") << "\n";
  if (!r.estimates.empty()) {
    os << "estimates:\n";
    for (const auto& e : r.estimates)
      os << "  " << e.name << " = " << format_double(e.estimate.value) << " +- " << format_double(e.estimate.std_error)
         << "  (n=" << e.estimate.n_samples << ")\n";
  }
  if (!r.formulas.empty()) {
    os << "values:\n";
    for (const auto& f : r.formulas) os << "  " << f.name << " = " << format_double(f.value) << "\n";
  }
  if (!r.checks.empty()) {
    os << "checks:\n";
    for (const auto& c : r.checks)
      os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << ": " << format_double(c.lhs) << " vs "
         << format_double(c.rhs) << ", sigma " << format_double(c.sigma)
         << (c.violations ? ", violations " + std::to_string(c.violations) : std::string()) << "\n";
  }
  for (const auto& [k, v] : r.counters) os << "  " << k << ": " << v << "\n";
  if (r.wall_seconds) os << "wall time: " << format_double(*r.wall_seconds) << " s\n";
  return os.str();
}

}  // namespace conekit
