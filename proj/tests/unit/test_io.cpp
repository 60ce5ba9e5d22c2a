#include <doctest.h>

#include <conekit/errors.hpp>
#include <conekit/experiment.hpp>
#include <conekit/io.hpp>

#include <sstream>

using namespace conekit;
using nlohmann::json;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const Check& find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  FAIL("no check named " << name);
  throw;
}

}  // namespace

TEST_CASE("cone inputs: descriptors and literals") {
  const ConeInput q = parse_cone("quadrant");
  REQUIRE(q.descriptor);
  CHECK(q.cone.ambient_dim() == 2);

  const ConeInput lit = parse_cone(json::parse(R"j({"dim": 2, "generators": [[1, 0], [1, 1]]})j"));
  CHECK_FALSE(lit.descriptor);
  CHECK(lit.cone.ray_count() == 2);
  CHECK(lit.cone.contains(vec({2, 1})));
  CHECK_FALSE(lit.cone.contains(vec({0, 1})));

  const ConeInput h = parse_cone(json::parse(R"j({"dim": 3, "halfspaces": [[0, 0, 1]]})j"));
  CHECK(h.cone.dim() == 3);
  CHECK(h.cone.lineality_dim() == 2);

  CHECK_THROWS_AS(parse_cone(json::parse(R"j({"dim": 2, "generators": [[1, 0, 0]]})j")), InvalidArgument);
  CHECK_THROWS_AS(parse_cone(json::parse(R"j({"dim": 2, "rays": [[1, 0]]})j")), InvalidArgument);
  CHECK_THROWS_AS(parse_cone(json(5)), InvalidArgument);
  CHECK_THROWS_AS(parse_cone("orthant(3)", 2), InvalidArgument);
}

TEST_CASE("cone_to_json round-trips through the literal parser") {
  for (const char* text : {"orthant(3)", "wedge2d(pi/3)", "halfspace(3)", "product(quadrant, subspace(1,1))"}) {
    const PolyhedralCone c = parse_cone(text).cone;
    const PolyhedralCone back = parse_cone(cone_to_json(c)).cone;
    INFO(text);
    CHECK(same_set(c, back));
  }
}

TEST_CASE("region literals") {
  const ConicRegion whole = parse_region("whole", 2);
  CHECK(whole.is_whole());
  CHECK(parse_region(nullptr, 2).is_whole());

  const ConicRegion q = parse_region("quadrant", 2);
  CHECK(q.contains(vec({1, 2})));
  CHECK_FALSE(q.contains(vec({-1, 2})));

  const ConicRegion u = parse_region(json::parse(R"j({"union": ["quadrant", {"dim": 2, "generators": [[-1, -1]]}]})j"), 2);
  CHECK(u.contains(vec({-2, -2})));
  CHECK_FALSE(u.contains(vec({-2, 1})));

  const ConicRegion c = parse_region(json::parse(R"j({"union": ["quadrant"], "complement": true})j"), 2);
  CHECK_FALSE(c.contains(vec({1, 2})));
  CHECK(c.contains(vec({-1, 2})));

  CHECK_THROWS_AS(parse_region(json::parse(R"j({"union": ["orthant(3)"]})j"), 2), InvalidArgument);
  CHECK_THROWS_AS(parse_region(json::parse(R"j({"union": [], "complement": 1})j"), 2), InvalidArgument);
}

TEST_CASE("arrangement dumps replay") {
  const Arrangement a = enumerate_cells(2, {vec({1, 0}), vec({1, 1}), vec({0, 1})});
  const json dump = arrangement_to_json(a);
  CHECK(dump["sign_vectors"].size() == 6);
  const Arrangement b = arrangement_from_json(dump);
  CHECK(b.sign_vectors == a.sign_vectors);

  json tampered = dump;
  tampered["sign_vectors"][0] = {1, -1, 1};
  tampered["sign_vectors"][1] = {1, -1, 1};
  CHECK_THROWS_AS(arrangement_from_json(tampered), InvalidArgument);
}

TEST_CASE("line and column of a byte offset") {
  const std::string text = "ab\ncd\n\nef";
  CHECK(line_column(text, 0) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(line_column(text, 4) == std::pair<std::size_t, std::size_t>{2, 2});
  CHECK(line_column(text, 7) == std::pair<std::size_t, std::size_t>{4, 1});
}

TEST_CASE("specs validate and fill defaults") {
  const ExperimentSpec s = spec_from_json(json::parse(R"j({"command": "volumes", "cone": "orthant(3)", "seed": 7})j"));
  CHECK(s.command == "volumes");
  CHECK(s.seed == 7u);
  CHECK(s.params["n_samples"] == 1000000);
  CHECK(spec_from_json(to_json(s)) == s);

  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "volume"})j")), InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "volumes"})j")), InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "volumes", "cone": "quadrant", "n_rot": 5})j")),
                  InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "volumes", "cone": "quadrant", "n_samples": 0})j")),
                  InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "strike", "C": "quadrant", "D": "orthant(3)"})j")),
                  InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "kinematic-global", "C": "quadrant", "D": "quadrant", "k": 3})j")),
                  InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "weighted-sum", "C": "quadrant", "D": "quadrant", "weight": "sin"})j")),
                  InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "schlafli-expect", "n": 3})j")), InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"j({"command": "schlafli-count", "n": 2, "d": 2, "normals": [[1, 0]]})j")),
                  InvalidArgument);
}

TEST_CASE("config errors point at the offending line") {
  const std::string bad_value = "{\n  \"command\": \"volumes\",\n  \"cone\": \"orthnt(3)\"\n}\n";
  try {
    parse_spec(bad_value, "run.json");
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).starts_with("run.json:3:3: cone:"));
  }
  const std::string bad_syntax = "{\n  \"command\": \"volumes\"\n  \"cone\": \"quadrant\"\n}\n";
  try {
    parse_spec(bad_syntax, "run.json");
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).starts_with("run.json:3:"));
  }
  try {
    parse_spec("", "run.json", json{{"command", "volumes"}, {"cone", "quadrant"}, {"n_samples", -1}});
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).starts_with("--n_samples:"));
  }
  const ExperimentSpec s = parse_spec("{\"command\": \"faces\", \"cone\": \"quadrant\"}", "x", json{{"cone", "orthant(3)"}});
  CHECK(s.params["cone"] == "orthant(3)");
}

TEST_CASE("Schläfli count report") {
  const Report r = run(spec_from_json(json::parse(R"j({"command": "schlafli-count", "n": 4, "d": 2})j")));
  REQUIRE(r.formulas.size() == 1);
  CHECK(r.formulas[0].value == 8.0);
  CHECK(exit_status(r) == 0);
}

TEST_CASE("sampling commands need a seed") {
  CHECK(needs_seed("volumes", json::object()));
  CHECK_FALSE(needs_seed("faces", json::object()));
  CHECK_FALSE(needs_seed("schlafli-count", json{{"n", 3}}));
  CHECK(needs_seed("schlafli-count", json{{"draws", 3}}));
  CHECK_THROWS_AS(run(spec_from_json(json::parse(R"j({"command": "volumes", "cone": "quadrant"})j"))), InvalidArgument);
}

TEST_CASE("volume reports are reproducible and emit one CSV row per volume") {
  const auto spec = spec_from_json(json::parse(R"j({"command": "volumes", "cone": "orthant(3)", "n_samples": 100000, "seed": 7})j"));
  const Report a = run(spec);
  const Report b = run(spec);
  CHECK(emit_json(a) == emit_json(b));
  CHECK(exit_status(a) == 0);
  CHECK(find_check(a, "normalization").sigma == 0.0);

  const std::string csv = emit_csv(a);
  CHECK(csv.starts_with("name,value,std_error,n,seed\n"));
  CHECK(count_lines(csv) == 4 + 1);

  ExperimentSpec many = spec;
  many.workers = 5;
  CHECK(emit_csv(run(many)) == csv);
}

TEST_CASE("reports round-trip through JSON") {
  const auto spec = spec_from_json(json::parse(R"j({"command": "strike", "C": "quadrant", "D": "quadrant", "n_rot": 5000, "seed": 3})j"));
  Report r = run(spec);
  CHECK(r.formulas[0].value == 0.5);
  CHECK(r.checks[0].passed);
  CHECK(report_from_json(json::parse(emit_json(r))) == r);

  r.wall_seconds = 1.25;
  r.checks.push_back(Check{"infinite", 1, 0, 2, 0, std::numeric_limits<double>::infinity(), 4, 0, false});
  const Report back = report_from_json(json::parse(emit_json(r)));
  CHECK(back == r);
  CHECK(exit_status(back) == 1);
}

TEST_CASE("high discard rates map to the degenerate exit status") {
  Report r;
  r.counters["accepted"] = 9999;
  r.counters["discarded"] = 2;
  CHECK(r.discard_rate() > 1e-4);
  CHECK(exit_status(r) == 3);
  r.counters["discarded"] = 1;
  CHECK(exit_status(r) == 0);
}

TEST_CASE("every command runs on a small budget") {
  const char* specs[] = {
      R"j({"command": "project", "cone": "quadrant", "point": [1, -2]})j",
      R"j({"command": "faces", "cone": "orthant(3)"})j",
      R"j({"command": "kinematic-global", "C": "quadrant", "D": "halfplane", "n_rot": 200, "n_g": 100, "seed": 1})j",
      R"j({"command": "kinematic-local", "C": "halfplane", "D": "halfplane", "A": "quadrant", "k": 1, "n_rot": 200, "n_g": 100, "n_rhs": 10000, "seed": 1})j",
      R"j({"command": "weighted-top", "C": "halfplane", "D": "halfplane", "n_rot": 200, "n_g": 100, "n_rhs": 10000, "seed": 1})j",
      R"j({"command": "weighted-sum", "C": {"dim": 3, "generators": [[1, 0, 0]]}, "D": {"dim": 3, "generators": [[0, 1, 0]]}, "weight": "t", "n_rot": 200, "n_g": 100, "n_rhs": 10000, "n_c": 1000, "seed": 1})j",
      R"j({"command": "schlafli-count", "n": 6, "d": 3, "draws": 5, "seed": 1})j",
      R"j({"command": "schlafli-expect", "n": 4, "d": 2, "n_draws": 200, "n_g": 100, "seed": 1})j",
      R"j({"command": "schlafli-expect", "n": 2, "C": "quadrant", "A": "halfplane", "n_draws": 200, "n_g": 100, "n_rhs": 10000, "seed": 1})j",
      R"j({"command": "strike-fixed-schlafli", "C": "quadrant", "n": 2, "n_draws": 500, "seed": 1})j",
      R"j({"command": "strike-pair-schlafli", "n": 2, "m": 3, "d": 3, "n_draws": 500, "seed": 1})j",
  };
  for (const char* text : specs) {
    INFO(text);
    const Report r = run(spec_from_json(json::parse(text)));
    CHECK_FALSE(r.checks.empty());
    CHECK(report_from_json(to_json(r)) == r);
    CHECK(exit_status(r) == 0);
  }
}
