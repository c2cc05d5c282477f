#include <doctest.h>

#include "support.hpp"

using namespace qrf;

TEST_CASE("config errors are reported") {
  CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"subsystems": [], "frames": []})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"group": "A5", "subsystems": [{"name": "A", "rep": {"trivial": 1}}],
                                       "frames": [{"subsystem": "A"}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"group": "Z2", "subsystems": [{"name": "A", "rep": {"bogus": 1}}],
                                       "frames": [{"subsystem": "A"}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"group": "Z2", "subsystems": [{"name": "A", "rep": {"regular": "left"}}],
                                       "frames": [{"subsystem": "B"}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"group": "Z2", "subsystems": [{"name": "A", "rep": {"regular": "left"}}],
                                       "frames": [{"subsystem": "A"}], "tasks": ["dance"]})"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("custom group tables and explicit seeds") {
  const char* text = R"({
    "name": "z2-table",
    "group": {"table": [[0, 1], [1, 0]], "name": "flip"},
    "subsystems": [{"name": "R", "rep": {"regular": "left"}},
                   {"name": "S", "rep": {"matrices": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}}],
    "frames": [{"subsystem": "R", "seed": [1, 0]}],
    "tasks": ["phys_space", {"type": "reduce", "frame": "R"}]
  })";
  ScenarioConfig cfg = parse_config_text(text);
  CHECK(cfg.tasks.size() == 2);
  Report r = run(cfg, {});
  CHECK(r.ok());
  CHECK(r.doc["phys_dim"] == 2);
  CHECK(r.doc["tasks"][1]["task"] == "reduce");
}

TEST_CASE("builtins are listed and parse") {
  auto all = list_builtins();
  CHECK(all.size() >= 10);
  int broken = 0;
  for (const auto& b : all) {
    CHECK(is_builtin(b.name));
    CHECK_NOTHROW(load_config(b.name));
    if (!b.expect_pass) ++broken;
  }
  CHECK(broken == 1);
  CHECK_FALSE(is_builtin("nope"));
}

TEST_CASE("broken frame produces a failing report with a diagnosis") {
  Report r = run(load_config("u1-broken-multiplicity2"), {});
  CHECK_FALSE(r.ok());
  CHECK(r.failures == 1);
  const json& t = r.doc["tasks"][0];
  CHECK(t["task"] == "setup");
  CHECK(t["diagnosis"][0]["message"] == "q=+1: dim M=1 < dim N=2");
}

TEST_CASE("reports are deterministic and round-trip as JSON") {
  ScenarioConfig cfg = load_config("finite-mixed:Z3");
  RunOptions opts;
  opts.seed = 99;
  std::string a = emit(run(cfg, opts), Format::json);
  std::string b = emit(run(cfg, opts), Format::json);
  CHECK(a == b);
  json parsed = json::parse(a);
  CHECK(parsed.dump(2) + "\n" == a);
  CHECK(parsed["summary"]["pass"] == true);
  opts.seed = 100;
  CHECK(emit(run(cfg, opts), Format::json) != a);
}

TEST_CASE("table output") {
  std::string t = emit(run(load_config("su2-three-spin1"), {}), Format::table);
  CHECK(t.find("qrf report  scenario=su2-three-spin1") != std::string::npos);
  CHECK(t.find("PASS  ") != std::string::npos);
  CHECK(t.find("Heisenberg picture unavailable, Schr\xC3\xB6" "dinger picture used") != std::string::npos);
  CHECK(t.find("summary: ") != std::string::npos);
}

TEST_CASE("value parsing helpers") {
  CHECK(parse_complex(json(2.5)) == cplx(2.5, 0));
  CHECK(parse_complex(json::array({1.0, -2.0})) == cplx(1, -2));
  CHECK_THROWS_AS(parse_complex(json("x")), ConfigError);
  CMatrix m = parse_matrix(json::parse("[[1, [0, 1]], [0, 1]]"));
  CHECK(m(0, 1) == cplx(0, 1));
  CHECK_THROWS_AS(parse_matrix(json::parse("[[1, 2], [3]]")), ConfigError);
  Group u1 = Group::u1();
  CHECK(parse_element(u1, json(7.0)).coords[0] == doctest::Approx(7.0 - 2 * M_PI));
  Group s3 = Group::finite(symmetric_group3());
  CHECK_THROWS_AS(parse_element(s3, json(6)), ConfigError);
}
