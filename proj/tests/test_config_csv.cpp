#include <cstdio>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "hopf/config.hpp"
#include "hopf/csv.hpp"

using namespace hopf;

namespace {

std::string base_config(const std::string& extra = "") {
  std::string s = R"({
    "domain": "interval",
    "potential": {"kind": "power_law", "strength": 4.0, "alpha": 2.0,
                  "anchor": "left"},
    "source": "one",
    "resolution": [200, 400])";
  if (!extra.empty()) s += ",\n" + extra;
  s += "\n}";
  return s;
}

}  // namespace

TEST_SUITE("config_csv") {

TEST_CASE("full config round trip") {
  const std::string text = base_config(R"(
    "grading": 2.0,
    "ladder": {"k0": 10, "ratio": 4, "levels": 16, "tau_stop": 0},
    "epsilons": [0.1, 0.05, 0.025],
    "boundary_points": [0, 1],
    "tolerances": {"linear": "1e-11", "quadrature": 1e-7, "classify": 1e-3},
    "output_dir": "results",
    "seed": 42,
    "alphas": [1.0, 1.5, 2.0],
    "strengths": [1.0, 4.0])");
  const auto cfg = parse_config(text);
  CHECK(cfg.raw == text);
  CHECK(cfg.domain == Domain::interval);
  CHECK(cfg.potential.kind == PotentialKind::power_law);
  CHECK(cfg.potential.C == 4.0);
  CHECK(cfg.potential.alpha == 2.0);
  CHECK(cfg.potential.anchor == PowerAnchor::left);
  CHECK(cfg.source.kind == SourceKind::one);
  REQUIRE(cfg.resolutions.size() == 2);
  CHECK(cfg.resolutions.back() == 400);
  CHECK(cfg.grading == 2.0);
  REQUIRE(cfg.ladder.cutoffs.size() == 16);
  CHECK(cfg.ladder.cutoffs.front() == 10.0);
  CHECK(cfg.ladder.cutoffs[1] == 40.0);
  CHECK(cfg.ladder.tau_stop == 0.0);
  CHECK(cfg.epsilons == std::vector<double>{0.1, 0.05, 0.025});
  CHECK(cfg.tolerances.linear == 1e-11);
  CHECK(cfg.tolerances.quadrature == 1e-7);
  CHECK(cfg.output_dir == "results");
  CHECK(cfg.seed == 42);
  CHECK(cfg.alphas == std::vector<double>{1.0, 1.5, 2.0});
  CHECK(cfg.strengths == std::vector<double>{1.0, 4.0});
  CHECK_FALSE(cfg.has_measure);

  const auto pts = cfg.boundary_points();
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].where == 0.0);
  CHECK(pts[1].where == 1.0);
}

TEST_CASE("missing keys are named") {
  for (const char* key : {"domain", "potential", "source", "resolution"}) {
    std::string text = R"({
      "domain": "interval",
      "potential": {"kind": "zero"},
      "source": "one",
      "resolution": 100
    })";
    const auto pos = text.find(std::string("\"") + key + "\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos + 1, std::string(key).size(), std::string("_") + key);
    try {
      parse_config(text);
      FAIL("config without " << key << " parsed");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
  }
}

TEST_CASE("numbers accept decimal strings") {
  const auto cfg = parse_config(R"({
    "domain": "interval",
    "potential": {"kind": "constant", "value": "2.5"},
    "source": "one",
    "resolution": 100,
    "grading": "1.5"
  })");
  CHECK(cfg.potential.c == 2.5);
  CHECK(cfg.grading == 1.5);
  CHECK_THROWS_AS(parse_config(R"({
    "domain": "interval",
    "potential": {"kind": "constant", "value": "2.5x"},
    "source": "one",
    "resolution": 100
  })"),
                  ConfigError);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(base_config(R"("resolutoin": 100)")),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({
        "domain": "interval",
        "potential": {"kind": "zero", "valeu": 1},
        "source": "one",
        "resolution": 100
      })"),
      ConfigError);
}

TEST_CASE("validation catches bad values") {
  // resolution below the grid floor
  CHECK_THROWS_AS(parse_config(R"({
    "domain": "interval", "potential": {"kind": "zero"},
    "source": "one", "resolution": 3
  })"),
                  ConfigError);
  // grading under 1
  CHECK_THROWS_AS(parse_config(R"({
    "domain": "interval", "potential": {"kind": "zero"},
    "source": "one", "resolution": 100, "grading": 0.5
  })"),
                  ConfigError);
  // interval boundary points are the endpoints only
  CHECK_THROWS_AS(parse_config(R"({
    "domain": "interval", "potential": {"kind": "zero"},
    "source": "one", "resolution": 100, "boundary_points": [0.25]
  })"),
                  ConfigError);
  // sources must be recognized
  CHECK_THROWS_AS(parse_config(R"({
    "domain": "interval", "potential": {"kind": "zero"},
    "source": "two", "resolution": 100
  })"),
                  ConfigError);
}

TEST_CASE("disk configs default the wall point") {
  const auto cfg = parse_config(R"({
    "domain": "disk",
    "potential": {"kind": "zero"},
    "source": "one",
    "resolution": 32
  })");
  const auto pts = cfg.boundary_points();
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].domain == Domain::disk);
  CHECK(pts[0].where == 0.0);
}

TEST_CASE("measures parse and expand against the grid") {
  const auto cfg = parse_config(base_config(R"(
    "measure": {"atoms": [{"point": 0, "mass": 0.5},
                          {"point": 1, "mass": 0.5}]})"));
  CHECK(cfg.has_measure);
  REQUIRE(cfg.atoms.size() == 2);
  CHECK(cfg.atoms[0].mass == 0.5);

  const Grid g = build_grid(Domain::interval, 100);
  const auto nu = config_measure(cfg, g);
  CHECK(nu.atoms.size() == 2);
  CHECK(nu.density.empty());
  CHECK(nu.total(g) == doctest::Approx(1.0));

  // one density value is replicated over the boundary quadrature nodes
  const auto cfgd = parse_config(base_config(R"("measure": {"density": 1.5})"));
  const auto nud = config_measure(cfgd, g);
  REQUIRE(nud.density.size() == 2);
  CHECK(nud.density[0] == 1.5);

  // an explicit table must match the node count exactly
  const auto cfg3 = parse_config(
      base_config(R"("measure": {"density": [1.0, 2.0, 3.0]})"));
  CHECK_THROWS_AS(config_measure(cfg3, g), ConfigError);
}

TEST_CASE("negative atom masses are refused") {
  try {
    parse_config(base_config(
        R"("measure": {"atoms": [{"point": 0, "mass": -0.5}]})"));
    FAIL("negative mass parsed");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("negative") != std::string::npos);
  }
}

TEST_CASE("cells render at full precision") {
  CHECK(format_cell(0.125) == "0.125");
  CHECK(format_cell(1.0 / 3.0) == "0.33333333333333331");
  const double v = 0.1234567890123456789;
  CHECK(std::stod(format_cell(v)) == v);
}

TEST_CASE("row widths are enforced") {
  CsvFile t;
  t.columns = {"a", "b"};
  t.add_row({"1", "2"});
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row({"1", "2", "3"}), std::invalid_argument);
}

TEST_CASE("written files carry the meta block and a clean body") {
  CsvFile t;
  t.columns = {"x", "u"};
  t.add_row({format_cell(0.5), format_cell(0.125)});

  const std::string path = "/tmp/hopf_csv_test.csv";
  write_csv(path, t, standard_meta("{\"domain\": \"interval\"}"));
  const std::string text = read_text_file(path);
  std::remove(path.c_str());

  CHECK(text.find("# hopflab") != std::string::npos);
  CHECK(text.find("generated") != std::string::npos);
  CHECK(text.find("domain") != std::string::npos);

  const std::string body = csv_body(text);
  CHECK(body == "x,u\n0.5,0.125\n");
}

}  // TEST_SUITE
