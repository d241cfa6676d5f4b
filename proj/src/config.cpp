#include "hopf/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hopf {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(std::string("config key \"") + key + "\" is missing");
  return *it;
}

// Numbers may arrive as JSON numbers or as decimal strings.
double as_number(const json& v, const std::string& key) {
  double out = 0.0;
  if (v.is_number()) {
    out = v.get<double>();
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    try {
      out = std::stod(s, &used);
    } catch (const std::exception&) {
      fail("config key \"" + key + "\" is not a number: \"" + s + "\"");
    }
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used])))
      ++used;
    if (used != s.size())
      fail("config key \"" + key + "\" is not a number: \"" + s + "\"");
  } else {
    fail("config key \"" + key + "\" must be a number");
  }
  if (!std::isfinite(out))
    fail("config key \"" + key + "\" must be finite");
  return out;
}

long as_integer(const json& v, const std::string& key) {
  const double d = as_number(v, key);
  const long n = static_cast<long>(d);
  if (static_cast<double>(n) != d)
    fail("config key \"" + key + "\" must be an integer");
  return n;
}

std::vector<double> as_number_list(const json& v, const std::string& key) {
  if (!v.is_array()) fail("config key \"" + key + "\" must be a list");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      fail("unknown config key \"" + where + it.key() + "\"");
}

Domain parse_domain(const json& v) {
  if (!v.is_string()) fail("config key \"domain\" must be a string");
  const std::string s = v.get<std::string>();
  if (s == "interval") return Domain::interval;
  if (s == "disk") return Domain::disk;
  fail("config key \"domain\" must be \"interval\" or \"disk\", got \"" + s +
       "\"");
}

PotentialSpec parse_potential(const json& v) {
  if (!v.is_object()) fail("config key \"potential\" must be an object");
  const json& kindv = require(v, "kind");
  if (!kindv.is_string()) fail("config key \"potential.kind\" must be a string");
  const std::string kind = kindv.get<std::string>();
  if (kind == "zero") {
    reject_unknown(v, "potential.", {"kind"});
    return PotentialSpec::zero();
  }
  if (kind == "constant") {
    reject_unknown(v, "potential.", {"kind", "value"});
    return PotentialSpec::constant(as_number(require(v, "value"), "potential.value"));
  }
  if (kind == "power_law") {
    reject_unknown(v, "potential.", {"kind", "strength", "alpha", "anchor"});
    const double C = as_number(require(v, "strength"), "potential.strength");
    const double alpha = as_number(require(v, "alpha"), "potential.alpha");
    PowerAnchor anchor = PowerAnchor::boundary;
    if (v.contains("anchor")) {
      if (!v["anchor"].is_string())
        fail("config key \"potential.anchor\" must be a string");
      const std::string a = v["anchor"].get<std::string>();
      if (a == "boundary") anchor = PowerAnchor::boundary;
      else if (a == "left") anchor = PowerAnchor::left;
      else if (a == "right") anchor = PowerAnchor::right;
      else fail("config key \"potential.anchor\" must be \"boundary\", \"left\" or \"right\"");
    }
    try {
      return PotentialSpec::power_law(C, alpha, anchor);
    } catch (const std::exception& e) {
      fail(std::string("config key \"potential\": ") + e.what());
    }
  }
  if (kind == "table") {
    reject_unknown(v, "potential.", {"kind", "samples"});
    try {
      return PotentialSpec::tabulated(
          as_number_list(require(v, "samples"), "potential.samples"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(std::string("config key \"potential\": ") + e.what());
    }
  }
  fail("config key \"potential.kind\" must be \"zero\", \"constant\", "
       "\"power_law\" or \"table\", got \"" + kind + "\"");
}

SourceSpec parse_source(const json& v) {
  if (v.is_array()) {
    try {
      return SourceSpec::table(as_number_list(v, "source"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(std::string("config key \"source\": ") + e.what());
    }
  }
  if (!v.is_string())
    fail("config key \"source\" must be a name or a sample table");
  const std::string s = v.get<std::string>();
  if (s == "zero") return SourceSpec::zero();
  if (s == "one") return SourceSpec::one();
  if (s == "x") return SourceSpec::coordinate();
  if (s == "sin") return SourceSpec::sine_bump();
  double l = 0.0, r = 0.0;
  if (std::sscanf(s.c_str(), "indicator(%lf,%lf)", &l, &r) == 2) {
    try {
      return SourceSpec::indicator(l, r);
    } catch (const std::exception& e) {
      fail(std::string("config key \"source\": ") + e.what());
    }
  }
  fail("config key \"source\" names no known source: \"" + s + "\"");
}

TruncationLadder parse_ladder(const json& v) {
  if (!v.is_object()) fail("config key \"ladder\" must be an object");
  reject_unknown(v, "ladder.", {"k0", "ratio", "levels", "tau_stop"});
  double k0 = 10.0, ratio = 4.0, tau = 1e-6;
  long levels = 12;
  if (v.contains("k0")) k0 = as_number(v["k0"], "ladder.k0");
  if (v.contains("ratio")) ratio = as_number(v["ratio"], "ladder.ratio");
  if (v.contains("levels")) levels = as_integer(v["levels"], "ladder.levels");
  if (v.contains("tau_stop")) tau = as_number(v["tau_stop"], "ladder.tau_stop");
  if (!(k0 > 0.0) || !(ratio > 1.0) || levels < 1)
    fail("config key \"ladder\" needs k0 > 0, ratio > 1, levels >= 1");
  return default_ladder(k0, ratio, static_cast<int>(levels), tau);
}

}  // namespace

std::vector<BoundaryPoint> ExperimentConfig::boundary_points() const {
  std::vector<BoundaryPoint> out;
  out.reserve(boundary_where.size());
  for (double w : boundary_where) out.push_back({domain, w});
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config must be a JSON object");
  reject_unknown(root, "",
                 {"domain", "potential", "source", "resolution", "grading",
                  "ladder", "epsilons", "boundary_points", "tolerances",
                  "output_dir", "seed", "alphas", "strengths", "measure"});

  ExperimentConfig cfg;
  cfg.raw = text;
  cfg.domain = parse_domain(require(root, "domain"));
  cfg.potential = parse_potential(require(root, "potential"));
  cfg.source = parse_source(require(root, "source"));

  const json& res = require(root, "resolution");
  if (res.is_array()) {
    for (std::size_t i = 0; i < res.size(); ++i) {
      const long n =
          as_integer(res[i], "resolution[" + std::to_string(i) + "]");
      if (n < 4) fail("config key \"resolution\" entries must be >= 4");
      cfg.resolutions.push_back(static_cast<int>(n));
    }
    if (cfg.resolutions.empty())
      fail("config key \"resolution\" must not be an empty list");
  } else {
    const long n = as_integer(res, "resolution");
    if (n < 4) fail("config key \"resolution\" must be >= 4");
    cfg.resolutions.push_back(static_cast<int>(n));
  }

  if (root.contains("grading")) {
    cfg.grading = as_number(root["grading"], "grading");
    if (!(cfg.grading >= 1.0))
      fail("config key \"grading\" must be >= 1");
  }
  if (root.contains("ladder")) cfg.ladder = parse_ladder(root["ladder"]);
  else cfg.ladder = default_ladder();

  if (root.contains("epsilons")) {
    cfg.epsilons = as_number_list(root["epsilons"], "epsilons");
    for (double e : cfg.epsilons)
      if (!(e > 0.0) || e >= 0.5)
        fail("config key \"epsilons\" entries must lie in (0, 0.5)");
  }

  if (root.contains("boundary_points")) {
    cfg.boundary_where =
        as_number_list(root["boundary_points"], "boundary_points");
    if (cfg.boundary_where.empty())
      fail("config key \"boundary_points\" must not be empty");
    if (cfg.domain == Domain::interval)
      for (double w : cfg.boundary_where)
        if (w != 0.0 && w != 1.0)
          fail("config key \"boundary_points\" on the interval must be 0 or 1");
  } else {
    cfg.boundary_where =
        cfg.domain == Domain::interval ? std::vector<double>{0.0, 1.0}
                                       : std::vector<double>{0.0};
  }

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) fail("config key \"tolerances\" must be an object");
    reject_unknown(t, "tolerances.", {"linear", "quadrature", "classify"});
    if (t.contains("linear"))
      cfg.tolerances.linear = as_number(t["linear"], "tolerances.linear");
    if (t.contains("quadrature"))
      cfg.tolerances.quadrature =
          as_number(t["quadrature"], "tolerances.quadrature");
    if (t.contains("classify"))
      cfg.tolerances.classify = as_number(t["classify"], "tolerances.classify");
    if (!(cfg.tolerances.linear > 0.0) || !(cfg.tolerances.quadrature > 0.0) ||
        !(cfg.tolerances.classify > 0.0))
      fail("config key \"tolerances\" entries must be positive");
  }

  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string())
      fail("config key \"output_dir\" must be a string");
    cfg.output_dir = root["output_dir"].get<std::string>();
    if (cfg.output_dir.empty())
      fail("config key \"output_dir\" must not be empty");
  }
  if (root.contains("seed")) {
    const long s = as_integer(root["seed"], "seed");
    if (s < 0) fail("config key \"seed\" must be nonnegative");
    cfg.seed = static_cast<unsigned long>(s);
  }

  if (root.contains("alphas"))
    cfg.alphas = as_number_list(root["alphas"], "alphas");
  if (root.contains("strengths")) {
    cfg.strengths = as_number_list(root["strengths"], "strengths");
    if (cfg.strengths.empty())
      fail("config key \"strengths\" must not be empty");
  }

  if (root.contains("measure")) {
    const json& m = root["measure"];
    if (!m.is_object()) fail("config key \"measure\" must be an object");
    reject_unknown(m, "measure.", {"atoms", "density"});
    cfg.has_measure = true;
    if (m.contains("atoms")) {
      const json& atoms = m["atoms"];
      if (!atoms.is_array())
        fail("config key \"measure.atoms\" must be a list");
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string where = "measure.atoms[" + std::to_string(i) + "]";
        const json& a = atoms[i];
        if (!a.is_object()) fail("config key \"" + where + "\" must be an object");
        reject_unknown(a, where + ".", {"point", "mass"});
        const double p = as_number(require(a, "point"), where + ".point");
        const double mass = as_number(require(a, "mass"), where + ".mass");
        if (mass < 0.0)
          fail("config key \"" + where +
               ".mass\" is negative; measures must be nonnegative");
        if (cfg.domain == Domain::interval && p != 0.0 && p != 1.0)
          fail("config key \"" + where + ".point\" on the interval must be 0 or 1");
        cfg.atoms.push_back({BoundaryPoint{cfg.domain, p}, mass});
      }
    }
    if (m.contains("density")) {
      if (m["density"].is_array())
        cfg.measure_density = as_number_list(m["density"], "measure.density");
      else
        cfg.measure_density = {as_number(m["density"], "measure.density")};
      for (double d : cfg.measure_density)
        if (d < 0.0)
          fail("config key \"measure.density\" has a negative value; "
               "measures must be nonnegative");
    }
    if (cfg.atoms.empty() && cfg.measure_density.empty())
      fail("config key \"measure\" needs at least one atom or a density");
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

BoundaryMeasure config_measure(const ExperimentConfig& cfg, const Grid& grid) {
  BoundaryMeasure nu;
  nu.atoms = cfg.atoms;
  if (!cfg.measure_density.empty()) {
    const std::size_t want = boundary_quadrature(grid).size();
    if (cfg.measure_density.size() == 1)
      nu.density.assign(want, cfg.measure_density.front());
    else if (cfg.measure_density.size() == want)
      nu.density = cfg.measure_density;
    else
      fail("config key \"measure.density\" has " +
           std::to_string(cfg.measure_density.size()) + " values but the grid has " +
           std::to_string(want) + " boundary nodes");
  }
  return nu;
}

}  // namespace hopf
