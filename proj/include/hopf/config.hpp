#pragma once

// Experiment configs for the hopflab runner: one JSON file drives every
// subcommand. Parsing is eager and strict (unknown keys are rejected, every
// number must be finite), and the raw file text is kept so output headers
// can echo the configuration byte for byte.
//
// Recognized keys:
//   domain           "interval" | "disk"                          required
//   potential        {"kind": "zero"}                             required
//                    {"kind": "constant", "value": v}
//                    {"kind": "power_law", "strength": C,
//                     "alpha": a, "anchor": "boundary"|"left"|"right"}
//                    {"kind": "table", "samples": [..]}
//   source           "zero"|"one"|"x"|"sin"|"indicator(l,r)"      required
//                    or a sample table [..]
//   resolution       integer or [integers]                        required
//   grading          number >= 1 (interval only)                  default 1
//   ladder           {"k0","ratio","levels","tau_stop"}           defaults
//   epsilons         [offsets] for the classical quotient         auto
//   boundary_points  [where], x on the interval, phi on the disk  domain ends
//   tolerances       {"linear","quadrature","classify"}           defaults
//   output_dir       string                                       "out"
//   seed             integer                                      0
//   alphas           [exponents]   (hopf-scan)
//   strengths        [C values]    (hopf-scan, default [1])
//   measure          {"atoms": [{"point","mass"},..],
//                     "density": number | [per-node values]}      (measure-bvp)
//
// Numeric values may be written as JSON numbers or as decimal strings
// ("1e-10"); both parse identically.

#include <stdexcept>
#include <string>
#include <vector>

#include "hopf/geometry.hpp"
#include "hopf/potential.hpp"
#include "hopf/singular.hpp"
#include "hopf/source.hpp"

namespace hopf {

inline constexpr const char* kVersionString = "hopflab 1.0.0";

// Raised for malformed or incomplete configs; the runner maps it to exit
// code 2, anything else thrown during a run to exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double linear = 1e-10;     // PCG relative residual
  double quadrature = 1e-6;  // graded-integral target
  double classify = 1e-3;    // zero-flux threshold scale
};

struct ExperimentConfig {
  std::string raw;  // config file text, echoed into every output header

  Domain domain = Domain::interval;
  PotentialSpec potential;
  SourceSpec source;
  std::vector<int> resolutions;  // as given; commands use the last (finest)
  double grading = 1.0;
  TruncationLadder ladder;
  std::vector<double> epsilons;
  std::vector<double> boundary_where;
  Tolerances tolerances;
  std::string output_dir = "out";
  unsigned long seed = 0;

  std::vector<double> alphas;
  std::vector<double> strengths{1.0};

  bool has_measure = false;
  std::vector<BoundaryAtom> atoms;
  std::vector<double> measure_density;  // one value = constant density

  std::vector<BoundaryPoint> boundary_points() const;
};

// Parse and validate. Throws ConfigError with a message naming the offending
// key. boundary_where defaults to the domain ends ({0,1} on the interval,
// {0} on the disk) when the key is absent.
ExperimentConfig parse_config(const std::string& text);

// Reads the file and parses it; the file text lands in .raw verbatim.
ExperimentConfig load_config(const std::string& path);

// Expands the config's measure against a concrete grid: a one-entry density
// is replicated across the boundary quadrature nodes, an explicit table must
// match their count. Throws ConfigError on size mismatch.
BoundaryMeasure config_measure(const ExperimentConfig& cfg, const Grid& grid);

}  // namespace hopf
