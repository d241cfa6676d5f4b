#pragma once

// Reference solver, independent of the grid pipeline. Problems are solved by
// shooting from both walls with an adaptive RKF78 integrator and matching
// value and slope at the midpoint; series or closed-form starts absorb the
// boundary layers that the integrator cannot reach. Accuracy is limited by
// the start expansions and the step tolerance, about ten significant digits.
//
// Scope: the interval, and the radial part of the disk. Untruncated disk
// power laws are accepted up to alpha = 1.6; past that the wall expansion
// used here loses the drift term's cross corrections. Interval problems and
// truncated ladders carry no such limit.

#include <limits>
#include <vector>

#include "hopf/extrapolation.hpp"
#include "hopf/geometry.hpp"
#include "hopf/potential.hpp"
#include "hopf/source.hpp"

namespace hopf::oracle {

struct Problem {
  Domain domain = Domain::interval;
  PotentialSpec potential;
  SourceSpec source;
  double cutoff = std::numeric_limits<double>::infinity();
};

struct Reference {
  std::vector<double> values;  // u at the requested probes
  double inward0 = 0.0;        // du/dn at x = 0; unused on the disk
  double inward1 = 0.0;        // du/dn at x = 1, or at the disk wall
};

// probes: x on the interval, r on the disk, each inside [1e-6, 1 - 1e-6]
// or exactly 0 on the disk (the center value is the matched coefficient).
Reference solve(const Problem& problem, const std::vector<double>& probes);

struct LadderReference {
  std::vector<double> derivatives;  // inward derivative per cutoff
  Extrapolated limit;
};

// Boundary derivative along a truncation ladder, plus its extrapolated
// limit. end picks the interval endpoint (0 or 1); the disk always reports
// the wall.
LadderReference truncation_limit(const Problem& problem,
                                 const TruncationLadder& ladder, int end);

}  // namespace hopf::oracle
