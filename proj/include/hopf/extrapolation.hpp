#pragma once

// Sequence extrapolation: Richardson in a mesh parameter for difference
// quotients, Aitken delta-squared for truncation ladders.

#include <vector>

namespace hopf {

struct Extrapolated {
  double value = 0.0;
  double error = 0.0;   // estimate, from the last correction applied
  int stages = 0;       // extrapolation stages actually used
  bool monotone = true; // input sequence was monotone
};

// Richardson extrapolation of difference quotients q(eps_j) sampled at a
// geometric epsilon sequence with ratio 2 (eps_0 > eps_1 > ...). The leading
// error is assumed first order in eps; at most two elimination stages run
// (orders 1 then 2).
Extrapolated richardson_ratio2(const std::vector<double>& q);

// Aitken limit of a (nearly) geometrically converging sequence, iterated at
// most `max_stages` times. Sequences that have already settled (increments
// at rounding level) short-circuit to the last entry. The error field is the
// magnitude of the last correction, or of the last increment when no stage
// could be applied.
Extrapolated aitken_limit(const std::vector<double>& s, int max_stages = 2);

}  // namespace hopf
