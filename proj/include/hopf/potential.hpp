#pragma once

// Nonnegative potentials V and their truncation ladders V_k = min(V, k).
//
// The power-law family V = C * dist^-alpha is the workhorse; `anchor` selects
// which boundary piece the distance is measured to. anchor::boundary uses the
// full boundary distance (singular at both interval endpoints, or at the disk
// rim); anchor::left / anchor::right measure to a single interval endpoint,
// which gives a potential singular at one end and bounded at the other.

#include <limits>
#include <string>
#include <vector>

#include "hopf/geometry.hpp"

namespace hopf {

enum class PotentialKind { zero, constant, power_law, tabulated };
enum class PowerAnchor { boundary, left, right };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  double c = 0.0;      // constant value
  double C = 0.0;      // power-law strength
  double alpha = 0.0;  // power-law exponent
  PowerAnchor anchor = PowerAnchor::boundary;
  // tabulated: one sample per uniform cell in the boundary-distance
  // coordinate (x on the interval, r on the disk)
  std::vector<double> samples;

  static PotentialSpec zero();
  static PotentialSpec constant(double value);
  static PotentialSpec power_law(double C, double alpha,
                                 PowerAnchor anchor = PowerAnchor::boundary);
  static PotentialSpec tabulated(std::vector<double> samples);

  bool bounded() const { return kind != PotentialKind::power_law || alpha <= 0.0; }
  // supremum of V, +inf for singular power laws
  double sup() const;
  std::string describe() const;
};

// Pointwise evaluation. Throws std::domain_error when the value would be
// infinite (singular power law evaluated on the boundary itself).
double evaluate(const PotentialSpec& v, Domain domain, const Point& p);

// min(V(p), cutoff)
double evaluate_truncated(const PotentialSpec& v, double cutoff, Domain domain,
                          const Point& p);

// V sampled at every grid node (interval nodes or disk cells), truncated.
std::vector<double> sample_truncated(const PotentialSpec& v, const Grid& g,
                                     double cutoff);

struct TruncationLadder {
  std::vector<double> cutoffs;  // strictly increasing, at least one
  double tau_stop = 1e-6;  // relative L1 stop for limit solves; <= 0 walks
                           // every level regardless of field convergence
};

// cutoffs k_j = k0 * ratio^j for j = 0..levels-1
TruncationLadder default_ladder(double k0 = 10.0, double ratio = 4.0,
                                int levels = 12, double tau_stop = 1e-6);

// ladder ending exactly at k_max with the given ratio and level count
TruncationLadder ladder_ending_at(double k_max, double ratio, int levels,
                                  double tau_stop = 1e-6);

}  // namespace hopf
