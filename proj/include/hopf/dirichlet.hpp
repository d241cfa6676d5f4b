#pragma once

// Dirichlet solves for -lap(u) + min(V,k) u = f with zero trace, the
// truncation ladder driving u_k down to the limit field, the torsion
// function, the source majorant, and the discrete energy functional.

#include <limits>
#include <string>
#include <vector>

#include "hopf/geometry.hpp"
#include "hopf/potential.hpp"
#include "hopf/source.hpp"

namespace hopf {

// A source sampled at the grid's interior nodes with its norms cached.
struct SourceField {
  Grid grid;
  std::vector<double> values;
  double norm_l1 = 0.0;   // sum of cell * |f|
  double norm_sup = 0.0;  // max |f| over nodes
};

SourceField sample_source(const Grid& grid, const SourceSpec& spec);
SourceField source_from_values(const Grid& grid, std::vector<double> values);

struct SolveResult {
  Grid grid;
  std::string potential;  // human-readable potential + cutoff tag
  double cutoff = std::numeric_limits<double>::infinity();
  std::vector<double> u;
  double residual = 0.0;  // relative linear-solve residual
  int iterations = 0;
  double absorption = 0.0;  // integral of min(V,k) |u|
  double norm_l1 = 0.0;
  double norm_sup = 0.0;
};

// One solve at a fixed cutoff. The assembled operator is a symmetric
// M-matrix, so nonnegative sources give nonnegative fields exactly and
// raising the truncation level can only lower the field.
SolveResult solve_truncated(const Grid& grid, const PotentialSpec& V,
                            double cutoff, const SourceField& f,
                            double tol = 1e-10);

struct LimitSolution {
  TruncationLadder ladder;
  std::vector<SolveResult> levels;
  std::vector<double> u;           // the last level's field
  std::vector<double> increments;  // L1 distance between consecutive levels
  bool converged = false;
};

// Walks the ladder until two consecutive relative L1 increments fall under
// ladder.tau_stop, or until the cutoff passes sup(V), whichever comes first.
// Signed sources are split f = f+ - f- and the two nonnegative problems are
// solved separately, so each level inherits the monotone comparison
// structure. Exhausting the ladder is reported through the converged flag,
// not an error.
LimitSolution solve_limit(const Grid& grid, const PotentialSpec& V,
                          const TruncationLadder& ladder, const SourceField& f,
                          double tol = 1e-10);

// Solution of -lap(theta) = 1 with zero trace.
SolveResult torsion_function(const Grid& grid, double tol = 1e-10);

// Solution of -lap(w) = |f| with zero trace; dominates every truncated
// solve with source f nodewise.
SolveResult majorant(const Grid& grid, const SourceField& f,
                     double tol = 1e-10);

// Discrete energy (1/2) int |grad z|^2 + min(V,k) z^2 - int f z for a field
// vanishing on the boundary. Evaluates the same quadratic form the solver
// minimizes, via the assembled operator.
double energy(const Grid& grid, const PotentialSpec& V, double cutoff,
              const std::vector<double>& z, const SourceField& f);

double absorption_integral(const SolveResult& r);

}  // namespace hopf
