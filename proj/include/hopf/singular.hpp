#pragma once

// Boundary measures as data: truncated solves with Dirac and atom-plus-
// density boundary values, the mass trace that decides whether a boundary
// point is exceptional for the potential, the distance-weighted integral
// criterion predicting the same dichotomy, torsion-pairing defect estimates,
// and the duality identity tying the dual field to the forward flux.

#include <vector>

#include "hopf/boundary.hpp"
#include "hopf/dirichlet.hpp"
#include "hopf/extrapolation.hpp"
#include "hopf/geometry.hpp"
#include "hopf/potential.hpp"

namespace hopf {

struct BoundaryAtom {
  BoundaryPoint point;
  double mass = 0.0;
};

// Nonnegative measure on the boundary: finitely many atoms plus an optional
// density sampled at the boundary quadrature nodes ({left, right} on the
// interval, one value per sector on the disk). Empty density means atoms
// only.
struct BoundaryMeasure {
  std::vector<BoundaryAtom> atoms;
  std::vector<double> density;
  double total(const Grid& grid) const;
};

// -lap(v) + min(V,k) v = 0 with boundary datum nu: each atom puts
// mass / (node weight) on the boundary node nearest its point, the density
// contributes its nodal values. Nonnegative data give a nonnegative field
// that can only shrink when the cutoff rises.
SolveResult solve_measure_truncated(const Grid& grid, const PotentialSpec& V,
                                    double cutoff, const BoundaryMeasure& nu,
                                    double tol = 1e-10);

// Unit-mass Dirac at the boundary node nearest a.
SolveResult solve_dirac_truncated(const Grid& grid, const PotentialSpec& V,
                                  double cutoff, const BoundaryPoint& a,
                                  double tol = 1e-10);

enum class SigmaVerdict { in_sigma, not_in_sigma, uncertain };

struct DefectEstimate {
  double alpha_hat = 0.0;  // fraction of the datum the limit refuses
  double spread = 0.0;     // sensitivity under halving the wall strip
};

struct DualitySolution {
  BoundaryPoint a;
  TruncationLadder ladder;
  std::vector<SolveResult> levels;
  std::vector<double> u;     // last level's field
  std::vector<double> mass;  // integral of the field, one entry per level
  Extrapolated limit;        // extrapolated mass
  bool monotone = true;      // masses non-increasing over the ladder
  bool still_decreasing = false;
  DefectEstimate defect;
  SigmaVerdict verdict = SigmaVerdict::uncertain;
  bool stalled = false;  // mass small yet no longer decreasing
};

// Walks the whole ladder of unit-Dirac solves at a and classifies the mass
// trace with the same final-level rule as the boundary flux: exceptional
// needs the last mass under max(10 tol, 1e-3) and still strictly
// decreasing. A small mass that has stopped moving is reported as not
// exceptional with the stalled flag raised, and a trace still in free fall
// above the threshold stays uncertain.
DualitySolution duality_solution(const Grid& grid, const PotentialSpec& V,
                                 const TruncationLadder& ladder,
                                 const BoundaryPoint& a, double tol = 1e-10);

// Defect-mass estimate from testing the dual field against the torsion
// function: alpha_hat = 1 - [mass(P) + int V P theta] / theta-flux(a). The
// product V P theta is summed outside a wall strip only, since at any finite
// cutoff the strip holds exactly the mass the limit is about to lose; the
// strip width is then extrapolated away over {1e-2, 5e-3, 2.5e-3}. theta
// must be the torsion function on the grid P was computed on.
DefectEstimate defect_mass(const DualitySolution& P, const SolveResult& theta,
                           const PotentialSpec& V);

struct AnconaIntegral {
  double value = 0.0;  // meaningful only when the flag is clear
  bool divergent = false;
};

// Ancona's criterion integral int V(y) d(y)^2 / |y-a|^dim dy, d the distance
// to the boundary: finite exactly where the Dirac survives, for potentials
// within the quadratic-blowup envelope. Quadrature panels are graded toward
// a's wall and the far wall; divergence is flagged, not thrown.
AnconaIntegral ancona_integral(Domain domain, const PotentialSpec& V,
                               const BoundaryPoint& a, double tol = 1e-6);

struct SigmaReport {
  BoundaryPoint a;
  DualitySolution dual;
  AnconaIntegral ancona;
  bool ancona_authoritative = false;
  SigmaVerdict verdict = SigmaVerdict::uncertain;
  bool consistent = true;
};

// Combines the mass-trace verdict with the integral criterion. The integral
// is authoritative only when the spec certifies growth within the quadratic
// envelope (a power law with alpha <= 2, or a bounded potential); then the
// consistency flag says whether the two tests agree, and an abstaining mass
// trace defers to the integral outright.
SigmaReport classify_sigma(const Grid& grid, const PotentialSpec& V,
                           const TruncationLadder& ladder,
                           const BoundaryPoint& a, double tol = 1e-10);

struct MeasureSolveReport {
  BoundaryMeasure nu;
  TruncationLadder ladder;
  std::vector<SolveResult> levels;
  std::vector<double> u;     // last level's field
  std::vector<double> mass;  // integral of the field per level
  std::vector<DualitySolution> atom_runs;
  BoundaryMeasure defect;    // estimated unabsorbed part of nu, atomized
  double defect_total = 0.0;
  bool representable = false;  // defect_total <= tol * total mass
};

// Ladder solve with measure data nu, plus the defect bookkeeping: each atom
// gets its own duality run and contributes mass * alpha_hat to the defect.
// A bounded density costs nothing when the potential stays under a
// subquadratic power law; otherwise the density is atomized onto the
// boundary nodes and per-node defects are summed.
MeasureSolveReport measure_bvp(const Grid& grid, const PotentialSpec& V,
                               const TruncationLadder& ladder,
                               const BoundaryMeasure& nu, double tol = 1e-3);

struct DualityIdentity {
  BoundaryPoint a;
  std::vector<double> pairing;  // extrapolated int P f dx, one per source
  std::vector<double> g;        // flux limit of the forward solve per source
  double max_residual = 0.0;
};

// Pairs the dual ladder against each source, extrapolates the pairing trace
// with the same ladder accelerator as the flux, and reports the largest
// disagreement with the forward g(a). reports[i] must be the boundary
// report of source suite[i] at the same point on the same grid and ladder.
DualityIdentity duality_identity_check(
    const DualitySolution& P, const std::vector<SourceField>& suite,
    const std::vector<NormalDerivativeReport>& reports);

// Constant in the a-priori bound int |v| + int V |v| d <= C * |nu|, built
// from the discrete torsion function: C = sup |theta-flux| / min(1, min
// theta/d over the nodes).
double l1_bound_constant(const Grid& grid, double tol = 1e-10);

}  // namespace hopf
