#pragma once

// Boundary calculus: closed-form Green and Poisson kernels, the classical
// difference quotient of the limit field, the per-cutoff boundary flux and
// its ladder limit, the kernel-weighted source integral, and the verdict on
// whether the classical derivative and the integral representation agree at
// a boundary point.

#include <vector>

#include "hopf/dirichlet.hpp"
#include "hopf/extrapolation.hpp"
#include "hopf/geometry.hpp"
#include "hopf/potential.hpp"

namespace hopf {

// Green function of the Laplacian with zero trace. Interval:
// min(x,y)(1-max(x,y)) using the x coordinates. Disk: logarithmic kernel
// with the reflected pole.
double green_kernel(Domain domain, const Point& x, const Point& y);

// Inward normal derivative of the Green function at boundary point a.
// Interval: 1-y at the left end, y at the right. Disk:
// (1-|y|^2) / (2*pi*|y-a|^2).
double poisson_kernel(const BoundaryPoint& a, const Point& y);

// Piecewise-linear evaluation of a grid field at an interior point,
// honoring the zero trace. Disk points are (r, phi) passed via Point as
// x = r*cos(phi), y = r*sin(phi).
double field_at(const Grid& g, const std::vector<double>& u, const Point& p);

// Discrete one-sided wall flux of a zero-trace field at a: the first
// interior value divided by its distance to the wall.
double wall_flux(const Grid& g, const std::vector<double>& u,
                 const BoundaryPoint& a);

struct QuotientSamples {
  BoundaryPoint a;
  std::vector<double> eps;       // descending, ratio 2
  std::vector<double> quotient;  // u(a + eps*n) / eps
  Extrapolated limit;
};

// Difference quotients of the limit field along the inward normal at a,
// Richardson-extrapolated. eps entries below twice the local grid spacing
// are rejected. An empty eps list picks a geometric default, descending no
// further than eps_floor; below the last level's truncation layer the field
// follows that level instead of the limit, so callers working with singular
// potentials pass a floor a safe factor above the layer width.
QuotientSamples classical_quotient(const LimitSolution& u,
                                   const BoundaryPoint& a,
                                   std::vector<double> eps = {},
                                   double eps_floor = 0.0);

// Width of the region near a where min(V, k) is flat because the blowup is
// clipped: (C/k)^(1/alpha) for a power law singular at a, zero otherwise.
double truncation_layer(const PotentialSpec& V, Domain domain,
                        const BoundaryPoint& a, double cutoff);

struct FluxLadder {
  BoundaryPoint a;
  std::vector<double> flux;  // one-sided discrete flux per ladder level
  Extrapolated limit;
  bool monotone = true;          // non-increasing over the ladder
  bool still_decreasing = false; // strictly decreasing at the last level
};

// First-node flux u(node)/spacing at each ladder level, extrapolated. The
// sequence is non-increasing for f >= 0; a violation beyond rounding slack
// clears the monotone flag (the grid is too coarse for this potential).
FluxLadder pointwise_normal_derivative(const LimitSolution& u,
                                       const BoundaryPoint& a);

struct KernelIntegral {
  double value = 0.0;
  double f_part = 0.0;   // integral of K*f
  double vu_part = 0.0;  // integral of K*V*u
  bool divergent = false;
};

// Integral of K(a,y) (f - V u)(y) dy with the limit field u. Cells are
// integrated with Gauss panels against the exact kernel and pointwise V;
// inside the first cell u follows a wall model matched to the potential's
// blowup exponent, and the quadrature is graded toward the wall. On the
// disk the angular integral of K is 1 on every circle, so the evaluation
// reduces to the radial profile; non-radial fields are rejected.
KernelIntegral kernel_source_integral(const LimitSolution& u,
                                      const PotentialSpec& V,
                                      const SourceField& f,
                                      const BoundaryPoint& a);

enum class Verdict { yes, no, uncertain };

struct RepresentationReport {
  BoundaryPoint a;
  QuotientSamples quotient;
  KernelIntegral kernel;
  double gap = 0.0;  // |quotient limit - kernel integral|
  Verdict verdict = Verdict::uncertain;
};

// Does the classical quotient limit of the f=1 solve match the kernel
// integral at a? Verdict yes when the two agree within tol (relative to the
// problem scale), no when they disagree beyond the extrapolation error,
// uncertain when the error swamps the gap.
RepresentationReport representation_membership(const Grid& grid,
                                               const PotentialSpec& V,
                                               const TruncationLadder& ladder,
                                               const BoundaryPoint& a,
                                               double tol = 1e-3);

struct NormalDerivativeReport {
  BoundaryPoint a;
  QuotientSamples quotient;
  FluxLadder flux;
  double g = 0.0;  // ladder limit of the flux
  KernelIntegral kernel;
  bool classical_exists = false;
  bool representation_holds = false;
  bool hopf_positive = false;
};

// All three derivative notions at a for an already-computed limit solve.
// hopf_positive applies the zero rule to the final ladder level: a flux
// below max(10*tol, 1e-3*sup|f|) that is still decreasing counts as zero.
NormalDerivativeReport boundary_report(const LimitSolution& u,
                                       const PotentialSpec& V,
                                       const SourceField& f,
                                       const BoundaryPoint& a,
                                       double tol = 1e-10);

}  // namespace hopf
