#pragma once

// One-dimensional quadrature helpers: Gauss panels, geometrically graded
// sweeps toward an endpoint singularity, and closed-form power moments.

#include <functional>

namespace hopf {

using Integrand = std::function<double(double)>;

// 5-point Gauss-Legendre on [a,b]
double gauss5(const Integrand& f, double a, double b);

struct GradedResult {
  double value = 0.0;
  bool divergent = false;  // partial sums kept growing without decay
};

// Integrate f over [a,b] with panels graded geometrically (ratio 1/2) toward
// the `toward_a` end, down to panels of relative width `floor_frac` of b-a,
// plus a geometric tail estimate at the measured panel ratio. Panels away
// from the singular end are split uniformly. The divergence flag trips when
// the graded panel contributions fail to decay: their ratio stays above 0.98
// while the running sum exceeds 1/tol, or still at the floor.
GradedResult graded_integral(const Integrand& f, double a, double b,
                             bool toward_a, double tol = 1e-6,
                             double floor_frac = 1e-10);

// Exact integral of t^(p-alpha) over [t0, t1], 0 <= t0 < t1, p in {0,1,2}.
// Handles the logarithmic case p-alpha = -1. t0 = 0 is allowed when the
// integral converges there; otherwise the result is +inf.
double power_moment(double t0, double t1, int p, double alpha);

}  // namespace hopf
