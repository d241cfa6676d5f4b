#include "hopf/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hopf/quadrature.hpp"

namespace hopf {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Local wall behavior of the potential at one end of the interval (or the
// disk rim): blowup strength and exponent if singular there.
struct WallPower {
  bool singular = false;
  double C = 0.0;
  double alpha = 0.0;
};

WallPower wall_power(const PotentialSpec& v, Domain domain,
                     const BoundaryPoint& a) {
  WallPower w;
  if (v.kind != PotentialKind::power_law || v.alpha <= 0.0) return w;
  if (domain == Domain::interval) {
    if (v.anchor == PowerAnchor::left && a.where != 0.0) return w;
    if (v.anchor == PowerAnchor::right && a.where != 1.0) return w;
  }
  w.singular = true;
  w.C = v.C;
  w.alpha = v.alpha;
  return w;
}

// Shape of the solution inside the first cell, as a function of the wall
// distance d, normalized so value and slope at the first node both follow
// from u(node). Matched to the local ODE u'' = C d^-alpha u.
double wall_shape(const WallPower& w, double d) {
  if (!w.singular || w.alpha <= 1.5) return d;
  if (w.alpha < 2.0) {
    const double lam = w.C / ((2.0 - w.alpha) * (3.0 - w.alpha));
    return d + lam * std::pow(d, 3.0 - w.alpha);
  }
  if (w.alpha == 2.0) {
    const double beta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * w.C));
    return std::pow(d, beta);
  }
  const double nu = 0.5 * w.alpha - 1.0;
  return std::pow(d, 0.25 * w.alpha) *
         std::exp(-(std::sqrt(w.C) / nu) * std::pow(d, -nu));
}

double lerp_clamped(const std::vector<double>& xs, const std::vector<double>& us,
                    double x) {
  // xs ascending interior nodes; zero boundary values at 0 and 1
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const double xl = hi == 0 ? 0.0 : xs[hi - 1];
  const double ul = hi == 0 ? 0.0 : us[hi - 1];
  const double xr = hi == xs.size() ? 1.0 : xs[hi];
  const double ur = hi == xs.size() ? 0.0 : us[hi];
  const double t = (x - xl) / (xr - xl);
  return ul + t * (ur - ul);
}

double disk_field_at(const Grid& g, const std::vector<double>& u, double r,
                     double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  const double t = phi / g.dphi;
  const int m0 = static_cast<int>(t) % g.nphi;
  const int m1 = (m0 + 1) % g.nphi;
  const double wphi = t - std::floor(t);
  auto ring = [&](int j) {
    return (1.0 - wphi) * u[g.index(j, m0)] + wphi * u[g.index(j, m1)];
  };
  const int last = g.resolution - 1;
  if (r <= g.r[0]) return ring(0);
  if (r >= g.r[last]) {
    const double t2 = (r - g.r[last]) / (1.0 - g.r[last]);
    return (1.0 - t2) * ring(last);
  }
  const int j = static_cast<int>((r - g.r[0]) / g.dr);
  const int jc = std::min(std::max(j, 0), last - 1);
  const double t2 = (r - g.r[jc]) / g.dr;
  return (1.0 - t2) * ring(jc) + t2 * ring(jc + 1);
}

// interior evaluation point eps inward from a; interval keeps the x
// coordinate, the disk walks down the radius at a's angle
double value_inward(const Grid& g, const std::vector<double>& u,
                    const BoundaryPoint& a, double eps) {
  if (g.domain == Domain::interval) {
    const double x = a.where == 0.0 ? eps : 1.0 - eps;
    return lerp_clamped(g.x, u, x);
  }
  return disk_field_at(g, u, 1.0 - eps, a.where);
}

double local_spacing(const Grid& g, const BoundaryPoint& a, double eps) {
  if (g.domain == Domain::disk) return g.dr;
  const double x = a.where == 0.0 ? eps : 1.0 - eps;
  const auto it = std::lower_bound(g.x.begin(), g.x.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - g.x.begin());
  const double xl = hi == 0 ? 0.0 : g.x[hi - 1];
  const double xr = hi == g.x.size() ? 1.0 : g.x[hi];
  return xr - xl;
}

void check_boundary_point(const Grid& g, const BoundaryPoint& a) {
  if (g.domain != a.domain)
    throw std::invalid_argument("boundary point belongs to another domain");
  if (g.domain == Domain::interval && a.where != 0.0 && a.where != 1.0)
    throw std::invalid_argument("interval boundary points are 0 and 1");
}

// radial profile of a disk field; rejects fields that are not radially
// symmetric, since the angular reduction below assumes it
std::vector<double> radial_profile(const Grid& g,
                                   const std::vector<double>& u,
                                   const char* what) {
  std::vector<double> prof(g.resolution, 0.0);
  double scale = 0.0;
  for (double v : u) scale = std::max(scale, std::fabs(v));
  for (int j = 0; j < g.resolution; ++j) {
    double mean = 0.0;
    for (int m = 0; m < g.nphi; ++m) mean += u[g.index(j, m)];
    mean /= g.nphi;
    for (int m = 0; m < g.nphi; ++m)
      if (std::fabs(u[g.index(j, m)] - mean) > 1e-9 * scale + 1e-14)
        throw std::invalid_argument(std::string(what) +
                                    " is not radially symmetric");
    prof[j] = mean;
  }
  return prof;
}

}  // namespace

double wall_flux(const Grid& g, const std::vector<double>& u,
                 const BoundaryPoint& a) {
  check_boundary_point(g, a);
  if (u.size() != g.num_nodes())
    throw std::invalid_argument("wall_flux: field size mismatch");
  if (g.domain == Domain::interval) {
    return a.where == 0.0 ? u.front() / g.spacing.front()
                          : u.back() / g.spacing.back();
  }
  const int m =
      static_cast<int>(std::lround(a.where / g.dphi)) % g.nphi;
  const int mm = m < 0 ? m + g.nphi : m;
  return u[g.index(g.resolution - 1, mm)] / (0.5 * g.dr);
}

double green_kernel(Domain domain, const Point& x, const Point& y) {
  if (domain == Domain::interval) {
    if (x.x == y.x) throw std::domain_error("Green kernel pole");
    return std::min(x.x, y.x) * (1.0 - std::max(x.x, y.x));
  }
  const double dx = x.x - y.x, dy = x.y - y.y;
  const double dist2 = dx * dx + dy * dy;
  if (dist2 == 0.0) throw std::domain_error("Green kernel pole");
  const double ry2 = y.x * y.x + y.y * y.y;
  if (ry2 < 1e-280) {
    const double rx2 = x.x * x.x + x.y * x.y;
    return -0.5 * std::log(rx2) / (2.0 * kPi);
  }
  // |x - y/|y|^2|^2 * |y|^2, expanded to avoid forming the reflected point;
  // the half compensates for the ratio entering squared
  const double refl2 = (x.x * x.x + x.y * x.y) * ry2 -
                       2.0 * (x.x * y.x + x.y * y.y) + 1.0;
  return 0.5 * std::log(refl2 / dist2) / (2.0 * kPi);
}

double poisson_kernel(const BoundaryPoint& a, const Point& y) {
  if (a.domain == Domain::interval) return a.where == 0.0 ? 1.0 - y.x : y.x;
  const double ax = std::cos(a.where), ay = std::sin(a.where);
  const double dx = y.x - ax, dy = y.y - ay;
  const double r2 = y.x * y.x + y.y * y.y;
  return (1.0 - r2) / (2.0 * kPi * (dx * dx + dy * dy));
}

double field_at(const Grid& g, const std::vector<double>& u, const Point& p) {
  if (u.size() != g.num_nodes())
    throw std::invalid_argument("field sampled on a different grid");
  if (g.domain == Domain::interval) return lerp_clamped(g.x, u, p.x);
  return disk_field_at(g, u, std::hypot(p.x, p.y), std::atan2(p.y, p.x));
}

double truncation_layer(const PotentialSpec& V, Domain domain,
                        const BoundaryPoint& a, double cutoff) {
  const WallPower w = wall_power(V, domain, a);
  if (!w.singular || !(cutoff < std::numeric_limits<double>::infinity()))
    return 0.0;
  return std::pow(w.C / cutoff, 1.0 / w.alpha);
}

QuotientSamples classical_quotient(const LimitSolution& u,
                                   const BoundaryPoint& a,
                                   std::vector<double> eps,
                                   double eps_floor) {
  const Grid& g = u.levels.front().grid;
  check_boundary_point(g, a);
  if (eps.empty()) {
    double e = 0.125;
    while (eps.size() < 24 && e >= eps_floor &&
           e >= 2.0 * local_spacing(g, a, e)) {
      eps.push_back(e);
      e *= 0.5;
    }
  }
  if (eps.size() < 2)
    throw std::invalid_argument("quotient needs two usable offsets");
  QuotientSamples q;
  q.a = a;
  q.eps = eps;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw std::invalid_argument("offsets must decrease");
    if (eps[i] < 2.0 * local_spacing(g, a, eps[i]))
      throw std::invalid_argument("offset finer than the grid resolves");
    q.quotient.push_back(value_inward(g, u.u, a, eps[i]) / eps[i]);
  }
  q.limit = richardson_ratio2(q.quotient);
  return q;
}

FluxLadder pointwise_normal_derivative(const LimitSolution& u,
                                       const BoundaryPoint& a) {
  if (u.levels.size() < 2 && !u.converged)
    throw std::invalid_argument("flux ladder needs at least two levels");
  const Grid& g = u.levels.front().grid;
  check_boundary_point(g, a);
  FluxLadder out;
  out.a = a;
  for (const auto& level : u.levels)
    out.flux.push_back(wall_flux(g, level.u, a));
  out.limit = aitken_limit(out.flux, 2);
  double scale = 0.0;
  for (double v : out.flux) scale = std::max(scale, std::fabs(v));
  const double slack = 1e-12 * scale + 1e-300;
  for (std::size_t j = 1; j < out.flux.size(); ++j)
    if (out.flux[j] > out.flux[j - 1] + slack) out.monotone = false;
  const auto m = out.flux.size();
  out.still_decreasing =
      m >= 2 && out.flux[m - 2] - out.flux[m - 1] > slack;
  return out;
}

KernelIntegral kernel_source_integral(const LimitSolution& u,
                                      const PotentialSpec& V,
                                      const SourceField& f,
                                      const BoundaryPoint& a) {
  const Grid& g = u.levels.front().grid;
  check_boundary_point(g, a);
  KernelIntegral out;
  const double k_last = u.levels.back().cutoff;

  if (g.domain == Domain::interval) {
    const auto& xs = g.x;
    const auto& uv = u.u;
    const auto& fv = f.values;
    const std::size_t n = xs.size();
    auto kern = [&](double y) { return poisson_kernel(a, {y, 0.0}); };
    auto vval = [&](double y) { return evaluate(V, Domain::interval, {y, 0.0}); };
    auto fl = [&](double y) {
      // sources carry no boundary condition: extend the end values flat
      if (y <= xs.front()) return fv.front();
      if (y >= xs.back()) return fv.back();
      return lerp_clamped(xs, fv, y);
    };
    auto ul = [&](double y) { return lerp_clamped(xs, uv, y); };

    out.f_part += gauss5([&](double y) { return kern(y) * fl(y); }, 0.0,
                         xs.front());
    for (std::size_t i = 0; i + 1 < n; ++i)
      out.f_part += gauss5([&](double y) { return kern(y) * fl(y); }, xs[i],
                           xs[i + 1]);
    out.f_part += gauss5([&](double y) { return kern(y) * fl(y); }, xs.back(),
                         1.0);

    // The V u factor: inside 20 truncation layers of a singular wall the
    // last level runs linearly instead of following the limit, so the field
    // is continued down from an anchor node by the wall shape and that
    // stretch is integrated on a mesh graded into the wall.
    const BoundaryPoint left{Domain::interval, 0.0};
    const BoundaryPoint right{Domain::interval, 1.0};
    const WallPower w0 = wall_power(V, Domain::interval, left);
    const WallPower w1 = wall_power(V, Domain::interval, right);
    const double cut0 =
        std::min(20.0 * truncation_layer(V, g.domain, left, k_last), 0.1);
    const double cut1 =
        std::min(20.0 * truncation_layer(V, g.domain, right, k_last), 0.1);
    std::size_t ia = 0;
    while (ia + 1 < n && xs[ia] < cut0) ++ia;
    std::size_t ib = n - 1;
    while (ib > ia && 1.0 - xs[ib] < cut1) --ib;

    for (std::size_t i = ia; i < ib; ++i)
      out.vu_part += gauss5([&](double y) { return kern(y) * vval(y) * ul(y); },
                            xs[i], xs[i + 1]);
    const double shape0 = wall_shape(w0, xs[ia]);
    const GradedResult g0 = graded_integral(
        [&](double y) {
          return kern(y) * vval(y) * uv[ia] * wall_shape(w0, y) / shape0;
        },
        0.0, xs[ia], true);
    const double shape1 = wall_shape(w1, 1.0 - xs[ib]);
    const GradedResult g1 = graded_integral(
        [&](double y) {
          return kern(y) * vval(y) * uv[ib] * wall_shape(w1, 1.0 - y) / shape1;
        },
        xs[ib], 1.0, false);
    out.vu_part += g0.value + g1.value;
    out.divergent = g0.divergent || g1.divergent;
    out.value = out.f_part - out.vu_part;
    return out;
  }

  // Disk: the angular integral of the kernel over any circle is 1, so for
  // radial data the integral collapses to the radial profile against r dr.
  const std::vector<double> up = radial_profile(g, u.u, "limit field");
  const std::vector<double> fp = radial_profile(g, f.values, "source");
  const int last = g.resolution - 1;
  auto vval = [&](double r) { return evaluate(V, Domain::disk, {r, 0.0}); };
  auto fl = [&](double r) {
    if (r <= g.r[0]) return fp.front();
    if (r >= g.r[last]) return fp.back();
    const int j = std::min(static_cast<int>((r - g.r[0]) / g.dr), last - 1);
    const double t = (r - g.r[j]) / g.dr;
    return (1.0 - t) * fp[j] + t * fp[j + 1];
  };
  auto ul = [&](double r) {
    if (r <= g.r[0]) return up.front();
    if (r >= g.r[last])
      return up.back() * (1.0 - (r - g.r[last]) / (1.0 - g.r[last]));
    const int j = std::min(static_cast<int>((r - g.r[0]) / g.dr), last - 1);
    const double t = (r - g.r[j]) / g.dr;
    return (1.0 - t) * up[j] + t * up[j + 1];
  };

  for (int j = 0; j <= last; ++j) {
    const double r0 = j == 0 ? 0.0 : g.r[j - 1];
    out.f_part += gauss5([&](double r) { return fl(r) * r; }, r0, g.r[j]);
  }
  out.f_part += gauss5([&](double r) { return fl(r) * r; }, g.r[last], 1.0);
  const WallPower wr = wall_power(V, Domain::disk, a);
  const double cutw =
      std::min(20.0 * truncation_layer(V, g.domain, a, k_last), 0.1);
  int ja = last;
  while (ja > 0 && 1.0 - g.r[ja] < cutw) --ja;
  for (int j = 0; j <= ja; ++j) {
    const double r0 = j == 0 ? 0.0 : g.r[j - 1];
    out.vu_part +=
        gauss5([&](double r) { return vval(r) * ul(r) * r; }, r0, g.r[j]);
  }
  const double shape = wall_shape(wr, 1.0 - g.r[ja]);
  const GradedResult gw = graded_integral(
      [&](double r) {
        return vval(r) * up[ja] * wall_shape(wr, 1.0 - r) / shape * r;
      },
      g.r[ja], 1.0, false);
  out.vu_part += gw.value;
  out.divergent = gw.divergent;
  out.value = out.f_part - out.vu_part;
  return out;
}

RepresentationReport representation_membership(const Grid& grid,
                                               const PotentialSpec& V,
                                               const TruncationLadder& ladder,
                                               const BoundaryPoint& a,
                                               double tol) {
  const SourceField f = sample_source(grid, SourceSpec::one());
  const LimitSolution lim = solve_limit(grid, V, ladder, f);
  RepresentationReport rep;
  rep.a = a;
  const double floor =
      20.0 * truncation_layer(V, grid.domain, a, lim.levels.back().cutoff);
  rep.quotient = classical_quotient(lim, a, {}, floor);
  rep.kernel = kernel_source_integral(lim, V, f, a);
  rep.gap = std::fabs(rep.quotient.limit.value - rep.kernel.value);
  const double scale = std::max(
      {f.norm_sup, std::fabs(rep.quotient.limit.value),
       std::fabs(rep.kernel.value)});
  const double tolabs = tol * scale;
  const double err = rep.quotient.limit.error;
  if (rep.kernel.divergent) {
    rep.verdict = Verdict::no;
  } else if (rep.gap <= tolabs && err <= 3.0 * tolabs) {
    rep.verdict = Verdict::yes;
  } else if (rep.gap > tolabs && err < rep.gap / 3.0) {
    rep.verdict = Verdict::no;
  } else {
    rep.verdict = Verdict::uncertain;
  }
  return rep;
}

NormalDerivativeReport boundary_report(const LimitSolution& u,
                                       const PotentialSpec& V,
                                       const SourceField& f,
                                       const BoundaryPoint& a, double tol) {
  NormalDerivativeReport rep;
  rep.a = a;
  const Grid& g = u.levels.front().grid;
  const double floor =
      20.0 * truncation_layer(V, g.domain, a, u.levels.back().cutoff);
  rep.quotient = classical_quotient(u, a, {}, floor);
  rep.flux = pointwise_normal_derivative(u, a);
  rep.g = rep.flux.limit.value;
  rep.kernel = kernel_source_integral(u, V, f, a);

  const double thr = std::max(10.0 * tol, 1e-3 * f.norm_sup);
  rep.hopf_positive =
      !(rep.flux.flux.back() < thr && rep.flux.still_decreasing);
  rep.classical_exists =
      rep.quotient.limit.error <=
      std::max(thr, 0.05 * std::fabs(rep.quotient.limit.value));
  const double scale = std::max(
      {f.norm_sup, std::fabs(rep.quotient.limit.value),
       std::fabs(rep.kernel.value)});
  const double gap = std::fabs(rep.quotient.limit.value - rep.kernel.value);
  rep.representation_holds =
      rep.classical_exists && !rep.kernel.divergent &&
      gap <= std::max(1e-3 * scale, 2.0 * rep.quotient.limit.error);
  return rep;
}

}  // namespace hopf
