#include "hopf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hopf {

namespace {
constexpr double kClosureSlack = 1e-12;

double graded_map(double s, double g) {
  if (g == 1.0) return s;
  const double a = std::pow(s, g);
  const double b = std::pow(1.0 - s, g);
  return a / (a + b);
}
}  // namespace

double distance_to_boundary(Domain domain, const Point& p) {
  if (domain == Domain::interval) {
    if (p.x < -kClosureSlack || p.x > 1.0 + kClosureSlack)
      throw std::domain_error("point outside the closed interval");
    const double xc = std::clamp(p.x, 0.0, 1.0);
    return std::min(xc, 1.0 - xc);
  }
  const double rho = std::hypot(p.x, p.y);
  if (rho > 1.0 + kClosureSlack)
    throw std::domain_error("point outside the closed disk");
  return 1.0 - std::min(rho, 1.0);
}

Point inward_normal(const BoundaryPoint& a) {
  if (a.domain == Domain::interval) {
    if (a.where != 0.0 && a.where != 1.0)
      throw std::domain_error("interval boundary point must be 0 or 1");
    return a.where == 0.0 ? Point{1.0, 0.0} : Point{-1.0, 0.0};
  }
  return Point{-std::cos(a.where), -std::sin(a.where)};
}

Grid build_grid(Domain domain, int resolution, double grading, int nphi) {
  if (resolution < 4)
    throw std::invalid_argument("grid resolution must be at least 4");
  if (grading < 1.0)
    throw std::invalid_argument("grid grading must be >= 1");

  Grid g;
  g.domain = domain;
  g.resolution = resolution;

  if (domain == Domain::interval) {
    g.grading = grading;
    const int n = resolution;
    g.x.resize(n - 1);
    for (int i = 1; i < n; ++i)
      g.x[i - 1] = graded_map(static_cast<double>(i) / n, grading);
    g.spacing.resize(n);
    g.spacing[0] = g.x[0];
    for (int i = 1; i < n - 1; ++i) g.spacing[i] = g.x[i] - g.x[i - 1];
    g.spacing[n - 1] = 1.0 - g.x[n - 2];

    g.weights.resize(n - 1);
    if (grading == 1.0) {
      // trapezoid weights; the operator is the classical 3-point stencil
      std::fill(g.weights.begin(), g.weights.end(), 1.0 / n);
    } else {
      // finite-volume cells: faces at the domain endpoints and node midpoints
      double prev_face = 0.0;
      for (int i = 0; i < n - 1; ++i) {
        const double next_face =
            (i + 1 < n - 1) ? 0.5 * (g.x[i] + g.x[i + 1]) : 1.0;
        g.weights[i] = next_face - prev_face;
        prev_face = next_face;
      }
    }
    return g;
  }

  // disk
  if (nphi == 0) nphi = std::min(4 * resolution, 256);
  if (nphi < 8) throw std::invalid_argument("disk grid needs nphi >= 8");
  g.nphi = nphi;
  g.dr = 1.0 / resolution;
  g.dphi = 2.0 * std::numbers::pi / nphi;
  g.r.resize(resolution);
  for (int j = 0; j < resolution; ++j) g.r[j] = (j + 0.5) * g.dr;
  g.weights.resize(g.num_nodes());
  for (int j = 0; j < resolution; ++j) {
    const double w = g.r[j] * g.dr * g.dphi;
    for (int m = 0; m < nphi; ++m) g.weights[g.index(j, m)] = w;
  }
  return g;
}

std::vector<BoundaryNode> boundary_quadrature(const Grid& g) {
  std::vector<BoundaryNode> nodes;
  if (g.domain == Domain::interval) {
    nodes.push_back({BoundaryPoint{Domain::interval, 0.0}, 1.0});
    nodes.push_back({BoundaryPoint{Domain::interval, 1.0}, 1.0});
  } else {
    nodes.reserve(g.nphi);
    for (int m = 0; m < g.nphi; ++m)
      nodes.push_back({BoundaryPoint{Domain::disk, m * g.dphi}, g.dphi});
  }
  return nodes;
}

std::size_t nearest_boundary_node(const Grid& g, const BoundaryPoint& a) {
  if (g.domain == Domain::interval) return a.where < 0.5 ? 0 : 1;
  const double two_pi = 2.0 * std::numbers::pi;
  double phi = std::fmod(a.where, two_pi);
  if (phi < 0) phi += two_pi;
  auto m = static_cast<long>(std::llround(phi / g.dphi));
  return static_cast<std::size_t>(m % g.nphi);
}

}  // namespace hopf
