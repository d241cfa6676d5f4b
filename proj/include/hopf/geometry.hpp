#pragma once

// Domains, grids and boundary bookkeeping.
//
// Two domains are supported: the unit interval (0,1) and the open unit disk.
// Interval grids carry interior nodes only; the boundary values are implied
// zeros (or explicit Dirichlet data) at x=0 and x=1. Disk grids are tensor
// polar grids with radii staggered off the origin, r_j = (j-1/2)*dr, so no
// node sits at r=0 and the innermost face has zero length.

#include <cstddef>
#include <vector>

namespace hopf {

enum class Domain { interval, disk };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// A boundary point: for the interval, where is 0 or 1; for the disk, where is
// the angle phi in [0, 2*pi).
struct BoundaryPoint {
  Domain domain = Domain::interval;
  double where = 0.0;
};

struct BoundaryNode {
  BoundaryPoint point;
  double weight = 0.0;
};

struct Grid {
  Domain domain = Domain::interval;
  int resolution = 0;

  // interval fields
  double grading = 1.0;
  std::vector<double> x;        // interior nodes, ascending
  std::vector<double> spacing;  // spacing[i] = x[i]-x[i-1], spacing[0] = x[0],
                                // plus one trailing entry 1-x.back()
  // disk fields
  int nphi = 0;
  double dr = 0.0, dphi = 0.0;
  std::vector<double> r;  // staggered radii, size = resolution

  // node quadrature weights (cell measures), one per unknown
  std::vector<double> weights;

  std::size_t num_nodes() const {
    return domain == Domain::interval ? x.size() : r.size() * nphi;
  }
  std::size_t index(int j, int m) const {  // disk: ring j, angle m
    return static_cast<std::size_t>(j) * nphi + m;
  }
  double node_r(std::size_t idx) const { return r[idx / nphi]; }
  double node_phi(std::size_t idx) const { return dphi * (idx % nphi); }
};

// Distance from a point in the closed domain to the boundary. Throws
// std::domain_error for points outside the closure (beyond 1e-12 slack).
double distance_to_boundary(Domain domain, const Point& p);

// Unit inward normal at a boundary point.
Point inward_normal(const BoundaryPoint& a);

// Uniform grid when grading == 1 (interval nodes x_i = i*h, h = 1/resolution).
// grading > 1 compresses nodes toward both endpoints through the map
// s -> s^g / (s^g + (1-s)^g), which keeps the midpoint fixed and makes the
// first node scale like resolution^-g. Disk grids ignore grading; nphi picks
// the angular resolution (default 4*resolution capped at 256).
Grid build_grid(Domain domain, int resolution, double grading = 1.0,
                int nphi = 0);

// Boundary quadrature nodes: the two endpoints with unit weight (interval,
// total mass 2) or the nphi angular nodes with weight dphi (disk, total mass
// 2*pi).
std::vector<BoundaryNode> boundary_quadrature(const Grid& g);

// Index of the boundary quadrature node nearest to a.
std::size_t nearest_boundary_node(const Grid& g, const BoundaryPoint& a);

}  // namespace hopf
