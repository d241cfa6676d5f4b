#include "hopf/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "hopf/kernels.hpp"

namespace hopf {

void SymmetricStencil::multiply(const std::vector<double>& x,
                                std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("stencil multiply: size mismatch");
  y.resize(x.size());
  kernels::hadamard(diag.data(), x.data(), y.data(), x.size());
  for (int r = 0; r < n; ++r) {
    for (int e = row_ptr[r]; e < row_ptr[r + 1]; ++e) {
      const int c = col[e];
      const double v = val[e];
      y[r] += v * x[c];
      y[c] += v * x[r];
    }
  }
}

Ic0::Ic0(const SymmetricStencil& a)
    : n_(a.n), row_ptr_(&a.row_ptr), col_(&a.col) {
  const auto& rp = a.row_ptr;
  const auto& cl = a.col;
  lval_.assign(a.val.size(), 0.0);
  ldiag_.assign(n_, 0.0);
  for (int r = 0; r < n_; ++r) {
    for (int e = rp[r]; e < rp[r + 1]; ++e) {
      const int c = cl[e];
      double s = a.val[e];
      for (int e2 = rp[r]; e2 < e; ++e2) {
        const int shared = cl[e2];
        for (int e3 = rp[c]; e3 < rp[c + 1]; ++e3) {
          if (cl[e3] == shared) {
            s -= lval_[e2] * lval_[e3];
            break;
          }
        }
      }
      lval_[e] = s / ldiag_[c];
    }
    double d = a.diag[r];
    for (int e = rp[r]; e < rp[r + 1]; ++e) d -= lval_[e] * lval_[e];
    // the operators assembled here are M-matrices, for which the plain
    // factorization cannot break down; the clamp only guards against rounding
    if (d < 1e-14 * a.diag[r]) d = 1e-14 * a.diag[r];
    ldiag_[r] = std::sqrt(d);
  }
}

void Ic0::apply(const std::vector<double>& r, std::vector<double>& z) const {
  const auto& rp = *row_ptr_;
  const auto& cl = *col_;
  z = r;
  for (int i = 0; i < n_; ++i) {
    double s = z[i];
    for (int e = rp[i]; e < rp[i + 1]; ++e) s -= lval_[e] * z[cl[e]];
    z[i] = s / ldiag_[i];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    z[i] /= ldiag_[i];
    for (int e = rp[i]; e < rp[i + 1]; ++e) z[cl[e]] -= lval_[e] * z[i];
  }
}

CgOutcome solve_pcg(const SymmetricStencil& a, const std::vector<double>& b,
                    std::vector<double>& x, double tol, int max_iter) {
  const int n = a.n;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("pcg: rhs size mismatch");
  if (max_iter <= 0) max_iter = 10 * n + 100;
  x.assign(n, 0.0);
  const double bnorm =
      std::sqrt(kernels::dot(b.data(), b.data(), b.size()));
  if (bnorm == 0.0) return {0, 0.0};

  Ic0 prec(a);
  std::vector<double> r = b;
  std::vector<double> z(n), p(n), q(n);
  prec.apply(r, z);
  p = z;
  double rz = kernels::dot(r.data(), z.data(), n);
  for (int it = 1; it <= max_iter; ++it) {
    a.multiply(p, q);
    const double pq = kernels::dot(p.data(), q.data(), n);
    if (pq <= 0.0) throw std::runtime_error("pcg: operator not positive definite");
    const double alpha = rz / pq;
    kernels::axpy(alpha, p.data(), x.data(), n);
    kernels::axpy(-alpha, q.data(), r.data(), n);
    const double rnorm = std::sqrt(kernels::dot(r.data(), r.data(), n));
    if (rnorm <= tol * bnorm) return {it, rnorm / bnorm};
    prec.apply(r, z);
    const double rz_next = kernels::dot(r.data(), z.data(), n);
    kernels::xpby(z.data(), rz_next / rz, p.data(), n);
    rz = rz_next;
  }
  throw std::runtime_error("pcg: no convergence within iteration cap");
}

namespace {

SymmetricStencil assemble_interval(const Grid& g,
                                   const std::vector<double>& pot) {
  const int n = static_cast<int>(g.x.size());
  SymmetricStencil a;
  a.n = n;
  a.diag.resize(n);
  a.row_ptr.resize(n + 1);
  a.row_ptr[0] = 0;
  for (int i = 1; i <= n; ++i) a.row_ptr[i] = i - 1;  // one sub entry per row
  a.col.resize(n - 1);
  a.val.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    const double c_left = 1.0 / g.spacing[i];
    const double c_right = 1.0 / g.spacing[i + 1];
    a.diag[i] = c_left + c_right + g.weights[i] * pot[i];
    if (i > 0) {
      a.col[i - 1] = i - 1;
      a.val[i - 1] = -c_left;
    }
  }
  return a;
}

SymmetricStencil assemble_disk(const Grid& g, const std::vector<double>& pot) {
  const int nr = g.resolution;
  const int nphi = g.nphi;
  const int n = nr * nphi;
  SymmetricStencil a;
  a.n = n;
  a.diag.resize(n);
  a.row_ptr.assign(n + 1, 0);

  const double dr = g.dr;
  const double dphi = g.dphi;
  // Ring faces sit on the integer radii j*dr, so the conductance between
  // rings j-1 and j is j*dphi. The wall face is half a cell from the last
  // ring.
  auto c_ring = [&](int j) { return static_cast<double>(j) * dphi; };
  const double c_wall = dphi / (dr / 2.0);

  // count lower entries: angular for m>=1, wrap for m==nphi-1, radial for j>=1
  for (int j = 0; j < nr; ++j) {
    for (int m = 0; m < nphi; ++m) {
      const int idx = g.index(j, m);
      int cnt = 0;
      if (j > 0) ++cnt;
      if (m == nphi - 1) ++cnt;
      if (m > 0) ++cnt;
      a.row_ptr[idx + 1] = cnt;
    }
  }
  for (int i = 0; i < n; ++i) a.row_ptr[i + 1] += a.row_ptr[i];
  a.col.resize(a.row_ptr[n]);
  a.val.resize(a.row_ptr[n]);

  for (int j = 0; j < nr; ++j) {
    const double r_j = g.r[j];
    const double c_ang = dr / (r_j * dphi);
    for (int m = 0; m < nphi; ++m) {
      const int idx = g.index(j, m);
      int e = a.row_ptr[idx];
      // columns must come out ascending: radial, then wrap, then previous
      if (j > 0) {
        a.col[e] = idx - nphi;
        a.val[e] = -c_ring(j);
        ++e;
      }
      if (m == nphi - 1) {
        a.col[e] = g.index(j, 0);
        a.val[e] = -c_ang;
        ++e;
      }
      if (m > 0) {
        a.col[e] = idx - 1;
        a.val[e] = -c_ang;
        ++e;
      }
      double d = 2.0 * c_ang + g.weights[idx] * pot[idx];
      if (j > 0) d += c_ring(j);
      d += (j < nr - 1) ? c_ring(j + 1) : c_wall;
      a.diag[idx] = d;
    }
  }
  return a;
}

}  // namespace

SymmetricStencil assemble_operator(const Grid& grid,
                                   const std::vector<double>& potential) {
  if (potential.size() != grid.num_nodes())
    throw std::invalid_argument("assemble_operator: potential size mismatch");
  for (double v : potential)
    if (!(v >= 0.0))
      throw std::invalid_argument("assemble_operator: potential must be >= 0");
  return grid.domain == Domain::interval ? assemble_interval(grid, potential)
                                         : assemble_disk(grid, potential);
}

std::vector<double> assemble_rhs(const Grid& grid,
                                 const std::vector<double>& source,
                                 const std::vector<double>& boundary_data) {
  if (source.size() != grid.num_nodes())
    throw std::invalid_argument("assemble_rhs: source size mismatch");
  std::vector<double> rhs(grid.num_nodes());
  kernels::hadamard(grid.weights.data(), source.data(), rhs.data(),
                    rhs.size());
  if (boundary_data.empty()) return rhs;

  if (grid.domain == Domain::interval) {
    if (boundary_data.size() != 2)
      throw std::invalid_argument(
          "assemble_rhs: interval boundary data needs {left, right}");
    rhs.front() += boundary_data[0] / grid.spacing.front();
    rhs.back() += boundary_data[1] / grid.spacing.back();
  } else {
    if (static_cast<int>(boundary_data.size()) != grid.nphi)
      throw std::invalid_argument(
          "assemble_rhs: disk boundary data needs one value per sector");
    const double c_wall = grid.dphi / (grid.dr / 2.0);
    for (int m = 0; m < grid.nphi; ++m)
      rhs[grid.index(grid.resolution - 1, m)] += c_wall * boundary_data[m];
  }
  return rhs;
}

}  // namespace hopf
