#pragma once

#include <vector>

#include "hopf/geometry.hpp"

namespace hopf {

// Symmetric positive definite stencil matrix. Only the strictly lower
// triangle is stored (row-major, columns ascending); the diagonal is kept
// separately. multiply() applies the full symmetric operator.
struct SymmetricStencil {
  int n = 0;
  std::vector<double> diag;
  std::vector<int> row_ptr;  // size n+1, offsets into col/val
  std::vector<int> col;
  std::vector<double> val;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

// Incomplete Cholesky on the stencil pattern. For a tridiagonal matrix the
// pattern is complete, so the factorization is exact and PCG converges in a
// single iteration regardless of conditioning.
class Ic0 {
 public:
  explicit Ic0(const SymmetricStencil& a);
  void apply(const std::vector<double>& r, std::vector<double>& z) const;

 private:
  int n_ = 0;
  const std::vector<int>* row_ptr_ = nullptr;
  const std::vector<int>* col_ = nullptr;
  std::vector<double> lval_;
  std::vector<double> ldiag_;
};

struct CgOutcome {
  int iterations = 0;
  double residual = 0.0;  // final |Ax-b|_2 / |b|_2
};

// Preconditioned conjugate gradient. Throws std::runtime_error if the
// iteration cap is hit; max_iter = 0 picks 10n + 100.
CgOutcome solve_pcg(const SymmetricStencil& a, const std::vector<double>& b,
                    std::vector<double>& x, double tol = 1e-12,
                    int max_iter = 0);

// Conservative discretization of -lap(u) + V u on the interior nodes of the
// grid, with homogeneous Dirichlet walls folded into the diagonal. potential
// holds V sampled at the nodes.
SymmetricStencil assemble_operator(const Grid& grid,
                                   const std::vector<double>& potential);

// Right hand side W*f plus the boundary-data terms. boundary_data is either
// empty (zero trace), {left, right} on the interval, or one value per
// angular sector on the disk.
std::vector<double> assemble_rhs(const Grid& grid,
                                 const std::vector<double>& source,
                                 const std::vector<double>& boundary_data = {});

}  // namespace hopf
