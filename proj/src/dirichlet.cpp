#include "hopf/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hopf/kernels.hpp"
#include "hopf/linalg.hpp"

namespace hopf {
namespace {

void attach_norms(SourceField& f) {
  const auto n = f.values.size();
  if (n != f.grid.num_nodes())
    throw std::invalid_argument("source field does not match the grid");
  for (double v : f.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("source field holds a non-finite value");
  f.norm_l1 =
      kernels::weighted_abs_sum(f.grid.weights.data(), f.values.data(), n);
  f.norm_sup = kernels::max_abs(f.values.data(), n);
}

std::string cutoff_tag(const PotentialSpec& v, double cutoff) {
  std::string s = v.describe();
  if (v.bounded() || cutoff >= v.sup()) {
    s += " (untruncated)";
  } else {
    s += " @ k=" + std::to_string(cutoff);
  }
  return s;
}

}  // namespace

SourceField sample_source(const Grid& grid, const SourceSpec& spec) {
  SourceField f;
  f.grid = grid;
  const auto n = grid.num_nodes();
  f.values.resize(n);
  if (grid.domain == Domain::interval) {
    for (std::size_t i = 0; i < n; ++i) f.values[i] = spec.eval(grid.x[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) f.values[i] = spec.eval(grid.node_r(i));
  }
  attach_norms(f);
  return f;
}

SourceField source_from_values(const Grid& grid, std::vector<double> values) {
  SourceField f;
  f.grid = grid;
  f.values = std::move(values);
  attach_norms(f);
  return f;
}

SolveResult solve_truncated(const Grid& grid, const PotentialSpec& V,
                            double cutoff, const SourceField& f, double tol) {
  if (cutoff <= 0.0) throw std::invalid_argument("cutoff must be positive");
  if (f.values.size() != grid.num_nodes())
    throw std::invalid_argument("source sampled on a different grid");

  const std::vector<double> vs = sample_truncated(V, grid, cutoff);
  const SymmetricStencil a = assemble_operator(grid, vs);
  const std::vector<double> b = assemble_rhs(grid, f.values);

  SolveResult r;
  r.grid = grid;
  r.potential = cutoff_tag(V, cutoff);
  r.cutoff = cutoff;
  const CgOutcome out = solve_pcg(a, b, r.u, tol);
  r.residual = out.residual;
  r.iterations = out.iterations;

  const auto n = r.u.size();
  std::vector<double> wv(n);
  kernels::hadamard(grid.weights.data(), vs.data(), wv.data(), n);
  r.absorption = kernels::weighted_abs_sum(wv.data(), r.u.data(), n);
  r.norm_l1 = kernels::weighted_abs_sum(grid.weights.data(), r.u.data(), n);
  r.norm_sup = kernels::max_abs(r.u.data(), n);
  return r;
}

LimitSolution solve_limit(const Grid& grid, const PotentialSpec& V,
                          const TruncationLadder& ladder, const SourceField& f,
                          double tol) {
  if (ladder.cutoffs.empty())
    throw std::invalid_argument("truncation ladder is empty");

  const auto n = grid.num_nodes();
  SourceField fp = f, fm = f;
  bool signed_split = false;
  for (std::size_t i = 0; i < n; ++i) {
    fp.values[i] = std::max(f.values[i], 0.0);
    fm.values[i] = std::max(-f.values[i], 0.0);
    if (fm.values[i] > 0.0) signed_split = true;
  }
  if (signed_split) {
    attach_norms(fp);
    attach_norms(fm);
  }

  LimitSolution lim;
  lim.ladder = ladder;
  const double vsup = V.sup();

  for (double k : ladder.cutoffs) {
    SolveResult level = solve_truncated(grid, V, k, fp, tol);
    if (signed_split) {
      const SolveResult neg = solve_truncated(grid, V, k, fm, tol);
      kernels::axpy(-1.0, neg.u.data(), level.u.data(), n);
      level.residual = std::max(level.residual, neg.residual);
      level.iterations += neg.iterations;
      level.norm_l1 =
          kernels::weighted_abs_sum(grid.weights.data(), level.u.data(), n);
      level.norm_sup = kernels::max_abs(level.u.data(), n);
      const std::vector<double> vs = sample_truncated(V, grid, k);
      std::vector<double> wv(n);
      kernels::hadamard(grid.weights.data(), vs.data(), wv.data(), n);
      level.absorption =
          kernels::weighted_abs_sum(wv.data(), level.u.data(), n);
    }
    lim.levels.push_back(std::move(level));

    const auto m = lim.levels.size();
    if (m >= 2) {
      std::vector<double> diff = lim.levels[m - 2].u;
      kernels::axpy(-1.0, lim.levels[m - 1].u.data(), diff.data(), n);
      lim.increments.push_back(
          kernels::weighted_abs_sum(grid.weights.data(), diff.data(), n));
    }

    if (k >= vsup) {
      // the truncation is inactive from here on; later levels would repeat
      // this solve verbatim
      lim.converged = true;
      break;
    }
    // tau_stop <= 0 disables the increment stop: boundary-flux scans need
    // the whole ladder even after the field itself has settled
    if (ladder.tau_stop > 0.0) {
      const double scale = lim.levels.back().norm_l1;
      const auto inc = lim.increments.size();
      if (inc >= 2 && lim.increments[inc - 1] <= ladder.tau_stop * scale &&
          lim.increments[inc - 2] <= ladder.tau_stop * scale) {
        lim.converged = true;
        break;
      }
    }
  }
  lim.u = lim.levels.back().u;
  return lim;
}

SolveResult torsion_function(const Grid& grid, double tol) {
  return solve_truncated(grid, PotentialSpec::zero(), 1.0,
                         sample_source(grid, SourceSpec::one()), tol);
}

SolveResult majorant(const Grid& grid, const SourceField& f, double tol) {
  std::vector<double> absf = f.values;
  for (double& v : absf) v = std::fabs(v);
  return solve_truncated(grid, PotentialSpec::zero(), 1.0,
                         source_from_values(grid, std::move(absf)), tol);
}

double energy(const Grid& grid, const PotentialSpec& V, double cutoff,
              const std::vector<double>& z, const SourceField& f) {
  const auto n = grid.num_nodes();
  if (z.size() != n || f.values.size() != n)
    throw std::invalid_argument("field sampled on a different grid");
  const std::vector<double> vs = sample_truncated(V, grid, cutoff);
  const SymmetricStencil a = assemble_operator(grid, vs);
  std::vector<double> az(n);
  a.multiply(z, az);
  return 0.5 * kernels::dot(z.data(), az.data(), n) -
         kernels::dot3(grid.weights.data(), f.values.data(), z.data(), n);
}

double absorption_integral(const SolveResult& r) { return r.absorption; }

}  // namespace hopf
