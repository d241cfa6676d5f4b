#include "hopf/singular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hopf/kernels.hpp"
#include "hopf/linalg.hpp"
#include "hopf/quadrature.hpp"

namespace hopf {
namespace {

std::string cutoff_tag(const PotentialSpec& v, double cutoff) {
  std::string s = v.describe();
  if (v.bounded() || cutoff >= v.sup()) {
    s += " (untruncated)";
  } else {
    s += " @ k=" + std::to_string(cutoff);
  }
  return s;
}

double node_distance(const Grid& g, std::size_t i) {
  if (g.domain == Domain::interval) return std::min(g.x[i], 1.0 - g.x[i]);
  return 1.0 - g.node_r(i);
}

std::vector<double> datum_from_measure(const Grid& g,
                                       const BoundaryMeasure& nu) {
  const auto bq = boundary_quadrature(g);
  std::vector<double> datum(bq.size(), 0.0);
  if (!nu.density.empty()) {
    if (nu.density.size() != bq.size())
      throw std::invalid_argument(
          "measure density needs one value per boundary node");
    for (std::size_t i = 0; i < bq.size(); ++i) {
      if (!(nu.density[i] >= 0.0))
        throw std::invalid_argument("measure density must be nonnegative");
      datum[i] = nu.density[i];
    }
  }
  for (const auto& atom : nu.atoms) {
    if (!(atom.mass >= 0.0))
      throw std::invalid_argument("measure atoms must be nonnegative");
    if (atom.point.domain != g.domain)
      throw std::invalid_argument("measure atom belongs to another domain");
    const std::size_t i = nearest_boundary_node(g, atom.point);
    datum[i] += atom.mass / bq[i].weight;
  }
  return datum;
}

}  // namespace

double BoundaryMeasure::total(const Grid& grid) const {
  double t = 0.0;
  for (const auto& atom : atoms) t += atom.mass;
  if (!density.empty()) {
    const auto bq = boundary_quadrature(grid);
    if (density.size() != bq.size())
      throw std::invalid_argument(
          "measure density needs one value per boundary node");
    for (std::size_t i = 0; i < bq.size(); ++i)
      t += density[i] * bq[i].weight;
  }
  return t;
}

SolveResult solve_measure_truncated(const Grid& grid, const PotentialSpec& V,
                                    double cutoff, const BoundaryMeasure& nu,
                                    double tol) {
  if (cutoff <= 0.0) throw std::invalid_argument("cutoff must be positive");
  const std::vector<double> datum = datum_from_measure(grid, nu);
  const std::vector<double> vs = sample_truncated(V, grid, cutoff);
  const SymmetricStencil a = assemble_operator(grid, vs);
  const std::vector<double> zero(grid.num_nodes(), 0.0);
  const std::vector<double> b = assemble_rhs(grid, zero, datum);

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

SolveResult solve_dirac_truncated(const Grid& grid, const PotentialSpec& V,
                                  double cutoff, const BoundaryPoint& a,
                                  double tol) {
  BoundaryMeasure nu;
  nu.atoms.push_back({a, 1.0});
  return solve_measure_truncated(grid, V, cutoff, nu, tol);
}

DefectEstimate defect_mass(const DualitySolution& P, const SolveResult& theta,
                           const PotentialSpec& V) {
  if (P.levels.empty()) throw std::invalid_argument("empty duality solution");
  const Grid& g = P.levels.back().grid;
  if (theta.u.size() != g.num_nodes())
    throw std::invalid_argument("torsion field from another grid");

  const double tflux = wall_flux(g, theta.u, P.a);
  if (!(tflux > 0.0))
    throw std::logic_error("torsion flux at the wall must be positive");

  const auto n = g.num_nodes();
  const std::vector<double> vs =
      sample_truncated(V, g, std::numeric_limits<double>::infinity());
  const double mass = P.mass.back();
  const double k_last = P.levels.back().cutoff;

  // The strip must stay clear of the truncation layer: inside it the sampled
  // potential exceeds min(V, k_last) and the pairing would double-count the
  // very spike whose escape we are measuring.
  const double layer =
      2.0 * truncation_layer(V, g.domain, P.a, k_last);

  double alpha[3];
  for (int s = 0; s < 3; ++s) {
    const double strip = std::max(1e-2 / (1 << s), layer);
    double pair = mass;
    for (std::size_t i = 0; i < n; ++i) {
      if (node_distance(g, i) < strip) continue;
      pair += g.weights[i] * vs[i] * theta.u[i] * P.u[i];
    }
    alpha[s] = 1.0 - pair / tflux;
  }

  // The strip chunk decays like a fixed power of the width, so the Aitken
  // step, which measures the ratio from the data, removes it exactly for
  // pure power tails; Richardson with integer orders would not.
  const Extrapolated ex =
      aitken_limit({alpha[0], alpha[1], alpha[2]}, 2);
  DefectEstimate d;
  d.alpha_hat = std::clamp(ex.value, 0.0, 1.0);
  d.spread = std::fabs(alpha[2] - alpha[1]);
  return d;
}

DualitySolution duality_solution(const Grid& grid, const PotentialSpec& V,
                                 const TruncationLadder& ladder,
                                 const BoundaryPoint& a, double tol) {
  if (ladder.cutoffs.empty())
    throw std::invalid_argument("truncation ladder is empty");
  if (a.domain != grid.domain)
    throw std::invalid_argument("boundary point belongs to another domain");

  DualitySolution d;
  d.a = a;
  d.ladder = ladder;
  const double vsup = V.sup();
  for (double k : ladder.cutoffs) {
    d.levels.push_back(solve_dirac_truncated(grid, V, k, a, tol));
    d.mass.push_back(d.levels.back().norm_l1);
    if (k >= vsup) break;  // min(V,k) no longer changes
  }
  d.u = d.levels.back().u;

  const double slack = 1e-12 * d.mass.front() + 1e-300;
  for (std::size_t i = 1; i < d.mass.size(); ++i)
    if (d.mass[i] > d.mass[i - 1] + slack) d.monotone = false;
  d.limit = aitken_limit(d.mass, 2);
  const auto m = d.mass.size();
  d.still_decreasing = m >= 2 && d.mass[m - 2] - d.mass[m - 1] > slack;

  const SolveResult theta = torsion_function(grid, tol);
  d.defect = defect_mass(d, theta, V);

  // An unbounded potential saturates the grid once the cutoff clears every
  // nodal sample: the remaining levels repeat the same system, so a plateau
  // past that point reflects the mesh, not the limit.
  bool saturated = false;
  if (!V.bounded()) {
    const std::vector<double> vn =
        sample_truncated(V, grid, std::numeric_limits<double>::infinity());
    saturated = d.levels.back().cutoff >=
                kernels::max_abs(vn.data(), vn.size());
  }

  const double thr = std::max(10.0 * tol, 1e-3);
  const double last = d.mass.back();
  if (last <= thr) {
    if (d.still_decreasing || saturated) {
      d.verdict = SigmaVerdict::in_sigma;
    } else {
      // small but no longer moving: call it surviving, flag the stall
      d.verdict = SigmaVerdict::not_in_sigma;
      d.stalled = true;
    }
  } else if (m >= 2 && last <= 0.7 * d.mass[m - 2]) {
    // still in free fall above the threshold: the ladder ended too early
    // to tell extinction from slow stabilization
    d.verdict = SigmaVerdict::uncertain;
  } else if (saturated && last <= 10.0 * thr) {
    // a saturated plateau within an order of magnitude of the threshold is
    // mesh-floor territory; far above it the plateau is a real limit
    d.verdict = SigmaVerdict::uncertain;
  } else {
    d.verdict = SigmaVerdict::not_in_sigma;
  }
  return d;
}

AnconaIntegral ancona_integral(Domain domain, const PotentialSpec& V,
                               const BoundaryPoint& a, double tol) {
  if (a.domain != domain)
    throw std::invalid_argument("boundary point belongs to another domain");
  if (V.kind == PotentialKind::zero) return {0.0, false};

  if (domain == Domain::interval) {
    const double ax = a.where;
    if (ax != 0.0 && ax != 1.0)
      throw std::invalid_argument("interval boundary points are 0 and 1");
    const auto h = [&](double y) {
      const double d = std::min(y, 1.0 - y);
      return evaluate(V, domain, Point{y, 0.0}) * d * d / std::fabs(y - ax);
    };
    const GradedResult lo = graded_integral(h, 0.0, 0.5, true, tol);
    const GradedResult hi = graded_integral(h, 0.5, 1.0, false, tol);
    return {lo.value + hi.value, lo.divergent || hi.divergent};
  }

  // Disk potentials are radial, so the angular part of
  // int V d^2 / |y-a|^2 collapses through the Poisson average
  // int dphi / |y-a|^2 = 2 pi / (1 - r^2), leaving a radial integral
  // independent of where a sits on the rim.
  const auto h = [&](double r) {
    const double v = evaluate(V, domain, Point{r, 0.0});
    return 2.0 * std::numbers::pi * v * r * (1.0 - r) / (1.0 + r);
  };
  const GradedResult res = graded_integral(h, 0.0, 1.0, false, tol);
  return {res.value, res.divergent};
}

SigmaReport classify_sigma(const Grid& grid, const PotentialSpec& V,
                           const TruncationLadder& ladder,
                           const BoundaryPoint& a, double tol) {
  SigmaReport rep;
  rep.a = a;
  rep.dual = duality_solution(grid, V, ladder, a, tol);
  rep.ancona = ancona_integral(grid.domain, V, a);
  rep.verdict = rep.dual.verdict;
  rep.ancona_authoritative =
      V.bounded() ||
      (V.kind == PotentialKind::power_law && V.alpha <= 2.0);
  if (rep.ancona_authoritative) {
    switch (rep.verdict) {
      case SigmaVerdict::in_sigma:
        rep.consistent = rep.ancona.divergent;
        break;
      case SigmaVerdict::not_in_sigma:
        rep.consistent = !rep.ancona.divergent;
        break;
      case SigmaVerdict::uncertain:
        // the trace abstains, so the certified integral decides alone and
        // there is nothing to disagree with
        rep.verdict = rep.ancona.divergent ? SigmaVerdict::in_sigma
                                           : SigmaVerdict::not_in_sigma;
        rep.consistent = true;
        break;
    }
  }
  return rep;
}

MeasureSolveReport measure_bvp(const Grid& grid, const PotentialSpec& V,
                               const TruncationLadder& ladder,
                               const BoundaryMeasure& nu, double tol) {
  if (ladder.cutoffs.empty())
    throw std::invalid_argument("truncation ladder is empty");

  MeasureSolveReport rep;
  rep.nu = nu;
  rep.ladder = ladder;
  const double vsup = V.sup();
  for (double k : ladder.cutoffs) {
    rep.levels.push_back(solve_measure_truncated(grid, V, k, nu, 1e-10));
    rep.mass.push_back(rep.levels.back().norm_l1);
    if (k >= vsup) break;
  }
  rep.u = rep.levels.back().u;

  for (const auto& atom : nu.atoms) {
    DualitySolution run = duality_solution(grid, V, ladder, atom.point, 1e-10);
    rep.defect.atoms.push_back({atom.point, atom.mass * run.defect.alpha_hat});
    rep.atom_runs.push_back(std::move(run));
  }

  if (!nu.density.empty()) {
    const bool subquadratic =
        V.bounded() ||
        (V.kind == PotentialKind::power_law && V.alpha < 2.0);
    if (subquadratic) {
      // the exceptional set carries no boundary area here, so a bounded
      // density loses nothing
      rep.defect.density.assign(nu.density.size(), 0.0);
    } else {
      const auto bq = boundary_quadrature(grid);
      rep.defect.density.resize(nu.density.size());
      if (grid.domain == Domain::disk) {
        // radial potential: every sector shares one defect fraction
        const DualitySolution run =
            duality_solution(grid, V, ladder, bq[0].point, 1e-10);
        for (std::size_t i = 0; i < nu.density.size(); ++i)
          rep.defect.density[i] = nu.density[i] * run.defect.alpha_hat;
        rep.atom_runs.push_back(run);
      } else {
        for (std::size_t i = 0; i < nu.density.size(); ++i) {
          const DualitySolution run =
              duality_solution(grid, V, ladder, bq[i].point, 1e-10);
          rep.defect.density[i] = nu.density[i] * run.defect.alpha_hat;
          rep.atom_runs.push_back(run);
        }
      }
    }
  }

  rep.defect_total = rep.defect.total(grid);
  rep.representable = rep.defect_total <= tol * nu.total(grid) + 1e-300;
  return rep;
}

DualityIdentity duality_identity_check(
    const DualitySolution& P, const std::vector<SourceField>& suite,
    const std::vector<NormalDerivativeReport>& reports) {
  if (suite.size() != reports.size())
    throw std::invalid_argument("one boundary report per source");
  if (P.levels.empty()) throw std::invalid_argument("empty duality solution");

  const Grid& g = P.levels.back().grid;
  DualityIdentity out;
  out.a = P.a;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (suite[i].values.size() != g.num_nodes())
      throw std::invalid_argument("source sampled on a different grid");
    if (reports[i].a.domain != P.a.domain || reports[i].a.where != P.a.where)
      throw std::invalid_argument("report taken at a different boundary point");
    std::vector<double> trace;
    trace.reserve(P.levels.size());
    for (const auto& level : P.levels)
      trace.push_back(kernels::dot3(g.weights.data(), level.u.data(),
                                    suite[i].values.data(), g.num_nodes()));
    const double pair = aitken_limit(trace, 2).value;
    out.pairing.push_back(pair);
    out.g.push_back(reports[i].g);
    out.max_residual =
        std::max(out.max_residual, std::fabs(pair - reports[i].g));
  }
  return out;
}

double l1_bound_constant(const Grid& grid, double tol) {
  const SolveResult theta = torsion_function(grid, tol);
  double flux_sup = 0.0;
  for (const auto& node : boundary_quadrature(grid))
    flux_sup = std::max(flux_sup, wall_flux(grid, theta.u, node.point));
  double c1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.num_nodes(); ++i)
    c1 = std::min(c1, theta.u[i] / node_distance(grid, i));
  if (!(c1 > 0.0))
    throw std::logic_error("torsion function must dominate the distance");
  return flux_sup / std::min(1.0, c1);
}

}  // namespace hopf
