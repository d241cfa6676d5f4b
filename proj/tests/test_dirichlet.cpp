#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hopf/dirichlet.hpp"

using namespace hopf;

TEST_SUITE("dirichlet") {

TEST_CASE("torsion function is the parabola on the interval") {
  const Grid g = build_grid(Domain::interval, 400);
  const SolveResult t = torsion_function(g);
  for (std::size_t i = 0; i < g.x.size(); ++i)
    CHECK(t.u[i] == doctest::Approx(0.5 * g.x[i] * (1.0 - g.x[i])).epsilon(1e-8));
  CHECK(t.residual <= 1e-10);
}

TEST_CASE("torsion function approximates the disk paraboloid") {
  const Grid g = build_grid(Domain::disk, 64);
  const SolveResult t = torsion_function(g);
  for (int j = 0; j < g.resolution; ++j) {
    const double exact = 0.25 * (1.0 - g.r[j] * g.r[j]);
    CHECK(t.u[g.index(j, 0)] == doctest::Approx(exact).epsilon(5e-4));
  }
}

TEST_CASE("nonnegative sources give nonnegative fields") {
  const Grid g = build_grid(Domain::interval, 300, 2.0);
  const auto f = sample_source(g, SourceSpec::sine_bump());
  const auto V = PotentialSpec::power_law(1.0, 1.5);
  const SolveResult r = solve_truncated(g, V, 1e4, f);
  for (double v : r.u) CHECK(v >= 0.0);
}

TEST_CASE("stronger absorption lowers the field nodewise") {
  const Grid g = build_grid(Domain::interval, 300);
  const auto f = sample_source(g, SourceSpec::one());
  const auto r0 = solve_truncated(g, PotentialSpec::zero(), 1.0, f);
  const auto r5 = solve_truncated(g, PotentialSpec::constant(5.0), 10.0, f);
  for (std::size_t i = 0; i < r0.u.size(); ++i) {
    CHECK(r5.u[i] <= r0.u[i] + 1e-12);
    CHECK(r5.u[i] >= 0.0);
  }
}

TEST_CASE("truncation ladder decreases monotonically to the limit") {
  const Grid g = build_grid(Domain::interval, 300, 2.0);
  const auto f = sample_source(g, SourceSpec::one());
  const auto V = PotentialSpec::power_law(1.0, 1.5);
  const LimitSolution lim = solve_limit(g, V, default_ladder(10, 4, 10, 0.0), f);
  REQUIRE(lim.levels.size() == 10);
  const double slack = 10.0 * 1e-10;
  for (std::size_t l = 1; l < lim.levels.size(); ++l)
    for (std::size_t i = 0; i < lim.u.size(); ++i)
      CHECK(lim.levels[l].u[i] <= lim.levels[l - 1].u[i] + slack);
  // increments track the actual L1 gaps and shrink along the ladder
  REQUIRE(lim.increments.size() == 9);
  CHECK(lim.increments.back() < lim.increments.front());
}

TEST_CASE("majorant dominates signed solves") {
  const Grid g = build_grid(Domain::interval, 200);
  std::vector<double> raw(g.num_nodes());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = (g.x[i] < 0.5) ? 1.0 : -1.0;
  const auto f = source_from_values(g, raw);
  const auto V = PotentialSpec::power_law(1.0, 1.5);
  const SolveResult w = majorant(g, f);
  const LimitSolution lim = solve_limit(g, V, default_ladder(10, 4, 6, 0.0), f);
  for (std::size_t l = 0; l < lim.levels.size(); ++l)
    for (std::size_t i = 0; i < w.u.size(); ++i)
      CHECK(std::fabs(lim.levels[l].u[i]) <= w.u[i] + 1e-10);
}

TEST_CASE("absorbed mass stays below the source mass") {
  const Grid g = build_grid(Domain::interval, 300, 2.0);
  for (auto spec : {SourceSpec::one(), SourceSpec::coordinate(),
                    SourceSpec::sine_bump()}) {
    const auto f = sample_source(g, spec);
    for (double alpha : {1.0, 1.5, 2.0}) {
      const auto V = PotentialSpec::power_law(1.0, alpha);
      const auto r = solve_truncated(g, V, 1e6, f);
      CHECK(absorption_integral(r) <= f.norm_l1 + 1e-8);
      CHECK(r.absorption == doctest::Approx(absorption_integral(r)));
    }
  }
}

TEST_CASE("solver field minimizes the energy") {
  const Grid g = build_grid(Domain::interval, 150);
  const auto f = sample_source(g, SourceSpec::one());
  const auto V = PotentialSpec::constant(3.0);
  const double k = 10.0;
  const auto r = solve_truncated(g, V, k, f);
  const double e0 = energy(g, V, k, r.u, f);
  // E(u) = -(1/2) int f u at the minimizer
  double fu = 0.0;
  for (std::size_t i = 0; i < r.u.size(); ++i)
    fu += g.weights[i] * f.values[i] * r.u[i];
  CHECK(e0 == doctest::Approx(-0.5 * fu).epsilon(1e-9));
  // any perturbation raises it
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> z = r.u;
    for (double& v : z) v += 1e-3 * d(rng);
    CHECK(energy(g, V, k, z, f) > e0);
  }
}

TEST_CASE("limit walk stops early once the potential is exhausted") {
  const Grid g = build_grid(Domain::interval, 100);
  const auto f = sample_source(g, SourceSpec::one());
  // sup V = 5 < k0 = 10: the first level already solves the untruncated
  // problem, so the walk ends after a single solve
  const LimitSolution lim =
      solve_limit(g, PotentialSpec::constant(5.0), default_ladder(), f);
  CHECK(lim.levels.size() == 1);
  CHECK(lim.converged);
}

TEST_CASE("tau stop ends the walk when increments settle") {
  const Grid g = build_grid(Domain::interval, 200, 2.0);
  const auto f = sample_source(g, SourceSpec::one());
  const auto V = PotentialSpec::power_law(1.0, 1.0);
  const LimitSolution lim =
      solve_limit(g, V, default_ladder(10, 4, 12, 1e-4), f);
  CHECK(lim.converged);
  CHECK(lim.levels.size() < 12);
  const LimitSolution all =
      solve_limit(g, V, default_ladder(10, 4, 12, 0.0), f);
  CHECK(all.levels.size() == 12);
}

TEST_CASE("critical strength reproduces the indicial midpoint value") {
  const Grid g = build_grid(Domain::interval, 1200, 2.0);
  const auto f = sample_source(g, SourceSpec::one());
  const auto V = PotentialSpec::power_law(1.0, 2.0);
  const LimitSolution lim =
      solve_limit(g, V, default_ladder(10, 4, 14, 0.0), f);
  // value at the midpoint node against (sqrt(5)-2)/4
  const double exact = 0.25 * (std::sqrt(5.0) - 2.0);
  std::size_t mid = 0;
  double best = 2.0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    if (std::fabs(g.x[i] - 0.5) < best) {
      best = std::fabs(g.x[i] - 0.5);
      mid = i;
    }
  REQUIRE(best < 1e-9);
  CHECK(lim.u[mid] == doctest::Approx(exact).epsilon(2e-4));
}

TEST_CASE("signed sources split cleanly") {
  const Grid g = build_grid(Domain::interval, 200);
  std::vector<double> raw(g.num_nodes());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = std::sin(3.0 * M_PI * g.x[i]);
  const auto f = source_from_values(g, raw);
  const auto lim = solve_limit(g, PotentialSpec::constant(2.0),
                               default_ladder(10, 4, 4, 0.0), f);
  // the split solution solves the signed problem: check the residual of the
  // full operator applied to u against W f
  const Grid& gg = lim.levels.back().grid;
  const auto& u = lim.u;
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double left = (i == 0) ? 0.0 : u[i - 1];
    const double right = (i + 1 == u.size()) ? 0.0 : u[i + 1];
    const double flux = (u[i] - left) / gg.spacing[i] +
                        (u[i] - right) / gg.spacing[i + 1];
    const double res =
        flux + gg.weights[i] * 2.0 * u[i] - gg.weights[i] * raw[i];
    worst = std::max(worst, std::fabs(res));
  }
  CHECK(worst <= 1e-8);
}

}  // TEST_SUITE
