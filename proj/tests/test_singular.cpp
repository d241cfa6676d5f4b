#include <cmath>
#include <vector>

#include "doctest.h"
#include "hopf/singular.hpp"

using namespace hopf;

namespace {

const BoundaryPoint kLeft{Domain::interval, 0.0};
const BoundaryPoint kRight{Domain::interval, 1.0};

}  // namespace

TEST_SUITE("singular") {

TEST_CASE("free dirac reproduces the harmonic measure") {
  const Grid g = build_grid(Domain::interval, 400, 2.0);
  const auto dual = duality_solution(g, PotentialSpec::zero(),
                                     default_ladder(), kLeft);
  // bounded potential: the ladder collapses to a single level
  CHECK(dual.levels.size() == 1);
  CHECK(dual.mass.back() == doctest::Approx(0.5).epsilon(1e-6));
  // the field itself is 1 - x, which the scheme carries exactly
  for (std::size_t i = 0; i < dual.u.size(); ++i)
    CHECK(std::fabs(dual.u[i] - (1.0 - g.x[i])) < 1e-9);
  CHECK(dual.verdict == SigmaVerdict::not_in_sigma);
}

TEST_CASE("dual mass equals the forward derivative for constant V") {
  // the graded wall keeps the Dirac's placement error out of the mass
  const Grid g = build_grid(Domain::interval, 600, 2.0);
  const auto dual = duality_solution(g, PotentialSpec::constant(5.0),
                                     default_ladder(), kLeft);
  const double s = std::sqrt(5.0);
  CHECK(dual.mass.back() ==
        doctest::Approx(std::tanh(0.5 * s) / s).epsilon(1e-4));
}

TEST_CASE("quadratic blow-up kills the dirac on its own wall") {
  const Grid g = build_grid(Domain::interval, 1200, 2.0);
  const auto V = PotentialSpec::power_law(4.0, 2.0, PowerAnchor::left);
  const auto lad = default_ladder(10, 4, 16, 0.0);

  const auto at0 = classify_sigma(g, V, lad, kLeft);
  CHECK(at0.verdict == SigmaVerdict::in_sigma);
  CHECK(at0.consistent);
  CHECK(at0.ancona_authoritative);
  CHECK(at0.ancona.divergent);
  CHECK(at0.dual.mass.back() < 1e-3);
  CHECK(at0.dual.defect.alpha_hat > 0.995);
  CHECK(at0.dual.defect.spread < 1e-2);

  const auto at1 = classify_sigma(g, V, lad, kRight);
  CHECK(at1.verdict == SigmaVerdict::not_in_sigma);
  CHECK(at1.consistent);
  CHECK_FALSE(at1.ancona.divergent);
  // int 4 y^-2 min(y,1-y)^2 / (1-y) dy = 4 ln 2 + 4 (1 - ln 2)
  CHECK(at1.ancona.value == doctest::Approx(4.0).epsilon(1e-5));
  // mass limit (sqrt(17)-3)/4, the inward derivative of the f=1 solve at 1
  CHECK(at1.dual.mass.back() ==
        doctest::Approx(0.25 * (std::sqrt(17.0) - 3.0)).epsilon(1e-4));
  CHECK(at1.dual.defect.alpha_hat < 1e-3);
}

TEST_CASE("subquadratic blow-up leaves the dirac alive") {
  const Grid g = build_grid(Domain::interval, 1200, 2.0);
  const auto V = PotentialSpec::power_law(1.0, 1.5);
  const auto rep = classify_sigma(g, V, default_ladder(10, 4, 14, 0.0), kLeft);
  CHECK(rep.verdict == SigmaVerdict::not_in_sigma);
  CHECK(rep.consistent);
  CHECK(rep.ancona_authoritative);
  CHECK_FALSE(rep.ancona.divergent);
  // exact value 2 atanh(1/sqrt(2)) after both halves are worked out
  CHECK(rep.ancona.value ==
        doctest::Approx(2.0 * std::atanh(1.0 / std::sqrt(2.0))).epsilon(1e-6));
  CHECK(rep.dual.mass.back() > 0.1);
}

TEST_CASE("disk rim with quadratic envelope defers to the integral") {
  const Grid g = build_grid(Domain::disk, 96);
  const auto V = PotentialSpec::power_law(4.0, 2.0);
  const auto rep = classify_sigma(g, V, default_ladder(10, 4, 16, 0.0),
                                  {Domain::disk, 0.0});
  CHECK(rep.ancona.divergent);
  CHECK(rep.ancona_authoritative);
  CHECK(rep.verdict == SigmaVerdict::in_sigma);
  CHECK(rep.consistent);
}

TEST_CASE("measure with one doomed and one surviving atom") {
  const Grid g = build_grid(Domain::interval, 1200, 2.0);
  const auto V = PotentialSpec::power_law(4.0, 2.0, PowerAnchor::left);
  BoundaryMeasure nu;
  nu.atoms = {{kLeft, 0.5}, {kRight, 0.5}};
  CHECK(nu.total(g) == doctest::Approx(1.0));

  const auto rep = measure_bvp(g, V, default_ladder(10, 4, 16, 0.0), nu);
  REQUIRE(rep.defect.atoms.size() == 2);
  CHECK(rep.defect.atoms[0].mass == doctest::Approx(0.5).epsilon(2e-2));
  CHECK(rep.defect.atoms[1].mass < 1e-3);
  CHECK(rep.defect_total == doctest::Approx(0.5).epsilon(2e-2));
  CHECK_FALSE(rep.representable);
}

TEST_CASE("measure on the regular wall is fully representable") {
  const Grid g = build_grid(Domain::interval, 1200, 2.0);
  const auto V = PotentialSpec::power_law(4.0, 2.0, PowerAnchor::left);
  BoundaryMeasure nu;
  nu.atoms = {{kRight, 1.0}};
  const auto rep = measure_bvp(g, V, default_ladder(10, 4, 16, 0.0), nu);
  CHECK(rep.defect_total < 1e-3);
  CHECK(rep.representable);
}

TEST_CASE("measure solves are linear in the datum") {
  const Grid g = build_grid(Domain::interval, 300);
  const auto V = PotentialSpec::power_law(1.0, 1.0, PowerAnchor::left);
  BoundaryMeasure one, two;
  one.atoms = {{kRight, 1.0}};
  two.atoms = {{kRight, 2.0}};
  const auto r1 = solve_measure_truncated(g, V, 100.0, one);
  const auto r2 = solve_measure_truncated(g, V, 100.0, two);
  for (std::size_t i = 0; i < r1.u.size(); ++i)
    CHECK(r2.u[i] == doctest::Approx(2.0 * r1.u[i]).epsilon(1e-12));
}

TEST_CASE("constant density reproduces the constant field") {
  const Grid g = build_grid(Domain::interval, 200);
  BoundaryMeasure nu;
  nu.density = {2.0, 2.0};
  CHECK(nu.total(g) == doctest::Approx(4.0));
  const auto r = solve_measure_truncated(g, PotentialSpec::zero(), 1.0, nu);
  for (double v : r.u) CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("free disk dirac approximates the poisson kernel") {
  const Grid g = build_grid(Domain::disk, 96);
  const BoundaryPoint a{Domain::disk, 0.0};
  const auto dual = duality_solution(g, PotentialSpec::zero(),
                                     default_ladder(), a);
  const Point far{-0.5, 0.0};
  CHECK(field_at(g, dual.u, far) ==
        doctest::Approx(poisson_kernel(a, far)).epsilon(5e-3));
  const Point mid{0.0, 0.4};
  CHECK(field_at(g, dual.u, mid) ==
        doctest::Approx(poisson_kernel(a, mid)).epsilon(5e-3));
  CHECK(field_at(g, dual.u, {0.0, 0.0}) ==
        doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(2e-2));
  // unit datum spreads to unit harmonic measure: the field mass equals the
  // torsion flux at the rim
  CHECK(dual.mass.back() == doctest::Approx(0.5).epsilon(2e-2));
}

TEST_CASE("pairing the dual against sources recovers the forward flux") {
  const Grid g = build_grid(Domain::interval, 400, 2.0);
  const auto V = PotentialSpec::power_law(1.0, 1.5);
  const auto lad = default_ladder(10, 4, 10, 0.0);
  const auto dual = duality_solution(g, V, lad, kLeft);

  std::vector<SourceField> suite;
  std::vector<NormalDerivativeReport> reports;
  for (auto spec : {SourceSpec::one(), SourceSpec::coordinate(),
                    SourceSpec::sine_bump()}) {
    suite.push_back(sample_source(g, spec));
    const auto lim = solve_limit(g, V, lad, suite.back());
    reports.push_back(boundary_report(lim, V, suite.back(), kLeft));
  }
  const auto id = duality_identity_check(dual, suite, reports);
  CHECK(id.max_residual <= 1e-12);
  for (std::size_t i = 0; i < id.pairing.size(); ++i)
    CHECK(id.pairing[i] == doctest::Approx(id.g[i]).epsilon(1e-10));
}

TEST_CASE("a-priori mass bound constant") {
  CHECK(l1_bound_constant(build_grid(Domain::interval, 200, 2.0)) ==
        doctest::Approx(2.0).epsilon(1e-6));
  const double cu = l1_bound_constant(build_grid(Domain::interval, 200));
  CHECK(cu > 1.95);
  CHECK(cu <= 2.0);
  const double cd = l1_bound_constant(build_grid(Domain::disk, 64));
  CHECK(cd > 1.9);
  CHECK(cd <= 2.0);
}

}  // TEST_SUITE
