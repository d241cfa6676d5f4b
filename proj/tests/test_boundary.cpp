#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hopf/boundary.hpp"

using namespace hopf;

namespace {

const BoundaryPoint kLeft{Domain::interval, 0.0};
const BoundaryPoint kRight{Domain::interval, 1.0};

LimitSolution limit_for(const Grid& g, const PotentialSpec& V,
                        const TruncationLadder& lad) {
  const auto f = sample_source(g, SourceSpec::one());
  return solve_limit(g, V, lad, f);
}

}  // namespace

TEST_SUITE("boundary") {

TEST_CASE("green and poisson kernels, closed forms") {
  CHECK(green_kernel(Domain::interval, {0.25, 0}, {0.75, 0}) ==
        doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(green_kernel(Domain::interval, {0.75, 0}, {0.25, 0}) ==
        doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(poisson_kernel(kLeft, {0.3, 0}) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(poisson_kernel(kRight, {0.3, 0}) == doctest::Approx(0.3).epsilon(1e-14));

  // disk kernel with the pole at the origin has no reflection term
  CHECK(green_kernel(Domain::disk, {0.5, 0}, {0, 0}) ==
        doctest::Approx(std::log(2.0) / (2.0 * M_PI)).epsilon(1e-12));
  const Point p{0.3, 0.2}, q{-0.1, 0.4};
  CHECK(green_kernel(Domain::disk, p, q) ==
        doctest::Approx(green_kernel(Domain::disk, q, p)).epsilon(1e-12));
  // reflected-pole formula checked directly
  const double qq = q.x * q.x + q.y * q.y;
  const Point qs{q.x / qq, q.y / qq};
  const double num = std::hypot(p.x - qs.x, p.y - qs.y) * std::sqrt(qq);
  const double den = std::hypot(p.x - q.x, p.y - q.y);
  CHECK(green_kernel(Domain::disk, p, q) ==
        doctest::Approx(std::log(num / den) / (2.0 * M_PI)).epsilon(1e-12));

  const BoundaryPoint top{Domain::disk, M_PI / 2.0};
  CHECK(poisson_kernel(top, {0, 0}) ==
        doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
  CHECK(poisson_kernel(top, {0, 0.5}) ==
        doctest::Approx(0.75 / (2.0 * M_PI * 0.25)).epsilon(1e-12));
}

TEST_CASE("field evaluation is piecewise linear with zero trace") {
  const Grid g = build_grid(Domain::interval, 10);
  std::vector<double> u(g.num_nodes());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = std::min(g.x[i], 1.0 - g.x[i]);
  // the hat has its kink on a node, so interpolation is exact everywhere
  CHECK(field_at(g, u, {0.233, 0}) == doctest::Approx(0.233).epsilon(1e-13));
  CHECK(field_at(g, u, {0.04, 0}) == doctest::Approx(0.04).epsilon(1e-13));
  CHECK(field_at(g, u, {0.9991, 0}) ==
        doctest::Approx(0.0009).epsilon(1e-10));

  const Grid d = build_grid(Domain::disk, 32);
  std::vector<double> v(d.num_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 - d.node_r(i);
  for (double phi : {0.0, 1.234, 4.5}) {
    const Point pr{0.7 * std::cos(phi), 0.7 * std::sin(phi)};
    CHECK(field_at(d, v, pr) == doctest::Approx(0.3).epsilon(1e-12));
    const Point pw{0.995 * std::cos(phi), 0.995 * std::sin(phi)};
    CHECK(field_at(d, v, pw) == doctest::Approx(0.005).epsilon(1e-9));
  }
}

TEST_CASE("wall flux is the first-node quotient") {
  const Grid g = build_grid(Domain::interval, 10);
  std::vector<double> u(g.num_nodes());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = std::min(g.x[i], 1.0 - g.x[i]);
  CHECK(wall_flux(g, u, kLeft) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(wall_flux(g, u, kRight) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("classical quotient of the free problem") {
  const Grid g = build_grid(Domain::interval, 400);
  const auto lim = limit_for(g, PotentialSpec::zero(), default_ladder());

  // node-aligned offsets dodge the interpolation error entirely: the
  // quotient is exactly (1 - eps)/2 and Richardson strips it clean
  const auto qn = classical_quotient(lim, kLeft, {0.16, 0.08, 0.04, 0.02});
  CHECK(qn.limit.value == doctest::Approx(0.5).epsilon(1e-9));

  const auto q = classical_quotient(lim, kLeft);
  CHECK(q.limit.value == doctest::Approx(0.5).epsilon(1e-3));
  for (std::size_t i = 1; i < q.eps.size(); ++i)
    CHECK(q.eps[i] == doctest::Approx(0.5 * q.eps[i - 1]));

  CHECK_THROWS_AS(classical_quotient(lim, kLeft, {1e-6, 5e-7}),
                  std::invalid_argument);
  CHECK_THROWS_AS(classical_quotient(lim, kLeft, {0.1, 0.2}),
                  std::invalid_argument);
}

TEST_CASE("truncation layer width") {
  const auto Vl = PotentialSpec::power_law(2.0, 1.5, PowerAnchor::left);
  CHECK(truncation_layer(Vl, Domain::interval, kLeft, 1e3) ==
        doctest::Approx(std::pow(2e-3, 1.0 / 1.5)).epsilon(1e-12));
  CHECK(truncation_layer(Vl, Domain::interval, kRight, 1e3) == 0.0);

  const auto Vb = PotentialSpec::power_law(1.0, 2.0);
  CHECK(truncation_layer(Vb, Domain::interval, kRight, 100.0) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(truncation_layer(Vb, Domain::disk, {Domain::disk, 1.0}, 100.0) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(truncation_layer(PotentialSpec::constant(7.0), Domain::interval, kLeft,
                         100.0) == 0.0);
}

TEST_CASE("flux ladder tracks the reference ladder rung by rung") {
  const Grid g = build_grid(Domain::interval, 800, 2.0);
  const auto V = PotentialSpec::power_law(1.0, 1.5);
  const auto lim = limit_for(g, V, default_ladder(10, 4, 14, 0.0));
  const auto flux = pointwise_normal_derivative(lim, kLeft);
  REQUIRE(flux.flux.size() == 14);
  // reference solver digits for the same cutoffs
  CHECK(flux.flux[0] == doctest::Approx(0.334449037533783).epsilon(1e-3));
  CHECK(flux.flux[4] == doctest::Approx(0.216449862749054).epsilon(1e-3));
  CHECK(flux.flux[8] == doctest::Approx(0.198371290262985).epsilon(1e-3));
  CHECK(flux.flux.back() == doctest::Approx(0.195339205017583).epsilon(1e-3));
  CHECK(flux.limit.value == doctest::Approx(0.195005132655042).epsilon(5e-4));
  CHECK(flux.monotone);
}

TEST_CASE("kernel integral of the free problem") {
  const Grid g = build_grid(Domain::interval, 300);
  const auto f = sample_source(g, SourceSpec::one());
  const auto lim = solve_limit(g, PotentialSpec::zero(), default_ladder(), f);
  const auto ki = kernel_source_integral(lim, PotentialSpec::zero(), f, kLeft);
  CHECK(ki.f_part == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(ki.vu_part == doctest::Approx(0.0));
  CHECK(ki.value == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_FALSE(ki.divergent);

  const Grid d = build_grid(Domain::disk, 64);
  const auto fd = sample_source(d, SourceSpec::one());
  const auto limd = solve_limit(d, PotentialSpec::zero(), default_ladder(), fd);
  const auto kid = kernel_source_integral(limd, PotentialSpec::zero(), fd,
                                          {Domain::disk, 0.0});
  CHECK(kid.value == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("representation verdicts across the threshold") {
  const Grid g = build_grid(Domain::interval, 1200, 2.0);
  const auto lad = default_ladder(10, 4, 14, 0.0);

  const auto free = representation_membership(g, PotentialSpec::zero(), lad, kLeft);
  CHECK(free.verdict == Verdict::yes);
  CHECK(free.gap < 1e-5);

  const auto sub = representation_membership(
      g, PotentialSpec::power_law(1.0, 1.5), lad, kLeft);
  CHECK(sub.verdict == Verdict::yes);

  const auto crit = representation_membership(
      g, PotentialSpec::power_law(1.0, 2.0), lad, kLeft);
  CHECK(crit.verdict == Verdict::no);

  const auto strong = representation_membership(
      g, PotentialSpec::power_law(4.0, 2.0), lad, kLeft);
  CHECK(strong.verdict == Verdict::no);
  CHECK(strong.quotient.limit.value < 1e-3);
}

TEST_CASE("boundary report across the threshold") {
  const Grid g = build_grid(Domain::interval, 800, 2.0);
  const auto f = sample_source(g, SourceSpec::one());

  const auto Vsub = PotentialSpec::power_law(1.0, 1.5);
  const auto lsub = solve_limit(g, Vsub, default_ladder(10, 4, 14, 0.0), f);
  const auto rsub = boundary_report(lsub, Vsub, f, kLeft);
  CHECK(rsub.classical_exists);
  CHECK(rsub.representation_holds);
  CHECK(rsub.hopf_positive);
  CHECK(rsub.g == doctest::Approx(0.195005132655042).epsilon(5e-4));
  CHECK(std::fabs(rsub.quotient.limit.value - rsub.g) < 2e-3);
  CHECK(std::fabs(rsub.kernel.value - rsub.g) < 2e-4);

  // the critical flux sinks under the zero threshold only once the grid
  // resolves the last truncation layer, hence the finer mesh here
  const Grid gc = build_grid(Domain::interval, 1200, 2.0);
  const auto fc = sample_source(gc, SourceSpec::one());
  const auto Vcrit = PotentialSpec::power_law(1.0, 2.0);
  const auto lcrit = solve_limit(gc, Vcrit, default_ladder(10, 4, 16, 0.0), fc);
  const auto rcrit = boundary_report(lcrit, Vcrit, fc, kLeft);
  CHECK_FALSE(rcrit.hopf_positive);
  CHECK_FALSE(rcrit.representation_holds);
  CHECK(rcrit.flux.still_decreasing);
  CHECK(rcrit.flux.flux.back() < 2e-3);
}

TEST_CASE("boundary report at the disk wall, free problem") {
  const Grid d = build_grid(Domain::disk, 96);
  const auto f = sample_source(d, SourceSpec::one());
  const auto lim = solve_limit(d, PotentialSpec::zero(), default_ladder(), f);
  const auto rep = boundary_report(lim, PotentialSpec::zero(), f,
                                   {Domain::disk, 0.0});
  CHECK(rep.g == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(rep.quotient.limit.value == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(rep.kernel.value == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(rep.classical_exists);
  CHECK(rep.representation_holds);
  CHECK(rep.hopf_positive);
}

TEST_CASE("richardson extrapolation strips two error orders") {
  std::vector<double> q;
  for (double e : {0.2, 0.1, 0.05, 0.025})
    q.push_back(3.0 + 2.0 * e + 5.0 * e * e);
  const auto r = richardson_ratio2(q);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.stages == 2);
}

TEST_CASE("aitken limit of a geometric tail") {
  std::vector<double> s;
  for (int n = 0; n < 8; ++n) s.push_back(7.0 + 0.3 * std::pow(0.6, n));
  const auto a = aitken_limit(s);
  CHECK(a.value == doctest::Approx(7.0).epsilon(1e-10));
  CHECK(a.monotone);

  const auto flat = aitken_limit({4.0, 4.0, 4.0});
  CHECK(flat.value == doctest::Approx(4.0));

  const auto osc = aitken_limit({1.0, 2.0, 1.5, 1.75, 1.625});
  CHECK_FALSE(osc.monotone);
}

}  // TEST_SUITE
