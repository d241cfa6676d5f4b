#include "hopf/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace hopf::oracle {
namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;  // (u, u')

constexpr double kInf = std::numeric_limits<double>::infinity();

// Local behavior of the potential next to one wall. side 0 is x = 0; side 1
// is x = 1 or the disk rim.
struct WallSide {
  bool singular = false;  // untruncated power blowup at this wall
  double C = 0.0;
  double alpha = 0.0;
  double v0 = 0.0;    // wall value when bounded
  double layer = kInf;  // distance where a truncated power law bends
};

WallSide classify_wall(const Problem& pb, int side) {
  WallSide w;
  const auto& v = pb.potential;
  if (v.kind == PotentialKind::power_law && v.alpha > 0.0) {
    bool touches = true;
    if (pb.domain == Domain::interval) {
      if (v.anchor == PowerAnchor::left) touches = side == 0;
      if (v.anchor == PowerAnchor::right) touches = side == 1;
    }
    if (touches) {
      if (pb.cutoff < kInf) {
        w.v0 = pb.cutoff;
        w.layer = std::pow(v.C / pb.cutoff, 1.0 / v.alpha);
      } else {
        w.singular = true;
        w.C = v.C;
        w.alpha = v.alpha;
      }
    } else {
      w.v0 = std::min(v.C, pb.cutoff);  // anchored to the far wall
    }
    return w;
  }
  Point p{0.0, 0.0};
  const double d = 1e-9;
  p.x = (pb.domain == Domain::interval && side == 0) ? d : 1.0 - d;
  w.v0 = evaluate_truncated(v, pb.cutoff, pb.domain, p);
  return w;
}

struct Cauchy {
  double value = 0.0;
  double slope = 0.0;
};

double start_offset(const WallSide& w) {
  if (!w.singular) return std::min(1e-8, w.layer / 2.0);
  if (w.alpha <= 2.0) return 1e-8;
  // supercritical: place the start where the decaying exponent is ~500
  const double nu = 0.5 * w.alpha - 1.0;
  const double budget = std::pow(std::sqrt(w.C) / (500.0 * nu), 1.0 / nu);
  return std::max(1e-8, budget);
}

// Series solution vanishing at the wall for V = C s^-alpha, alpha < 2:
// h = sum_m a_m s^(1 + m(2-alpha)), a_0 = 1. All terms are positive, so the
// sum is cancellation free.
Cauchy frobenius_vanishing(double C, double alpha, double delta) {
  const double gap = 2.0 - alpha;
  double a = 1.0;
  double value = delta;
  double slope = 1.0;
  for (int m = 1; m <= 400; ++m) {
    const double e = static_cast<double>(m) * gap;
    a *= C / (e * (e + 1.0));
    const double t = a * std::pow(delta, e + 1.0);
    value += t;
    slope += a * (e + 1.0) * std::pow(delta, e);
    if (m >= 4 && t < 1e-17 * value) return {value, slope};
  }
  throw std::runtime_error("reference wall series did not settle");
}

Cauchy wkb_vanishing(double C, double alpha, double delta) {
  const double nu = 0.5 * alpha - 1.0;
  const double sc = std::sqrt(C);
  const double lnv =
      -(sc / nu) * std::pow(delta, -nu) + 0.25 * alpha * std::log(delta);
  const double v = std::exp(lnv);
  const double logslope =
      sc * std::pow(delta, -0.5 * alpha) + 0.25 * alpha / delta;
  return {v, v * logslope};
}

Cauchy vanishing_start(const WallSide& w, double delta, bool disk_wall) {
  Cauchy c;
  if (!w.singular) {
    if (w.v0 == 0.0) {
      c = {delta, 1.0};
    } else {
      const double s = std::sqrt(w.v0);
      c = {std::sinh(s * delta) / s, std::cosh(s * delta)};
    }
  } else if (w.alpha < 2.0) {
    c = frobenius_vanishing(w.C, w.alpha, delta);
  } else if (w.alpha == 2.0) {
    const double beta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * w.C));
    c = {std::pow(delta, beta), beta * std::pow(delta, beta - 1.0)};
  } else {
    c = wkb_vanishing(w.C, w.alpha, delta);
  }
  if (disk_wall) {
    // curvature drift u_tt = u_t/(1-t) + ... adds t^2/2 to the leading t
    c.value += 0.5 * delta * delta;
    c.slope += delta;
  }
  return c;
}

// slope of the vanishing solution right at the wall; zero past the
// quadratic-blowup threshold
double wall_slope(const WallSide& w) {
  return (w.singular && w.alpha >= 2.0) ? 0.0 : 1.0;
}

struct Coeff {
  std::function<double(double)> V;
  std::function<double(double)> f;
  bool disk_wall = false;
  bool disk_center = false;
};

struct Rhs {
  const Coeff* c;
  bool homogeneous;  // drop the source: the h run solves u'' = V u only
  // The coefficients are sampled strictly inside the current leg. Stage
  // points land exactly on the shared endpoint of two legs, and a kink of V
  // or f there must resolve to this leg's one-sided limit, not the other
  // side's. The mirrored side computes kink positions as 1 - x, which can
  // land an ulp away from where the composed coefficient t -> c(1 - t)
  // actually flips, so the pullback has to clear a few ulps. Keeping it
  // proportional to the endpoint leaves wall-layer coefficients unchanged
  // to about 1e-13 relative, below the stepper tolerance.
  double lo, hi;
  void operator()(const State& y, State& dy, double s) const {
    if (s >= hi) s = hi - 1e-13 * hi;
    else if (s <= lo) s = lo + 1e-13 * lo;
    double drift = 0.0;
    if (c->disk_wall) drift = y[1] / (1.0 - s);
    else if (c->disk_center) drift = -y[1] / s;
    dy[0] = y[1];
    dy[1] = c->V(s) * y[0] + drift;
    if (!homogeneous) dy[1] -= c->f(s);
  }
};

void advance(const Coeff& c, bool homogeneous, State& y, double s0, double s1,
             const std::vector<double>& kinks) {
  if (s1 <= s0) return;
  auto stepper = ode::make_controlled(1e-30, 1e-13,
                                      ode::runge_kutta_fehlberg78<State>());
  double cur = s0;
  auto leg = [&](double to) {
    const double dt0 = std::min((to - cur) * 1e-3, std::max(cur * 0.05, 1e-12));
    Rhs rhs{&c, homogeneous, cur, to};
    ode::integrate_adaptive(stepper, rhs, y, cur, to, dt0);
    cur = to;
  };
  for (double k : kinks) {
    if (k <= cur + 1e-15 || k >= s1 - 1e-15) continue;
    leg(k);
  }
  leg(s1);
}

struct Station {
  double s = 0.0;
  std::size_t slot = 0;
};

struct SideRun {
  State h{0.0, 0.0};
  State p{0.0, 0.0};
  std::vector<State> h_at, p_at;  // per station
};

SideRun run_side(const Coeff& c, const Cauchy& h0, const State& p0,
                 double s_start, double s_match,
                 const std::vector<Station>& stations,
                 const std::vector<double>& kinks) {
  SideRun r;
  State h{h0.value, h0.slope};
  State p = p0;
  double cur = s_start;
  for (const auto& st : stations) {
    advance(c, true, h, cur, st.s, kinks);
    advance(c, false, p, cur, st.s, kinks);
    r.h_at.push_back(h);
    r.p_at.push_back(p);
    cur = st.s;
  }
  advance(c, true, h, cur, s_match, kinks);
  advance(c, false, p, cur, s_match, kinks);
  r.h = h;
  r.p = p;
  return r;
}

// potential and source kinks, mapped into one side's coordinate in (0, 1/2)
std::vector<double> side_kinks(const Problem& pb, int side) {
  std::vector<double> xs;
  const auto& v = pb.potential;
  if (v.kind == PotentialKind::power_law && v.alpha > 0.0 &&
      pb.cutoff < kInf) {
    const double dk = std::pow(v.C / pb.cutoff, 1.0 / v.alpha);
    if (pb.domain == Domain::interval) {
      if (v.anchor == PowerAnchor::boundary) {
        if (dk < 0.5) {
          xs.push_back(dk);
          xs.push_back(1.0 - dk);
        }
      } else if (v.anchor == PowerAnchor::left) {
        if (dk < 1.0) xs.push_back(dk);
      } else if (dk < 1.0) {
        xs.push_back(1.0 - dk);
      }
    } else if (dk < 1.0) {
      xs.push_back(1.0 - dk);
    }
  }
  if (v.kind == PotentialKind::tabulated) {
    const auto n = v.samples.size();
    for (std::size_t j = 1; j < n; ++j)
      xs.push_back(static_cast<double>(j) / static_cast<double>(n));
  }
  for (double b : pb.source.breakpoints()) xs.push_back(b);
  std::vector<double> out;
  for (double x : xs) {
    const double s = side == 0 ? x : 1.0 - x;
    if (s > 0.0 && s < 0.5) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Reference solve(const Problem& pb, const std::vector<double>& probes) {
  const bool disk = pb.domain == Domain::disk;
  if (disk && pb.potential.kind == PotentialKind::power_law &&
      pb.potential.anchor != PowerAnchor::boundary)
    throw std::invalid_argument(
        "disk potentials must be anchored to the boundary");
  if (disk && !(pb.cutoff < kInf) &&
      pb.potential.kind == PotentialKind::power_law &&
      pb.potential.alpha > 1.6)
    throw std::invalid_argument(
        "radial reference supports untruncated power laws up to alpha = 1.6");

  // Past the quadratic threshold the particular run would have to shoot
  // through a wall layer whose growing mode wipes out all precision. Both
  // inward derivatives vanish there, and that is all the reference can say.
  if (!disk && !(pb.cutoff < kInf) &&
      pb.potential.kind == PotentialKind::power_law &&
      pb.potential.alpha > 2.0) {
    if (!probes.empty() || pb.potential.anchor != PowerAnchor::boundary)
      throw std::invalid_argument(
          "supercritical walls are outside the reference envelope; "
          "use a truncation ladder");
    Reference out;
    return out;
  }
  // At alpha = 2 the particular run grows like x^beta; keep the matching
  // cancellation within ~5 digits of headroom.
  if (!disk && !(pb.cutoff < kInf) &&
      pb.potential.kind == PotentialKind::power_law &&
      pb.potential.alpha == 2.0 && pb.potential.C > 7.0)
    throw std::invalid_argument(
        "quadratic wall strength above C = 7 is outside the reference "
        "envelope");

  const double m = 0.5;
  std::vector<Station> left, right;
  std::vector<std::size_t> center_slots;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double x = probes[i];
    if (disk && x == 0.0) {
      center_slots.push_back(i);
      continue;
    }
    if (x < 1e-6 || x > 1.0 - 1e-6)
      throw std::invalid_argument("probe outside the solvable window");
    if (x <= m) left.push_back({x, i});
    else right.push_back({1.0 - x, i});
  }
  auto by_s = [](const Station& a, const Station& b) { return a.s < b.s; };
  std::sort(left.begin(), left.end(), by_s);
  std::sort(right.begin(), right.end(), by_s);

  Coeff cl, cr;
  cl.V = [&pb](double s) {
    return evaluate_truncated(pb.potential, pb.cutoff, pb.domain,
                              {s, 0.0});
  };
  cl.f = [&pb](double s) { return pb.source.eval(s); };
  cl.disk_center = disk;
  cr.V = [&pb](double t) {
    return evaluate_truncated(pb.potential, pb.cutoff, pb.domain,
                              {1.0 - t, 0.0});
  };
  cr.f = [&pb](double t) { return pb.source.eval(1.0 - t); };
  cr.disk_wall = disk;

  // left (or center) start
  Cauchy h0;
  State p0{0.0, 0.0};
  double delta0;
  WallSide w0;
  if (disk) {
    delta0 = 1e-6;
    const double vc = cl.V(delta0 / 2.0);
    const double fc = cl.f(delta0 / 2.0);
    h0 = {1.0 + vc * delta0 * delta0 / 4.0, vc * delta0 / 2.0};
    p0 = {-fc * delta0 * delta0 / 4.0, -fc * delta0 / 2.0};
  } else {
    w0 = classify_wall(pb, 0);
    delta0 = start_offset(w0);
    h0 = vanishing_start(w0, delta0, false);
  }

  const WallSide w1 = classify_wall(pb, 1);
  const double delta1 = start_offset(w1);
  const Cauchy h1 = vanishing_start(w1, delta1, disk);

  // probes buried inside a supercritical start layer: the solution there is
  // below double precision, report plain zero
  std::vector<Station> live_left, live_right;
  std::vector<std::size_t> dead;
  for (const auto& st : left)
    (st.s < delta0 ? dead.push_back(st.slot) : live_left.push_back(st));
  for (const auto& st : right)
    (st.s < delta1 ? dead.push_back(st.slot) : live_right.push_back(st));

  const auto kinks_l = side_kinks(pb, 0);
  const auto kinks_r = side_kinks(pb, 1);
  const SideRun L = run_side(cl, h0, p0, delta0, m, live_left, kinks_l);
  const SideRun R = run_side(cr, h1, {0.0, 0.0}, delta1, 1.0 - m, live_right,
                             kinks_r);

  // match value and x-slope at m; the right run's slope flips sign
  const double det = L.h[0] * R.h[1] + L.h[1] * R.h[0];
  if (det == 0.0) throw std::runtime_error("reference matching degenerated");
  const double e = R.p[0] - L.p[0];
  const double f = -R.p[1] - L.p[1];
  const double a = (e * R.h[1] + R.h[0] * f) / det;
  const double b = (L.h[0] * f - L.h[1] * e) / det;

  Reference out;
  out.values.assign(probes.size(), 0.0);
  for (std::size_t j = 0; j < live_left.size(); ++j)
    out.values[live_left[j].slot] = a * L.h_at[j][0] + L.p_at[j][0];
  for (std::size_t j = 0; j < live_right.size(); ++j)
    out.values[live_right[j].slot] = b * R.h_at[j][0] + R.p_at[j][0];
  for (std::size_t slot : center_slots) out.values[slot] = a;
  for (std::size_t slot : dead) out.values[slot] = 0.0;

  if (!disk) {
    const double s0 = wall_slope(w0);
    out.inward0 = s0 == 0.0 ? 0.0 : a * s0 + cl.f(0.0) * delta0;
  }
  const double s1 = wall_slope(w1);
  out.inward1 = s1 == 0.0 ? 0.0 : b * s1 + cr.f(0.0) * delta1;
  return out;
}

LadderReference truncation_limit(const Problem& pb,
                                 const TruncationLadder& ladder, int end) {
  LadderReference out;
  out.derivatives.reserve(ladder.cutoffs.size());
  for (double k : ladder.cutoffs) {
    Problem q = pb;
    q.cutoff = std::min(pb.cutoff, k);
    const Reference r = solve(q, {});
    const bool left_end = pb.domain == Domain::interval && end == 0;
    out.derivatives.push_back(left_end ? r.inward0 : r.inward1);
  }
  out.limit = aitken_limit(out.derivatives, 2);
  return out;
}

}  // namespace hopf::oracle
