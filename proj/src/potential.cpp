#include "hopf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hopf {

PotentialSpec PotentialSpec::zero() { return {}; }

PotentialSpec PotentialSpec::constant(double value) {
  if (value < 0.0) throw std::invalid_argument("potential must be nonnegative");
  PotentialSpec v;
  v.kind = PotentialKind::constant;
  v.c = value;
  return v;
}

PotentialSpec PotentialSpec::power_law(double C, double alpha,
                                       PowerAnchor anchor) {
  if (C < 0.0) throw std::invalid_argument("potential must be nonnegative");
  PotentialSpec v;
  v.kind = PotentialKind::power_law;
  v.C = C;
  v.alpha = alpha;
  v.anchor = anchor;
  return v;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> samples) {
  if (samples.empty())
    throw std::invalid_argument("tabulated potential needs samples");
  for (double s : samples)
    if (s < 0.0 || !std::isfinite(s))
      throw std::invalid_argument("tabulated samples must be finite and >= 0");
  PotentialSpec v;
  v.kind = PotentialKind::tabulated;
  v.samples = std::move(samples);
  return v;
}

double PotentialSpec::sup() const {
  switch (kind) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::constant:
      return c;
    case PotentialKind::power_law:
      if (alpha <= 0.0) return C;  // degenerate, constant C on the closure
      return std::numeric_limits<double>::infinity();
    case PotentialKind::tabulated:
      return *std::max_element(samples.begin(), samples.end());
  }
  return 0.0;
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case PotentialKind::zero:
      os << "zero";
      break;
    case PotentialKind::constant:
      os << "constant(" << c << ")";
      break;
    case PotentialKind::power_law:
      os << C << "*d^-" << alpha;
      if (anchor == PowerAnchor::left) os << " (left end)";
      if (anchor == PowerAnchor::right) os << " (right end)";
      break;
    case PotentialKind::tabulated:
      os << "tabulated[" << samples.size() << "]";
      break;
  }
  return os.str();
}

namespace {

double anchored_distance(const PotentialSpec& v, Domain domain,
                         const Point& p) {
  if (v.anchor == PowerAnchor::boundary || domain == Domain::disk)
    return distance_to_boundary(domain, p);
  // one-sided anchors only make sense on the interval
  distance_to_boundary(domain, p);  // closure check
  return v.anchor == PowerAnchor::left ? std::max(p.x, 0.0)
                                       : std::max(1.0 - p.x, 0.0);
}

double radial_coordinate(Domain domain, const Point& p) {
  return domain == Domain::interval ? p.x : std::hypot(p.x, p.y);
}

}  // namespace

double evaluate(const PotentialSpec& v, Domain domain, const Point& p) {
  switch (v.kind) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::constant:
      return v.c;
    case PotentialKind::power_law: {
      if (v.alpha <= 0.0) return v.C;
      const double d = anchored_distance(v, domain, p);
      if (d <= 0.0)
        throw std::domain_error(
            "singular potential evaluated on the boundary");
      return v.C * std::pow(d, -v.alpha);
    }
    case PotentialKind::tabulated: {
      const double s = radial_coordinate(domain, p);
      const auto n = static_cast<long>(v.samples.size());
      auto cell = static_cast<long>(std::floor(s * n));
      cell = std::clamp(cell, 0L, n - 1);
      return v.samples[cell];
    }
  }
  return 0.0;
}

double evaluate_truncated(const PotentialSpec& v, double cutoff, Domain domain,
                          const Point& p) {
  if (cutoff <= 0.0) throw std::invalid_argument("cutoff must be positive");
  if (v.kind == PotentialKind::power_law && v.alpha > 0.0) {
    // avoid evaluating the singularity just to clip it afterwards
    const double d = anchored_distance(v, domain, p);
    if (d <= 0.0) return cutoff;
    return std::min(v.C * std::pow(d, -v.alpha), cutoff);
  }
  return std::min(evaluate(v, domain, p), cutoff);
}

std::vector<double> sample_truncated(const PotentialSpec& v, const Grid& g,
                                     double cutoff) {
  std::vector<double> out(g.num_nodes());
  if (g.domain == Domain::interval) {
    for (std::size_t i = 0; i < g.x.size(); ++i)
      out[i] = evaluate_truncated(v, cutoff, Domain::interval, {g.x[i], 0.0});
  } else {
    for (std::size_t j = 0; j < g.r.size(); ++j) {
      for (int m = 0; m < g.nphi; ++m) {
        const double phi = m * g.dphi;
        out[g.index(static_cast<int>(j), m)] = evaluate_truncated(
            v, cutoff, Domain::disk,
            {g.r[j] * std::cos(phi), g.r[j] * std::sin(phi)});
      }
    }
  }
  return out;
}

TruncationLadder default_ladder(double k0, double ratio, int levels,
                                double tau_stop) {
  if (levels < 1) throw std::invalid_argument("ladder needs at least 1 level");
  if (k0 <= 0.0 || ratio <= 1.0)
    throw std::invalid_argument("ladder needs k0 > 0 and ratio > 1");
  TruncationLadder ladder;
  ladder.tau_stop = tau_stop;
  ladder.cutoffs.resize(levels);
  double k = k0;
  for (int j = 0; j < levels; ++j, k *= ratio) ladder.cutoffs[j] = k;
  return ladder;
}

TruncationLadder ladder_ending_at(double k_max, double ratio, int levels,
                                  double tau_stop) {
  const double k0 = k_max / std::pow(ratio, levels - 1);
  return default_ladder(k0, ratio, levels, tau_stop);
}

}  // namespace hopf
