#pragma once

// Source terms f for the Dirichlet solves. On the interval the coordinate is
// x; on the disk every source is radial and the coordinate is r. Table
// sources are piecewise constant on uniform cells, matching the tabulated
// potential convention.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopf/geometry.hpp"

namespace hopf {

enum class SourceKind { zero, one, coordinate, sine_bump, indicator, table };

struct SourceSpec {
  SourceKind kind = SourceKind::one;
  double left = 0.0;   // indicator support
  double right = 1.0;
  std::vector<double> samples;

  static SourceSpec zero() { return {SourceKind::zero, 0, 1, {}}; }
  static SourceSpec one() { return {SourceKind::one, 0, 1, {}}; }
  static SourceSpec coordinate() { return {SourceKind::coordinate, 0, 1, {}}; }
  static SourceSpec sine_bump() { return {SourceKind::sine_bump, 0, 1, {}}; }
  static SourceSpec indicator(double l, double r) {
    if (!(0.0 <= l && l < r && r <= 1.0))
      throw std::invalid_argument("indicator source needs 0 <= l < r <= 1");
    return {SourceKind::indicator, l, r, {}};
  }
  static SourceSpec table(std::vector<double> s) {
    if (s.empty()) throw std::invalid_argument("table source needs samples");
    for (double v : s)
      if (!std::isfinite(v))
        throw std::invalid_argument("table source has a nonfinite sample");
    SourceSpec out{SourceKind::table, 0, 1, std::move(s)};
    return out;
  }

  double eval(double s) const {
    switch (kind) {
      case SourceKind::zero: return 0.0;
      case SourceKind::one: return 1.0;
      case SourceKind::coordinate: return s;
      case SourceKind::sine_bump:
        return 1.0 + 0.5 * std::sin(2.0 * M_PI * s);
      case SourceKind::indicator: return (s >= left && s <= right) ? 1.0 : 0.0;
      case SourceKind::table: {
        const auto n = samples.size();
        auto i = static_cast<std::size_t>(s * static_cast<double>(n));
        if (i >= n) i = n - 1;
        return samples[i];
      }
    }
    return 0.0;
  }

  double sup() const {
    switch (kind) {
      case SourceKind::zero: return 0.0;
      case SourceKind::one: return 1.0;
      case SourceKind::coordinate: return 1.0;
      case SourceKind::sine_bump: return 1.5;
      case SourceKind::indicator: return 1.0;
      case SourceKind::table: {
        double m = 0.0;
        for (double v : samples) m = std::max(m, std::fabs(v));
        return m;
      }
    }
    return 0.0;
  }

  // coordinates where the source jumps; integration and quadrature split here
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    if (kind == SourceKind::indicator) {
      b = {left, right};
    } else if (kind == SourceKind::table) {
      const auto n = samples.size();
      for (std::size_t j = 1; j < n; ++j)
        b.push_back(static_cast<double>(j) / static_cast<double>(n));
    }
    return b;
  }

  std::string describe() const {
    switch (kind) {
      case SourceKind::zero: return "0";
      case SourceKind::one: return "1";
      case SourceKind::coordinate: return "x";
      case SourceKind::sine_bump: return "1+sin(2*pi*x)/2";
      case SourceKind::indicator:
        return "indicator(" + std::to_string(left) + "," +
               std::to_string(right) + ")";
      case SourceKind::table:
        return "table[" + std::to_string(samples.size()) + "]";
    }
    return "?";
  }
};

}  // namespace hopf
