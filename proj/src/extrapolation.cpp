#include "hopf/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hopf {

namespace {
bool is_monotone(const std::vector<double>& s) {
  bool up = true, down = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    up = up && s[i] >= s[i - 1] - 1e-15;
    down = down && s[i] <= s[i - 1] + 1e-15;
  }
  return up || down;
}
}  // namespace

Extrapolated richardson_ratio2(const std::vector<double>& q) {
  if (q.empty()) throw std::invalid_argument("empty quotient sequence");
  Extrapolated out;
  out.monotone = is_monotone(q);
  if (q.size() == 1) {
    out.value = q[0];
    out.error = std::numeric_limits<double>::infinity();
    return out;
  }
  // stage 1 removes the O(eps) term: r[j] = 2 q[j+1] - q[j]
  std::vector<double> r1(q.size() - 1);
  for (std::size_t j = 0; j + 1 < q.size(); ++j) r1[j] = 2.0 * q[j + 1] - q[j];
  out.value = r1.back();
  out.error = std::fabs(r1.back() - q.back());
  out.stages = 1;
  if (r1.size() == 1) return out;
  // stage 2 removes O(eps^2)
  std::vector<double> r2(r1.size() - 1);
  for (std::size_t j = 0; j + 1 < r1.size(); ++j)
    r2[j] = (4.0 * r1[j + 1] - r1[j]) / 3.0;
  out.error = std::fabs(r2.back() - r1.back());
  out.value = r2.back();
  out.stages = 2;
  return out;
}

Extrapolated aitken_limit(const std::vector<double>& s, int max_stages) {
  if (s.empty()) throw std::invalid_argument("empty ladder sequence");
  Extrapolated out;
  out.monotone = is_monotone(s);
  out.value = s.back();
  out.error = s.size() >= 2 ? std::fabs(s.back() - s[s.size() - 2])
                            : std::numeric_limits<double>::infinity();

  std::vector<double> cur = s;
  for (int stage = 1; stage <= max_stages && cur.size() >= 3; ++stage) {
    double scale = 0.0;
    for (double v : cur) scale = std::max(scale, std::fabs(v));
    std::vector<double> next(cur.size() - 2);
    for (std::size_t i = 0; i + 2 < cur.size(); ++i) {
      const double d1 = cur[i + 1] - cur[i];
      const double d2 = cur[i + 2] - cur[i + 1];
      const double dd = d2 - d1;
      if (std::fabs(dd) < 1e-13 * scale + 1e-300) {
        // already settled at this depth, nothing to accelerate
        next[i] = cur[i + 2];
      } else {
        next[i] = cur[i + 2] - d2 * d2 / dd;
      }
    }
    const double prev = out.value;
    out.value = next.back();
    out.error = std::fabs(out.value - prev);
    out.stages = stage;
    cur = std::move(next);
  }
  return out;
}

}  // namespace hopf
