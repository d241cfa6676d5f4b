// AVX2 kernel variants. This file is compiled with -mavx2 -mfma; nothing here
// runs unless the dispatcher saw avx2+fma in cpuid.

#include "hopf/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace hopf::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void v_axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_xpby(const double* x, double b, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(vb, vy, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void v_fmadd(const double* a, const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vo = _mm256_loadu_pd(out + i);
    vo = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i), vo);
    _mm256_storeu_pd(out + i, vo);
  }
  for (; i < n; ++i) out[i] += a[i] * x[i];
}

void v_hadamard(const double* a, const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * x[i];
}

double v_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return hsum(acc) + tail;
}

double v_dot3(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += w[i] * x[i] * y[i];
  return hsum(acc) + tail;
}

double v_weighted_abs_sum(const double* w, const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ax = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), ax, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += w[i] * std::fabs(x[i]);
  return hsum(acc) + tail;
}

double v_max_abs(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vm = _mm256_max_pd(vm, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
  }
  double m = 0.0;
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vm);
  for (double lane : lanes) m = std::max(m, lane);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{v_axpy, v_xpby,  v_fmadd,            v_hadamard,
                             v_dot,  v_dot3,  v_weighted_abs_sum, v_max_abs};
  return t;
}

}  // namespace hopf::kernels
