#include "hopf/kernels.hpp"

#include <stdexcept>

namespace hopf::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(HOPF_HAVE_AVX2_TU) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* g_table = nullptr;
Backend g_backend = Backend::scalar;

void init_once() {
  if (g_table) return;
#if defined(HOPF_HAVE_AVX2_TU)
  if (cpu_has_avx2()) {
    g_table = &avx2_table();
    g_backend = Backend::avx2;
    return;
  }
#endif
  g_table = &scalar_table();
  g_backend = Backend::scalar;
}

inline const KernelTable& tab() {
  init_once();
  return *g_table;
}

}  // namespace

Backend active_backend() {
  init_once();
  return g_backend;
}

bool avx2_available() { return cpu_has_avx2(); }

Backend use_backend(Backend b) {
  init_once();
  if (b == Backend::avx2) {
#if defined(HOPF_HAVE_AVX2_TU)
    if (!cpu_has_avx2())
      throw std::runtime_error("avx2 backend requested but cpu lacks avx2/fma");
    g_table = &avx2_table();
    g_backend = Backend::avx2;
#else
    throw std::runtime_error("avx2 backend not compiled in");
#endif
  } else {
    g_table = &scalar_table();
    g_backend = Backend::scalar;
  }
  return g_backend;
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  tab().axpy(a, x, y, n);
}
void xpby(const double* x, double b, double* y, std::size_t n) {
  tab().xpby(x, b, y, n);
}
void fmadd(const double* a, const double* x, double* out, std::size_t n) {
  tab().fmadd(a, x, out, n);
}
void hadamard(const double* a, const double* x, double* out, std::size_t n) {
  tab().hadamard(a, x, out, n);
}
double dot(const double* x, const double* y, std::size_t n) {
  return tab().dot(x, y, n);
}
double dot3(const double* w, const double* x, const double* y, std::size_t n) {
  return tab().dot3(w, x, y, n);
}
double weighted_abs_sum(const double* w, const double* x, std::size_t n) {
  return tab().weighted_abs_sum(w, x, n);
}
double max_abs(const double* x, std::size_t n) { return tab().max_abs(x, n); }

}  // namespace hopf::kernels
