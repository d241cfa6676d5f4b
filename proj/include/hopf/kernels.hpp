#pragma once

// Vector kernels used by the linear solvers and quadrature accumulators.
// Every kernel has a scalar reference implementation and, on x86, an AVX2
// variant. The backend is picked once at startup from cpuid; tests pin it
// explicitly to compare the two against each other.

#include <cstddef>
#include <string>

namespace hopf::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool avx2_available();
// Switch backends at runtime. Requesting avx2 on a machine without it is an
// error. Returns the backend actually in effect.
Backend use_backend(Backend b);
std::string backend_name(Backend b);

// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
// y = x + b*y
void xpby(const double* x, double b, double* y, std::size_t n);
// out += a[i]*x[i], the accumulate step of banded matrix applies
void fmadd(const double* a, const double* x, double* out, std::size_t n);
// out = a[i]*x[i]
void hadamard(const double* a, const double* x, double* out, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
// sum of w[i]*x[i]*y[i]
double dot3(const double* w, const double* x, const double* y, std::size_t n);
// sum of w[i]*|x[i]|
double weighted_abs_sum(const double* w, const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

// Table of implementations, one entry per kernel. The dispatcher swaps the
// whole table so a backend is always used consistently.
struct KernelTable {
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*xpby)(const double*, double, double*, std::size_t);
  void (*fmadd)(const double*, const double*, double*, std::size_t);
  void (*hadamard)(const double*, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  double (*weighted_abs_sum)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
};

const KernelTable& scalar_table();
#if defined(HOPF_HAVE_AVX2_TU)
const KernelTable& avx2_table();
#endif

}  // namespace hopf::kernels
