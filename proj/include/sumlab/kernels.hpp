#pragma once
// Vector kernels used by the hot loops: simplex pivots (axpy), grid sweeps
// (dot / weighted power sums), and sequence-norm reductions.  Scalar
// reference implementations always exist; an AVX2+FMA variant is compiled
// on x86-64 and selected at runtime when the CPU supports it.  The two
// backends are equivalence-tested against each other, and tests may pin a
// backend explicitly via set_backend.
#include <cstddef>

namespace sumlab::kernels {

enum class Backend { autodetect, scalar, avx2 };

// Selects the active backend.  autodetect probes the CPU; requesting avx2
// on hardware without it throws.  Not thread-safe; call before computing.
void set_backend(Backend b);
const char* backend_name();
bool avx2_available();

double dot(const double* a, const double* b, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_abs(const double* a, std::size_t n);
double sum_sq(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
// sum_i |a_i|^p.  Vectorized fast paths exist for p in {1, 1.5, 2, 3, 4};
// other p fall back to scalar pow regardless of backend.
double sum_abs_pow(const double* a, std::size_t n, double p);
// sum_i w_i * |a_i|^p with w_i >= 0.
double weighted_abs_pow(const double* w, const double* a, std::size_t n, double p);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_abs(const double* a, std::size_t n);
double sum_sq(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
double sum_abs_pow(const double* a, std::size_t n, double p);
double weighted_abs_pow(const double* w, const double* a, std::size_t n, double p);
}  // namespace scalar

#if defined(SUMLAB_BUILD_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum_abs(const double* a, std::size_t n);
double sum_sq(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
double sum_abs_pow(const double* a, std::size_t n, double p);
double weighted_abs_pow(const double* w, const double* a, std::size_t n, double p);
}  // namespace avx2
#endif

}  // namespace sumlab::kernels
