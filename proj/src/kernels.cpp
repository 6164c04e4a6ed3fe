#include "sumlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace sumlab::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_abs(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::fabs(a[i]);
    if (v > m) m = v;
  }
  return m;
}

double sum_abs_pow(const double* a, std::size_t n, double p) {
  if (p == 1.0) return sum_abs(a, n);
  if (p == 2.0) return sum_sq(a, n);
  double s = 0.0;
  if (p == 1.5) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = std::fabs(a[i]);
      s += v * std::sqrt(v);
    }
  } else if (p == 3.0) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = std::fabs(a[i]);
      s += v * v * v;
    }
  } else if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = a[i] * a[i];
      s += v * v;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(a[i]), p);
  }
  return s;
}

double weighted_abs_pow(const double* w, const double* a, std::size_t n, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::fabs(a[i]);
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * a[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::fabs(a[i]), p);
  }
  return s;
}

}  // namespace scalar

namespace {

struct Vtbl {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  double (*sum_abs_pow)(const double*, std::size_t, double);
  double (*weighted_abs_pow)(const double*, const double*, std::size_t, double);
};

constexpr Vtbl kScalar{scalar::dot,     scalar::axpy,        scalar::sum_abs,
                       scalar::sum_sq,  scalar::max_abs,     scalar::sum_abs_pow,
                       scalar::weighted_abs_pow};

#if defined(SUMLAB_BUILD_AVX2)
constexpr Vtbl kAvx2{avx2::dot,    avx2::axpy,    avx2::sum_abs,     avx2::sum_sq,
                     avx2::max_abs, avx2::sum_abs_pow, avx2::weighted_abs_pow};
#endif

const char* g_name = nullptr;
Vtbl g_vtbl;  // set by init_default / set_backend

void use_scalar() {
  g_vtbl = kScalar;
  g_name = "scalar";
}

#if defined(SUMLAB_BUILD_AVX2)
void use_avx2() {
  g_vtbl = kAvx2;
  g_name = "avx2";
}
#endif

const Vtbl& active() {
  if (g_name == nullptr) set_backend(Backend::autodetect);
  return g_vtbl;
}

}  // namespace

bool avx2_available() {
#if defined(SUMLAB_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void set_backend(Backend b) {
  switch (b) {
    case Backend::scalar:
      use_scalar();
      return;
    case Backend::avx2:
#if defined(SUMLAB_BUILD_AVX2)
      if (avx2_available()) {
        use_avx2();
        return;
      }
#endif
      throw std::runtime_error("avx2 backend requested but not available");
    case Backend::autodetect:
#if defined(SUMLAB_BUILD_AVX2)
      if (avx2_available()) {
        use_avx2();
        return;
      }
#endif
      use_scalar();
      return;
  }
}

const char* backend_name() {
  active();
  return g_name;
}

double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
double sum_abs(const double* a, std::size_t n) { return active().sum_abs(a, n); }
double sum_sq(const double* a, std::size_t n) { return active().sum_sq(a, n); }
double max_abs(const double* a, std::size_t n) { return active().max_abs(a, n); }
double sum_abs_pow(const double* a, std::size_t n, double p) { return active().sum_abs_pow(a, n, p); }
double weighted_abs_pow(const double* w, const double* a, std::size_t n, double p) {
  return active().weighted_abs_pow(w, a, n, p);
}

}  // namespace sumlab::kernels
