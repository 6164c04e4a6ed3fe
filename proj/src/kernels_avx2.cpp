// AVX2 + FMA variants.  This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here may be called unless the CPU reports both
// features.  Horizontal reductions keep 4 independent accumulators inside
// the loop and collapse once at the end, so results differ from the scalar
// backend only by reassociation (covered by the equivalence tests).
#include "sumlab/kernels.hpp"

#if defined(SUMLAB_BUILD_AVX2)

#include <immintrin.h>

#include <cmath>

namespace sumlab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_abs(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

double max_abs(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask));
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    double v = std::fabs(a[i]);
    if (v > m) m = v;
  }
  return m;
}

double sum_abs_pow(const double* a, std::size_t n, double p) {
  if (p == 1.0) return sum_abs(a, n);
  if (p == 2.0) return sum_sq(a, n);
  std::size_t i = 0;
  double s;
  if (p == 1.5) {
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask);
      acc = _mm256_fmadd_pd(v, _mm256_sqrt_pd(v), acc);
    }
    s = hsum(acc);
    for (; i < n; ++i) {
      double v = std::fabs(a[i]);
      s += v * std::sqrt(v);
    }
  } else if (p == 3.0) {
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), v, acc);
    }
    s = hsum(acc);
    for (; i < n; ++i) {
      double v = std::fabs(a[i]);
      s += v * v * v;
    }
  } else if (p == 4.0) {
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(a + i);
      __m256d v2 = _mm256_mul_pd(v, v);
      acc = _mm256_fmadd_pd(v2, v2, acc);
    }
    s = hsum(acc);
    for (; i < n; ++i) {
      double v = a[i] * a[i];
      s += v * v;
    }
  } else {
    // General p: pow has no AVX2 form here; match the scalar path exactly.
    return scalar::sum_abs_pow(a, n, p);
  }
  return s;
}

double weighted_abs_pow(const double* w, const double* a, std::size_t n, double p) {
  std::size_t i = 0;
  double s;
  if (p == 1.0) {
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), v, acc);
    }
    s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::fabs(a[i]);
  } else if (p == 2.0) {
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(a + i);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(v, v), acc);
    }
    s = hsum(acc);
    for (; i < n; ++i) s += w[i] * a[i] * a[i];
  } else {
    return scalar::weighted_abs_pow(w, a, n, p);
  }
  return s;
}

}  // namespace sumlab::kernels::avx2

#endif  // SUMLAB_BUILD_AVX2
