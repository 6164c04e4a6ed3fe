#include "sumlab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "sumlab/exponent.hpp"

namespace sumlab {

namespace {

// One cyclic Jacobi pass over all (p, q) pairs; returns remaining off-diagonal mass.
// v, when non-null, accumulates the rotations (row-major n x n).
double jacobi_sweep(std::vector<double>& a, int n, std::vector<double>* v) {
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      double apq = a[p * n + q];
      if (std::fabs(apq) < 1e-300) continue;
      double app = a[p * n + p], aqq = a[q * n + q];
      double theta = 0.5 * (aqq - app) / apq;
      double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
      double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
      for (int k = 0; k < n; ++k) {
        double akp = a[k * n + p], akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
      }
      for (int k = 0; k < n; ++k) {
        double apk = a[p * n + k], aqk = a[q * n + k];
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
      }
      if (v) {
        for (int k = 0; k < n; ++k) {
          double vkp = (*v)[k * n + p], vkq = (*v)[k * n + q];
          (*v)[k * n + p] = c * vkp - s * vkq;
          (*v)[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  double off = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
  return off;
}

void jacobi(std::vector<double>& a, int n, std::vector<double>* v) {
  if (v) {
    v->assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) (*v)[i * n + i] = 1.0;
  }
  double scale = 0.0;
  for (double x : a) scale += x * x;
  if (scale == 0.0) return;
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (jacobi_sweep(a, n, v) <= 1e-30 * scale) return;
  }
  // 60 sweeps is far beyond what n <= 8 needs; treat as a hard failure.
  throw numeric_error("jacobi eigensolver failed to converge");
}

}  // namespace

std::vector<double> sym_eigenvalues(std::vector<double> a, int n) {
  jacobi(a, n, nullptr);
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a[i * n + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

double sym_eig_max(const std::vector<double>& a, int n, std::vector<double>* evec) {
  std::vector<double> w = a;
  std::vector<double> v;
  jacobi(w, n, evec ? &v : nullptr);
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (w[i * n + i] > w[best * n + best]) best = i;
  if (evec) {
    evec->resize(n);
    for (int k = 0; k < n; ++k) (*evec)[k] = v[k * n + best];
  }
  return w[best * n + best];
}

double top_singular_value(const std::vector<double>& a, int m, int n,
                          std::vector<double>* right_vec) {
  // Gram matrix A^T A is n x n; callers keep n small.
  std::vector<double> g(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += a[k * n + i] * a[k * n + j];
      g[i * n + j] = g[j * n + i] = s;
    }
  double lam = sym_eig_max(g, n, right_vec);
  return std::sqrt(std::max(0.0, lam));
}

double trace_norm(const std::vector<double>& a, int m, int n) {
  std::vector<double> g(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += a[k * n + i] * a[k * n + j];
      g[i * n + j] = g[j * n + i] = s;
    }
  double t = 0.0;
  for (double lam : sym_eigenvalues(std::move(g), n)) t += std::sqrt(std::max(0.0, lam));
  return t;
}

}  // namespace sumlab
