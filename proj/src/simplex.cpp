#include "sumlab/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "sumlab/exponent.hpp"
#include "sumlab/kernels.hpp"

namespace sumlab {

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

namespace {

constexpr double kReducedCostEps = 1e-9;
constexpr double kPivotEps = 1e-10;

struct Tableau {
  int rows = 0;   // constraint rows
  int width = 0;  // columns incl. rhs
  std::vector<double> t;  // (rows + 1) x width, last row = reduced costs
  std::vector<int> basis;

  double* row(int i) { return t.data() + static_cast<size_t>(i) * width; }
  double& at(int i, int j) { return t[static_cast<size_t>(i) * width + j]; }
  double rhs(int i) const { return t[static_cast<size_t>(i) * width + width - 1]; }

  void pivot(int r, int col) {
    double* pr = row(r);
    double inv = 1.0 / pr[col];
    for (int j = 0; j < width; ++j) pr[j] *= inv;
    pr[col] = 1.0;  // kill roundoff on the pivot itself
    for (int i = 0; i <= rows; ++i) {
      if (i == r) continue;
      double f = at(i, col);
      if (f != 0.0) {
        kernels::axpy(-f, pr, row(i), width);
        at(i, col) = 0.0;
      }
    }
    basis[r] = col;
  }
};

// Runs Bland pivoting on the current cost row.  allow(col) gates entering
// columns (used to fence off artificials in phase 2).
template <typename Allow>
LpStatus optimize(Tableau& tb, long max_iters, const Allow& allow) {
  const int m = tb.rows;
  const int ncols = tb.width - 1;
  for (long it = 0; it < max_iters; ++it) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (allow(j) && tb.at(m, j) < -kReducedCostEps) {
        enter = j;
        break;  // Bland: first eligible index
      }
    }
    if (enter < 0) return LpStatus::optimal;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double a = tb.at(i, enter);
      if (a > kPivotEps) {
        double ratio = tb.rhs(i) / a;
        if (ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && (leave < 0 || tb.basis[i] < tb.basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return LpStatus::unbounded;
    tb.pivot(leave, enter);
  }
  return LpStatus::iteration_limit;
}

}  // namespace

LpResult lp_min(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                const std::vector<double>& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(A.size());
  if (static_cast<int>(b.size()) != m) throw input_error("lp_min: |b| != rows of A");
  for (const auto& r : A)
    if (static_cast<int>(r.size()) != n) throw input_error("lp_min: ragged constraint matrix");

  // Slack per row; artificial per row whose rhs is negative after adding the
  // slack (those rows get negated so every tableau rhs is >= 0).
  std::vector<int> art_of_row(m, -1);
  int nart = 0;
  for (int i = 0; i < m; ++i)
    if (b[i] < 0.0) art_of_row[i] = nart++;

  Tableau tb;
  tb.rows = m;
  tb.width = n + m + nart + 1;
  tb.t.assign(static_cast<size_t>(m + 1) * tb.width, 0.0);
  tb.basis.assign(m, -1);

  double bscale = 1.0;
  for (int i = 0; i < m; ++i) bscale = std::max(bscale, std::fabs(b[i]));

  for (int i = 0; i < m; ++i) {
    double sgn = art_of_row[i] >= 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tb.at(i, j) = sgn * A[i][j];
    tb.at(i, n + i) = sgn;  // slack
    tb.at(i, tb.width - 1) = sgn * b[i];
    if (art_of_row[i] >= 0) {
      tb.at(i, n + m + art_of_row[i]) = 1.0;
      tb.basis[i] = n + m + art_of_row[i];
    } else {
      tb.basis[i] = n + i;
    }
  }

  const long max_iters = 2000L + 60L * (m + n + nart);
  auto is_artificial = [&](int j) { return j >= n + m; };

  LpResult res;

  if (nart > 0) {
    // Phase 1: minimize the artificial sum.  Cost row = -(sum of rows with
    // an artificial basic) on non-artificial columns.
    for (int i = 0; i < m; ++i) {
      if (art_of_row[i] < 0) continue;
      kernels::axpy(-1.0, tb.row(i), tb.row(m), tb.width);
    }
    for (int j = n + m; j < tb.width - 1; ++j) tb.at(m, j) = 0.0;

    LpStatus st = optimize(tb, max_iters, [](int) { return true; });
    if (st == LpStatus::iteration_limit) {
      res.status = st;
      return res;
    }
    double art_sum = -tb.rhs(m);
    if (art_sum > 1e-7 * (1.0 + bscale)) {
      res.status = LpStatus::infeasible;
      return res;
    }
    // Pivot any artificial still basic (at value ~0) out on a real column;
    // rows that cannot be cleared are redundant and stay inert because
    // artificials are fenced off as entering columns below.
    for (int i = 0; i < m; ++i) {
      if (!is_artificial(tb.basis[i])) continue;
      for (int j = 0; j < n + m; ++j) {
        if (std::fabs(tb.at(i, j)) > 1e-8) {
          tb.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 cost row from the original objective.
  for (int j = 0; j < tb.width; ++j) tb.at(m, j) = 0.0;
  for (int j = 0; j < n; ++j) tb.at(m, j) = c[j];
  for (int i = 0; i < m; ++i) {
    int bj = tb.basis[i];
    double cb = bj < n ? c[bj] : 0.0;
    if (cb != 0.0) kernels::axpy(-cb, tb.row(i), tb.row(m), tb.width);
  }

  LpStatus st = optimize(tb, max_iters, [&](int j) { return !is_artificial(j); });
  res.status = st;
  if (st != LpStatus::optimal) return res;

  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < n) res.x[tb.basis[i]] = tb.rhs(i);
  res.objective = kernels::dot(c.data(), res.x.data(), n);
  // y_i = -(reduced cost of slack i); the row negation for artificial rows
  // cancels out of this formula.
  res.dual.assign(m, 0.0);
  for (int i = 0; i < m; ++i) res.dual[i] = -tb.at(m, n + i);
  return res;
}

}  // namespace sumlab
