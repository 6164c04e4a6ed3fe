#pragma once
// Dense two-phase primal simplex for the measure-fitting and cutting-plane
// subproblems.  Sizes here are a few hundred rows by a couple thousand
// columns, dense by nature (grid atoms against witnesses), which is why a
// dense tableau beats pulling in a sparse LP library.  Bland's rule keeps
// the iteration finite on the degenerate fits.
#include <vector>

namespace sumlab {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* lp_status_name(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::optimal;
  std::vector<double> x;     // primal solution, length n
  double objective = 0.0;    // c . x
  // Row multipliers y with b.y = objective at optimality and y <= 0
  // componentwise (shadow prices of <= rows in a minimization).
  std::vector<double> dual;
};

// minimize c.x  subject to  A x <= b,  x >= 0.
// A is row-major, rows.size() == b.size(), each row length == c.size().
LpResult lp_min(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                const std::vector<double>& b);

}  // namespace sumlab
