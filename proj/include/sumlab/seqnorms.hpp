#pragma once
// The three norms on finite vector sequences that everything else is
// measured against:
//
//   strong:  ( sum_i ||x_i||^p )^(1/p)
//   weak:    sup over unit psi in E' of ( sum_i |psi(x_i)|^p )^(1/p)
//   cohen:   sup over families (phi_i) in E' with weak_{p*} norm <= 1 of
//            sum_i |phi_i(x_i)|
//
// weak <= strong <= cohen always.  Exact evaluation routes exist for the
// polyhedral duals (vertex enumeration), the Euclidean p = 2 case
// (spectral), and p = inf; otherwise a monotone multistart ascent reports a
// lower bound.  The grid oracle produces independently certified lower
// bounds on small instances and is what the frozen test values come from.
#include <cstdint>
#include <vector>

#include "sumlab/spaces.hpp"

namespace sumlab {

struct VecSequence {
  SpaceSpec space;
  std::vector<Vec> items;
};

void validate(const VecSequence& seq);

enum class NormMethod { exact, extreme_enumeration, spectral, ascent, grid_oracle };

const char* norm_method_name(NormMethod m);

struct NormEstimate {
  double value = 0.0;
  NormMethod method = NormMethod::exact;
  // True when the reported value is only guaranteed from below.
  bool lower_bound_only = false;
};

// (sum_i v_i^p)^(1/p) for v_i >= 0; max for p = inf.
double pow_mean(const std::vector<double>& vals, const Exponent& p);

NormEstimate strong_norm(const VecSequence& seq, const Exponent& p);

struct WeakCfg {
  int starts = 32;
  int iters = 500;
  uint64_t seed = 1;
};

// Weak norm together with an attaining (or best found) unit dual vector.
struct WeakEval {
  double value = 0.0;
  Vec attaining;
  NormMethod method = NormMethod::exact;
  bool exact = true;
};

WeakEval weak_eval(const VecSequence& seq, const Exponent& p, const WeakCfg& cfg = {});
NormEstimate weak_norm(const VecSequence& seq, const Exponent& p, const WeakCfg& cfg = {});

struct CohenCfg {
  int starts = 16;
  int iters = 200;
  uint64_t seed = 1;
  int oracle_resolution = 0;  // 0 = default for the dimension
  bool allow_oracle = true;   // dims <= 3, length <= 4 route to the oracle
};

NormEstimate cohen_norm(const VecSequence& seq, const Exponent& p, const CohenCfg& cfg = {});

enum class OracleKind { weak, cohen };

// Certified-from-below grid evaluation on dims <= 3.  weak: plain maximum
// over a dual sphere grid.  cohen: cutting planes on the grid-relaxed
// feasible set, rescaled back to feasibility via the grid covering radius,
// with the analytic norming family as a floor (which makes the chain
// inequality strong <= cohen hold exactly for the oracle value).
NormEstimate grid_oracle(OracleKind kind, const VecSequence& seq, const Exponent& p,
                         int resolution = 0);

}  // namespace sumlab
