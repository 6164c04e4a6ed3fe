#pragma once
// The four studies the tool ships: bracketing one constant under several
// exponent schemes that provably share it, probing the disputed small-p
// zone for growth in the best witness ratio, and stress-testing the
// three-exponent Hoelder inequality the membership identity rests on.
// Every study returns a Report; verdicts only ever claim inconsistency on
// rigorous-vs-certified violations, everything else stays inconclusive.
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/domination.hpp"

namespace sumlab {

enum class Verdict { consistent, inconsistent, inconclusive };

const char* verdict_name(Verdict v);

struct Budgets {
  int m_max = 6;
  int starts = 32;
  int iters = 150;
  int atom_budget = 720;
  int grid_resolution = 0;  // 0 = default for the dual dimension
  int refine_rounds = 20;
  double tol = 0.05;  // cross-consistency slack on bracket overlap

  AscentCfg ascent_cfg() const;
  RefineCfg refine_cfg() const;
};

struct BracketRow {
  std::string scheme;
  double lower = 0.0;
  bool lower_rigorous = true;
  double upper = 0.0;
  bool upper_certified = true;
  double lp_value = 0.0;
  bool converged = false;
  int witness_length = 0;
};

struct Report {
  std::string experiment;
  std::string operator_label;
  std::string operator_digest;
  uint64_t seed = 0;
  Budgets budgets;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<BracketRow> brackets;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::pair<int, double>> trend;  // (witness length, best ratio)
  double trend_upper = 0.0;
  bool trend_bounded = false;
  double max_ratio = 0.0;
  long trials = 0;
  std::string note;
};

// All (q0, q1) pairs satisfying the membership identity at this p define
// the same constant; estimate a bracket per pair and check every lower
// bound sits under every upper bound.  The canonical pair (1, p) is added
// when absent.  Requires p > 1.
Report coincidence(const AnyOp& op, const Exponent& p,
                   const std::vector<std::pair<Exponent, Exponent>>& pairs, const Budgets& budgets,
                   uint64_t seed);

// Same cross-check for a multilinear operator across the joint, separate,
// and an asymmetric general scheme at the same p (defaults used when
// schemes is empty).
Report multi_equivalence(const AnyOp& op, const Exponent& p, std::vector<ExponentScheme> schemes,
                         const Budgets& budgets, uint64_t seed);

// Inside the disputed p < q1 zone: track the best witness ratio as the
// family length grows and compare against the refined constant.  A bounded
// trend is evidence for the nontrivial reading, never a proof; the verdict
// stays inconclusive unless a rigorous ratio beats a certified constant.
Report triviality_probe(const AnyOp& op, const Exponent& p, const Exponent& q0,
                        const Exponent& q1, const std::vector<int>& lengths,
                        const Budgets& budgets, uint64_t seed);

// Random-sequence stress of ||ab||_{q0} <= ||a||_{p*} ||b||_{q1} under the
// inverse-sum identity, across length scales and coefficient shapes.
Report holder_factor_check(const Exponent& p, const Exponent& q0, const Exponent& q1, long trials,
                           uint64_t seed);

}  // namespace sumlab
