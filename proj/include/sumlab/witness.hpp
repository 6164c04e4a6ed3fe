#pragma once
// Witness-side machinery: exponent schemes (which strong/weak norms appear
// in the defining quotient), the quotient itself, and a finite-difference
// multistart ascent that searches for near-optimal witness families.  Every
// reported lower bound is re-evaluated through ratio(), never read off the
// optimizer state.
#include <cstdint>
#include <functional>
#include <vector>

#include "sumlab/operators.hpp"

namespace sumlab {

// Membership in the admissible region: q0 >= 1, q1 > 1, 1/q0 = 1/q1 + 1/p*.
// triviality_zone marks p < q1, the regime where the operator class could
// conceivably collapse to everything; studies report evidence, never proof.
struct PairAdmissibility {
  bool member = false;
  bool triviality_zone = false;
};

PairAdmissibility admissible_pair(const Exponent& p, const Exponent& q0, const Exponent& q1);

struct ExponentScheme {
  enum class Kind { linear, multi_joint, multi_separate, multi_general };
  Kind kind = Kind::linear;
  int arity = 1;
  Exponent p;               // the summing parameter; p* pairs with the functionals
  Exponent q0;              // outer exponent on the scalar sequence
  std::vector<Exponent> qs; // per-slot strong exponents (empty for joint)

  Exponent pstar() const { return p.conjugate(); }
  std::string name() const;

  // D_p, i.e. the linear scheme with (q0, q1) = (1, p).
  static ExponentScheme summing(const Exponent& p);
  static ExponentScheme linear(const Exponent& p, const Exponent& q0, const Exponent& q1);
  static ExponentScheme joint(const Exponent& p, int arity);
  static ExponentScheme separate(const Exponent& p, int arity);
  static ExponentScheme general(const Exponent& p, const Exponent& q0,
                                const std::vector<Exponent>& qs);
};

// Per-family denominator terms of the scheme: term.value maps one argument
// tuple to a nonnegative scalar; the family aggregate is the pow-mean with
// term.q.  Shared by ratio() and the abstract engine so both produce the
// same doubles.
struct SchemeTerm {
  Exponent q;
  std::function<double(const std::vector<Vec>&)> value;
};

std::vector<SchemeTerm> scheme_terms(const AnyOp& op, const ExponentScheme& sch);

struct SummingWitness {
  std::vector<VecSequence> xs;  // one sequence per slot, equal lengths
  VecSequence phis;             // functionals in dual(codomain)
};

void validate(const AnyOp& op, const SummingWitness& w);

struct RatioValue {
  double value = 0.0;
  bool rigorous = true;   // the weak factor came from an exact route
  double numerator = 0.0;
  double strong_factor = 1.0;
  double weak_factor = 0.0;
};

// The defining quotient of the scheme at one witness.  A degenerate
// denominator yields 0.  When no exact weak route exists the weak factor
// falls back to the strong norm (a valid upper bound), so the value is
// always a genuine lower bound for the scheme constant.
RatioValue ratio(const AnyOp& op, const SummingWitness& w, const ExponentScheme& sch);

struct AscentCfg {
  int starts = 32;
  int iters = 150;
  double fd_step = 1e-4;
  int m_max = 6;
};

struct WitnessSearch {
  double lower = 0.0;
  bool rigorous = true;
  SummingWitness best;
  int best_m = 0;
  std::vector<std::pair<int, double>> per_length;  // best ratio found at each m
};

// Best ratio over witnesses of a fixed length m.
double best_ratio_at_length(const AnyOp& op, const ExponentScheme& sch, int m,
                            const AscentCfg& cfg, uint64_t seed, SummingWitness* best = nullptr,
                            bool* rigorous = nullptr);

WitnessSearch witness_lower_bound(const AnyOp& op, const ExponentScheme& sch, const AscentCfg& cfg,
                                  uint64_t seed);

}  // namespace sumlab
