#pragma once
// Single-measure domination certificates.  A certificate is a finitely
// supported probability measure mu on unit-ball atoms of the codomain plus
// a constant C with
//
//   |phi(T x)| <= C * prod_j ||x_j|| * ( sum_k mu_k |<psi_k, phi>|^{p*} )^{1/p*}
//
// for every argument tuple and functional.  Note the pointwise form does
// not involve the scheme's (q0, q..) exponents: those reappear only when
// the inequality is summed over a witness family.  fit_certificate solves
// the LP relaxation on a finite witness pool, validate_certificate sweeps
// functionals for the true constant of a fixed measure, and refine runs the
// cutting-plane loop between them.  The abstract engine underneath accepts
// arbitrary closures for the numerator and factor maps; the concrete entry
// points are thin canonical instantiations of it.
#include <cstdint>
#include <functional>

#include "sumlab/simplex.hpp"
#include "sumlab/witness.hpp"

namespace sumlab {

struct DominationCertificate {
  BallSample atoms;             // unit-ball points of the codomain
  std::vector<double> weights;  // probability weights over the atoms
  Exponent pstar;
  double constant = 0.0;
};

struct DominationPair {
  std::vector<Vec> xs;  // one argument per slot
  Vec phi;              // functional in dual(codomain)
};

struct FitResult {
  DominationCertificate cert;
  LpStatus status = LpStatus::optimal;
  double lp_value = 0.0;            // fitted constant (exact for the pool/atoms)
  std::vector<double> pair_weights; // LP dual weights, one per pair
};

FitResult fit_certificate(const AnyOp& op, const ExponentScheme& sch, const BallSample& atoms,
                          const std::vector<DominationPair>& pairs);

struct ValidationResult {
  double constant = 0.0;
  bool certified = true;   // exact numerator routes and a full dual-sphere grid
  bool unbounded = false;  // a functional with positive numerator had measure zero
  DominationPair worst;
};

// True constant of a fixed measure: sup over unit functionals of
// form_norm / measure factor, via dual sphere grid plus local polish.
// Ignores cert.constant.
ValidationResult validate_certificate(const AnyOp& op, const DominationCertificate& cert,
                                      int grid_resolution = 0, int budget = 8, uint64_t seed = 1);

struct RefineCfg {
  int max_rounds = 20;
  int atom_budget = 720;
  int grid_resolution = 0;  // 0 = default for the dual dimension
  double rel_gap = 1e-3;
  AscentCfg ascent;
};

struct ConstantEstimate {
  ExponentScheme scheme;
  double lower = 0.0;
  bool lower_rigorous = true;
  double upper = 0.0;
  bool upper_certified = true;
  double lp_value = 0.0;
  bool converged = false;
  int rounds = 0;
  SummingWitness best_witness;
  DominationCertificate certificate;
};

ConstantEstimate refine(const AnyOp& op, const ExponentScheme& sch, const RefineCfg& cfg,
                        uint64_t seed);

// ---------- abstract engine ----------

// One evaluation point.  The closures below decide what the slots mean.
struct AbstractPoint {
  std::vector<Vec> slots;
  Vec phi;
};

// phi-independent factor map with the exponent used for family aggregation.
struct IndepTerm {
  Exponent q;
  std::function<double(const AbstractPoint&)> value;
};

// The distinguished factor map evaluated against measure atoms.
struct DepTerm {
  Exponent pstar;
  std::function<double(const Vec& psi, const AbstractPoint&)> value;
  // Exact supremum over the whole parameter ball of the family pow-mean;
  // when absent the atom maximum is used (and lower bounds lose rigor).
  std::function<double(const std::vector<AbstractPoint>&)> family_sup;
};

struct AbstractProblem {
  Exponent p0;  // family exponent on the numerator map
  std::function<double(const AbstractPoint&)> S;
  std::vector<IndepTerm> indep;
  DepTerm dep;
  BallSample atoms;
};

// Canonical instantiation: S = |phi(T x)|, independent terms from
// scheme_terms, dependent term |<psi, phi>|.  Feeding this problem to
// abstract_bounds reproduces ratio() and fit_certificate exactly.
AbstractProblem canonical_problem(const AnyOp& op, const ExponentScheme& sch,
                                  const BallSample& atoms);

struct AbstractBounds {
  double lower = 0.0;          // best family quotient
  bool lower_exact_norms = true;
  double lp_value = 0.0;       // fitted constant on the flattened pool
  double pool_upper = 0.0;     // measure constant checked on the pool only
  std::vector<double> weights;
  LpStatus status = LpStatus::optimal;
};

AbstractBounds abstract_bounds(const AbstractProblem& prob,
                               const std::vector<std::vector<AbstractPoint>>& families);

}  // namespace sumlab
