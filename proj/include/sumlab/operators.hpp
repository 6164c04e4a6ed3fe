#pragma once
// Linear and multilinear operators between the l_q^n spaces, with norm
// evaluation that is exact on the polyhedral / Euclidean routes and a
// monotone multistart ascent elsewhere.
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sumlab/seqnorms.hpp"

namespace sumlab {

struct LinearOp {
  SpaceSpec domain;
  SpaceSpec codomain;
  std::vector<double> matrix;  // row-major, codomain.dim x domain.dim
  std::string label;
};

struct MultilinearOp {
  std::vector<SpaceSpec> domains;
  SpaceSpec codomain;
  // Entry for output k and inputs (j_1..j_n): index = ((k*d_1 + j_1)*d_2 + j_2)...
  std::vector<double> tensor;
  std::string label;
};

void validate(const LinearOp& op);
void validate(const MultilinearOp& op);

Vec apply(const LinearOp& op, const Vec& x);
Vec apply(const MultilinearOp& op, const std::vector<Vec>& xs);

// T' phi = phi ∘ T in dual(domain) coordinates.
Vec adjoint_apply(const LinearOp& op, const Vec& phi);

using AnyOp = std::variant<LinearOp, MultilinearOp>;

int arity(const AnyOp& op);
const SpaceSpec& codomain_of(const AnyOp& op);
std::vector<SpaceSpec> domains_of(const AnyOp& op);
const std::string& label_of(const AnyOp& op);
Vec apply_any(const AnyOp& op, const std::vector<Vec>& xs);
double max_abs_entry(const AnyOp& op);
AnyOp scale_entries(const AnyOp& op, double factor);

struct OpNormEval {
  double value = 0.0;
  std::vector<Vec> argmax;  // unit vectors, one per slot
  bool exact = true;
};

OpNormEval op_norm_eval(const LinearOp& op, int budget = 32, uint64_t seed = 1);
OpNormEval op_norm_eval(const MultilinearOp& op, int budget = 32, uint64_t seed = 1);
NormEstimate op_norm(const AnyOp& op, int budget = 32, uint64_t seed = 1);

// sup over unit tuples of |phi(T(x_1..x_n))|, i.e. the norm of the scalar
// form phi ∘ T, with the attaining tuple.  Exact for linear ops and for the
// enumerable / spectral bilinear cases; multistart alternation otherwise.
OpNormEval form_norm(const AnyOp& op, const Vec& phi, int budget = 16, uint64_t seed = 1);

LinearOp random_linear(const SpaceSpec& domain, const SpaceSpec& codomain, uint64_t seed);
MultilinearOp random_multilinear(const std::vector<SpaceSpec>& domains, const SpaceSpec& codomain,
                                 uint64_t seed);

}  // namespace sumlab
