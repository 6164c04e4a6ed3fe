#include "sumlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sumlab/kernels.hpp"
#include "sumlab/linalg.hpp"
#include "sumlab/rng.hpp"

namespace sumlab {

void validate(const LinearOp& op) {
  validate(op.domain);
  validate(op.codomain);
  if (op.matrix.size() != static_cast<size_t>(op.domain.dim) * op.codomain.dim)
    throw input_error("operator matrix size does not match spaces");
}

void validate(const MultilinearOp& op) {
  if (op.domains.empty()) throw input_error("multilinear operator needs at least one slot");
  size_t want = op.codomain.dim;
  for (const auto& s : op.domains) {
    validate(s);
    want *= s.dim;
  }
  validate(op.codomain);
  if (op.tensor.size() != want) throw input_error("operator tensor size does not match spaces");
}

Vec apply(const LinearOp& op, const Vec& x) {
  if (static_cast<int>(x.size()) != op.domain.dim) throw input_error("apply: dimension mismatch");
  Vec y(op.codomain.dim);
  for (int k = 0; k < op.codomain.dim; ++k)
    y[k] = kernels::dot(op.matrix.data() + static_cast<size_t>(k) * op.domain.dim, x.data(),
                        op.domain.dim);
  return y;
}

Vec apply(const MultilinearOp& op, const std::vector<Vec>& xs) {
  if (xs.size() != op.domains.size()) throw input_error("apply: wrong number of arguments");
  for (size_t s = 0; s < xs.size(); ++s)
    if (static_cast<int>(xs[s].size()) != op.domains[s].dim)
      throw input_error("apply: dimension mismatch");
  // Contract the fastest-varying (last) slot repeatedly.
  std::vector<double> cur = op.tensor;
  for (int s = static_cast<int>(xs.size()) - 1; s >= 0; --s) {
    int d = op.domains[s].dim;
    size_t rows = cur.size() / d;
    std::vector<double> next(rows);
    for (size_t r = 0; r < rows; ++r)
      next[r] = kernels::dot(cur.data() + r * d, xs[s].data(), d);
    cur = std::move(next);
  }
  return cur;
}

Vec adjoint_apply(const LinearOp& op, const Vec& phi) {
  if (static_cast<int>(phi.size()) != op.codomain.dim)
    throw input_error("adjoint_apply: dimension mismatch");
  Vec g(op.domain.dim, 0.0);
  for (int k = 0; k < op.codomain.dim; ++k)
    kernels::axpy(phi[k], op.matrix.data() + static_cast<size_t>(k) * op.domain.dim, g.data(),
                  op.domain.dim);
  return g;
}

int arity(const AnyOp& op) {
  return std::holds_alternative<LinearOp>(op)
             ? 1
             : static_cast<int>(std::get<MultilinearOp>(op).domains.size());
}

const SpaceSpec& codomain_of(const AnyOp& op) {
  return std::holds_alternative<LinearOp>(op) ? std::get<LinearOp>(op).codomain
                                              : std::get<MultilinearOp>(op).codomain;
}

std::vector<SpaceSpec> domains_of(const AnyOp& op) {
  if (std::holds_alternative<LinearOp>(op)) return {std::get<LinearOp>(op).domain};
  return std::get<MultilinearOp>(op).domains;
}

const std::string& label_of(const AnyOp& op) {
  return std::holds_alternative<LinearOp>(op) ? std::get<LinearOp>(op).label
                                              : std::get<MultilinearOp>(op).label;
}

Vec apply_any(const AnyOp& op, const std::vector<Vec>& xs) {
  if (std::holds_alternative<LinearOp>(op)) {
    if (xs.size() != 1) throw input_error("apply: wrong number of arguments");
    return sumlab::apply(std::get<LinearOp>(op), xs[0]);
  }
  return sumlab::apply(std::get<MultilinearOp>(op), xs);
}

double max_abs_entry(const AnyOp& op) {
  const std::vector<double>& v = std::holds_alternative<LinearOp>(op)
                                     ? std::get<LinearOp>(op).matrix
                                     : std::get<MultilinearOp>(op).tensor;
  return kernels::max_abs(v.data(), v.size());
}

AnyOp scale_entries(const AnyOp& op, double factor) {
  AnyOp out = op;
  std::vector<double>& v = std::holds_alternative<LinearOp>(out)
                               ? std::get<LinearOp>(out).matrix
                               : std::get<MultilinearOp>(out).tensor;
  for (double& t : v) t *= factor;
  return out;
}

namespace {

bool enumerable_ball(const SpaceSpec& s, double* count) {
  if (s.exponent.is_one()) {
    *count = 2.0 * s.dim;
    return true;
  }
  if (s.exponent.is_inf() && s.dim <= 12) {
    *count = std::pow(2.0, s.dim);
    return true;
  }
  return false;
}

// Enumerates every combination of extreme points across slots; calls fn
// with the tuple.  Only used when the product count is small.
void for_each_extreme_tuple(const std::vector<BallSample>& samples, std::vector<Vec>& tuple,
                            size_t slot, const std::function<void(const std::vector<Vec>&)>& fn) {
  if (slot == samples.size()) {
    fn(tuple);
    return;
  }
  for (const Vec& p : samples[slot].points) {
    tuple[slot] = p;
    for_each_extreme_tuple(samples, tuple, slot + 1, fn);
  }
}

}  // namespace

OpNormEval op_norm_eval(const LinearOp& op, int budget, uint64_t seed) {
  validate(op);
  const SpaceSpec& E = op.domain;
  const SpaceSpec& F = op.codomain;
  OpNormEval out;
  out.argmax.assign(1, Vec(E.dim, 0.0));
  out.argmax[0][0] = 1.0;

  if (E.exponent.is_one()) {
    // Unit ball extremes are signed basis vectors; signs drop under ||T(.)||.
    double best = -1.0;
    int bj = 0;
    for (int j = 0; j < E.dim; ++j) {
      Vec col(F.dim);
      for (int k = 0; k < F.dim; ++k) col[k] = op.matrix[static_cast<size_t>(k) * E.dim + j];
      double v = norm(F, col);
      if (v > best) {
        best = v;
        bj = j;
      }
    }
    out.value = best;
    out.argmax[0].assign(E.dim, 0.0);
    out.argmax[0][bj] = 1.0;
    return out;
  }
  if (E.exponent.is_inf() && E.dim <= 20) {
    uint64_t half = 1ull << (E.dim - 1);
    Vec x(E.dim);
    double best = -1.0;
    for (uint64_t mask = 0; mask < half; ++mask) {
      x[0] = 1.0;
      for (int j = 1; j < E.dim; ++j) x[j] = (mask >> (j - 1)) & 1 ? -1.0 : 1.0;
      double v = norm(F, sumlab::apply(op, x));
      if (v > best) {
        best = v;
        out.argmax[0] = x;
      }
    }
    out.value = best;
    return out;
  }
  if (!E.exponent.is_inf() && E.exponent.value() == 2.0 && !F.exponent.is_inf() &&
      F.exponent.value() == 2.0) {
    Vec v;
    out.value = top_singular_value(op.matrix, F.dim, E.dim, &v);
    if (!v.empty()) out.argmax[0] = v;
    return out;
  }

  // Monotone ascent: x <- unit maximizer of <T' phi, .>, phi norming T x.
  out.exact = false;
  double best = 0.0;
  Vec bestx = out.argmax[0];
  for (int s = 0; s < std::max(budget, E.dim); ++s) {
    Vec x;
    if (s < E.dim) {
      x.assign(E.dim, 0.0);
      x[s] = 1.0;
    } else {
      Rng rng(mix_seed(seed, 0x09a, s));
      x.assign(E.dim, 0.0);
      double nv = 0.0;
      while (nv <= 1e-12) {
        for (double& c : x) c = rng.gaussian();
        nv = norm(E, x);
      }
      for (double& c : x) c /= nv;
    }
    double v = norm(F, sumlab::apply(op, x));
    for (int it = 0; it < 200; ++it) {
      Vec phi = norming_functional(F, sumlab::apply(op, x));
      Vec g = adjoint_apply(op, phi);
      if (kernels::max_abs(g.data(), g.size()) <= 0.0) break;
      Vec nx = norming_functional(dual(E), g);
      double nv = norm(F, sumlab::apply(op, nx));
      if (nv <= v + 1e-12 * std::max(1.0, v)) {
        if (nv > v) {
          v = nv;
          x = nx;
        }
        break;
      }
      v = nv;
      x = nx;
    }
    if (v > best) {
      best = v;
      bestx = x;
    }
  }
  out.value = best;
  out.argmax[0] = bestx;
  return out;
}

OpNormEval op_norm_eval(const MultilinearOp& op, int budget, uint64_t seed) {
  validate(op);
  const int n = static_cast<int>(op.domains.size());
  OpNormEval out;
  out.argmax.resize(n);
  for (int s = 0; s < n; ++s) {
    out.argmax[s].assign(op.domains[s].dim, 0.0);
    out.argmax[s][0] = 1.0;
  }

  double combos = 1.0;
  bool enumerable = true;
  for (const auto& s : op.domains) {
    double c;
    if (!enumerable_ball(s, &c)) {
      enumerable = false;
      break;
    }
    combos *= c;
  }
  if (enumerable && combos <= 4096.0) {
    std::vector<BallSample> samples;
    for (const auto& s : op.domains) samples.push_back(ball_points(s, std::max(2 * s.dim, 1 << s.dim), 1));
    std::vector<Vec> tuple(n);
    double best = -1.0;
    for_each_extreme_tuple(samples, tuple, 0, [&](const std::vector<Vec>& t) {
      double v = norm(op.codomain, sumlab::apply(op, t));
      if (v > best) {
        best = v;
        out.argmax = t;
      }
    });
    out.value = best;
    return out;
  }

  // Alternating maximization: each sweep solves the slot-linear problem
  // exactly via op_norm_eval on the frozen-slots matrix, so sweeps are
  // monotone; multistart guards against bad basins.
  out.exact = false;
  double best = 0.0;
  std::vector<Vec> bestt = out.argmax;
  for (int s = 0; s < budget; ++s) {
    std::vector<Vec> t(n);
    Rng rng(mix_seed(seed, 0x3a1, s));
    for (int j = 0; j < n; ++j) {
      const SpaceSpec& D = op.domains[j];
      if (s == 0) {
        t[j].assign(D.dim, 0.0);
        t[j][j % D.dim] = 1.0;
      } else {
        t[j].assign(D.dim, 0.0);
        double nv = 0.0;
        while (nv <= 1e-12) {
          for (double& c : t[j]) c = rng.gaussian();
          nv = norm(D, t[j]);
        }
        for (double& c : t[j]) c /= nv;
      }
    }
    double v = norm(op.codomain, sumlab::apply(op, t));
    for (int sweep = 0; sweep < 60; ++sweep) {
      for (int j = 0; j < n; ++j) {
        // Freeze all slots but j into a linear operator E_j -> F.
        LinearOp lin;
        lin.domain = op.domains[j];
        lin.codomain = op.codomain;
        lin.matrix.assign(static_cast<size_t>(lin.codomain.dim) * lin.domain.dim, 0.0);
        for (int col = 0; col < lin.domain.dim; ++col) {
          std::vector<Vec> probe = t;
          probe[j].assign(lin.domain.dim, 0.0);
          probe[j][col] = 1.0;
          Vec img = sumlab::apply(op, probe);
          for (int k = 0; k < lin.codomain.dim; ++k)
            lin.matrix[static_cast<size_t>(k) * lin.domain.dim + col] = img[k];
        }
        OpNormEval slot = op_norm_eval(lin, 8, mix_seed(seed, 0x51a, sweep * 8 + j));
        if (slot.value > 0) t[j] = slot.argmax[0];
      }
      double nv = norm(op.codomain, sumlab::apply(op, t));
      if (nv <= v + 1e-12 * std::max(1.0, v)) {
        v = std::max(v, nv);
        break;
      }
      v = nv;
    }
    if (v > best) {
      best = v;
      bestt = t;
    }
  }
  out.value = best;
  out.argmax = bestt;
  return out;
}

NormEstimate op_norm(const AnyOp& op, int budget, uint64_t seed) {
  OpNormEval ev = std::holds_alternative<LinearOp>(op)
                      ? op_norm_eval(std::get<LinearOp>(op), budget, seed)
                      : op_norm_eval(std::get<MultilinearOp>(op), budget, seed);
  NormEstimate out;
  out.value = ev.value;
  out.method = ev.exact ? NormMethod::exact : NormMethod::ascent;
  out.lower_bound_only = !ev.exact;
  return out;
}

OpNormEval form_norm(const AnyOp& op, const Vec& phi, int budget, uint64_t seed) {
  if (std::holds_alternative<LinearOp>(op)) {
    const LinearOp& lin = std::get<LinearOp>(op);
    Vec g = adjoint_apply(lin, phi);
    OpNormEval out;
    out.value = norm(dual(lin.domain), g);
    out.argmax.assign(1, norming_functional(dual(lin.domain), g));
    return out;
  }
  const MultilinearOp& ml = std::get<MultilinearOp>(op);
  if (static_cast<int>(phi.size()) != ml.codomain.dim)
    throw input_error("form_norm: functional dimension mismatch");
  // Contract phi into the tensor: a scalar-valued multilinear form.
  MultilinearOp scalar;
  scalar.domains = ml.domains;
  scalar.codomain = {1, Exponent::from_double(2.0)};
  size_t block = ml.tensor.size() / ml.codomain.dim;
  scalar.tensor.assign(block, 0.0);
  for (int k = 0; k < ml.codomain.dim; ++k)
    kernels::axpy(phi[k], ml.tensor.data() + static_cast<size_t>(k) * block, scalar.tensor.data(),
                  block);

  if (ml.domains.size() == 2) {
    const SpaceSpec& A = ml.domains[0];
    const SpaceSpec& B = ml.domains[1];
    auto is_l2 = [](const SpaceSpec& s) {
      return !s.exponent.is_inf() && s.exponent.value() == 2.0;
    };
    if (is_l2(A) && is_l2(B)) {
      // Bilinear form on Euclidean balls: top singular pair of the matrix.
      Vec right;
      double sv = top_singular_value(scalar.tensor, A.dim, B.dim, &right);
      OpNormEval out;
      out.value = sv;
      out.argmax.resize(2);
      out.argmax[1] = right;
      // Left vector u = M v / sigma.
      Vec left(A.dim, 0.0);
      if (sv > 0) {
        for (int i = 0; i < A.dim; ++i)
          left[i] = kernels::dot(scalar.tensor.data() + static_cast<size_t>(i) * B.dim,
                                 right.data(), B.dim) /
                    sv;
      } else {
        left[0] = 1.0;
        out.argmax[1].assign(B.dim, 0.0);
        out.argmax[1][0] = 1.0;
      }
      out.argmax[0] = left;
      return out;
    }
  }
  return op_norm_eval(scalar, budget, seed);
}

LinearOp random_linear(const SpaceSpec& domain, const SpaceSpec& codomain, uint64_t seed) {
  validate(domain);
  validate(codomain);
  LinearOp op;
  op.domain = domain;
  op.codomain = codomain;
  op.matrix.resize(static_cast<size_t>(domain.dim) * codomain.dim);
  Rng rng(mix_seed(seed, 0x0b));
  double scale = 1.0 / std::sqrt(static_cast<double>(domain.dim));
  for (double& t : op.matrix) t = rng.gaussian() * scale;
  op.label = "rand-lin-" + std::to_string(seed);
  return op;
}

MultilinearOp random_multilinear(const std::vector<SpaceSpec>& domains, const SpaceSpec& codomain,
                                 uint64_t seed) {
  MultilinearOp op;
  op.domains = domains;
  op.codomain = codomain;
  size_t total = codomain.dim;
  for (const auto& s : domains) total *= s.dim;
  op.tensor.resize(total);
  Rng rng(mix_seed(seed, 0x0c));
  double din = 1.0;
  for (const auto& s : domains) din *= s.dim;
  double scale = 1.0 / std::sqrt(din);
  for (double& t : op.tensor) t = rng.gaussian() * scale;
  op.label = "rand-multi-" + std::to_string(seed);
  validate(op);
  return op;
}

}  // namespace sumlab
