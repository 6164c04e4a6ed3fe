#include "sumlab/domination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sumlab/kernels.hpp"
#include "sumlab/rng.hpp"

namespace sumlab {

namespace {

double pow_p(double v, double p) { return p == 1.0 ? v : (p == 2.0 ? v * v : std::pow(v, p)); }

struct FitCore {
  LpStatus status = LpStatus::optimal;
  double lp_value = 0.0;        // the constant C
  std::vector<double> weights;  // normalized measure
  std::vector<double> pair_weights;
  double pool_upper = 0.0;
};

// LP in nu = C^{p*} mu: minimize sum nu subject to, for every pool point,
// sum_k nu_k dep(psi_k, pt)^{p*} >= (S(pt) / prod indep(pt))^{p*}.
FitCore fit_core(const AbstractProblem& prob, const std::vector<AbstractPoint>& pool) {
  const size_t K = prob.atoms.points.size();
  if (K == 0) throw input_error("fit needs a nonempty atom sample");
  const double psv = prob.dep.pstar.is_inf() ? 1.0 : prob.dep.pstar.value();
  if (prob.dep.pstar.is_inf())
    throw input_error("fit requires a finite measure exponent");

  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<size_t> rows_from;  // pool index per LP row
  for (size_t j = 0; j < pool.size(); ++j) {
    const AbstractPoint& pt = pool[j];
    double s = prob.S(pt);
    double ind = 1.0;
    for (const auto& term : prob.indep) ind *= term.value(pt);
    if (!(ind > 1e-300)) continue;  // degenerate point carries no constraint
    double beta = pow_p(s / ind, psv);
    std::vector<double> row(K);
    for (size_t k = 0; k < K; ++k)
      row[k] = -pow_p(prob.dep.value(prob.atoms.points[k], pt), psv);
    A.push_back(std::move(row));
    b.push_back(-beta);
    rows_from.push_back(j);
  }

  FitCore out;
  out.weights.assign(K, 0.0);
  out.pair_weights.assign(pool.size(), 0.0);
  if (A.empty()) {
    // No active constraints: the zero measure works and C = 0.
    out.weights.assign(K, 1.0 / static_cast<double>(K));
    return out;
  }

  std::vector<double> c(K, 1.0);
  LpResult lp = lp_min(c, A, b);
  out.status = lp.status;
  if (lp.status != LpStatus::optimal) return out;

  double total = 0.0;
  for (double v : lp.x) total += v;
  out.lp_value = total <= 0.0 ? 0.0 : std::pow(total, 1.0 / psv);
  if (total > 0.0) {
    for (size_t k = 0; k < K; ++k) out.weights[k] = lp.x[k] / total;
  } else {
    out.weights.assign(K, 1.0 / static_cast<double>(K));
  }
  for (size_t r = 0; r < rows_from.size(); ++r)
    out.pair_weights[rows_from[r]] = std::max(0.0, -lp.dual[r]);

  // Constant actually achieved on the pool by the fitted measure; at the LP
  // optimum this equals lp_value up to roundoff.
  for (size_t j = 0; j < pool.size(); ++j) {
    const AbstractPoint& pt = pool[j];
    double ind = 1.0;
    for (const auto& term : prob.indep) ind *= term.value(pt);
    if (!(ind > 1e-300)) continue;
    double den = 0.0;
    for (size_t k = 0; k < K; ++k)
      den += out.weights[k] * pow_p(prob.dep.value(prob.atoms.points[k], pt), psv);
    den = std::pow(den, 1.0 / psv) * ind;
    double s = prob.S(pt);
    if (den > 1e-300) out.pool_upper = std::max(out.pool_upper, s / den);
  }
  return out;
}

}  // namespace

AbstractProblem canonical_problem(const AnyOp& op, const ExponentScheme& sch,
                                  const BallSample& atoms) {
  AbstractProblem prob;
  prob.p0 = sch.q0;
  prob.S = [op](const AbstractPoint& pt) {
    return std::fabs(pairing(pt.phi, apply_any(op, pt.slots)));
  };
  for (const SchemeTerm& term : scheme_terms(op, sch))
    prob.indep.push_back({term.q, [term](const AbstractPoint& pt) { return term.value(pt.slots); }});
  const SpaceSpec Fd = dual(codomain_of(op));
  const Exponent ps = sch.pstar();
  prob.dep.pstar = ps;
  prob.dep.value = [](const Vec& psi, const AbstractPoint& pt) {
    return std::fabs(pairing(psi, pt.phi));
  };
  prob.dep.family_sup = [Fd, ps](const std::vector<AbstractPoint>& family) {
    VecSequence phis{Fd, {}};
    phis.items.reserve(family.size());
    for (const auto& pt : family) phis.items.push_back(pt.phi);
    WeakEval we = weak_eval(phis, ps);
    if (we.exact) return we.value;
    return strong_norm(phis, ps).value;
  };
  prob.atoms = atoms;
  return prob;
}

AbstractBounds abstract_bounds(const AbstractProblem& prob,
                               const std::vector<std::vector<AbstractPoint>>& families) {
  AbstractBounds out;
  out.lower_exact_norms = static_cast<bool>(prob.dep.family_sup);
  for (const auto& fam : families) {
    if (fam.empty()) continue;
    std::vector<double> svals;
    svals.reserve(fam.size());
    for (const auto& pt : fam) svals.push_back(prob.S(pt));
    double num = pow_mean(svals, prob.p0);
    double den = 1.0;
    for (const auto& term : prob.indep) {
      std::vector<double> tv;
      tv.reserve(fam.size());
      for (const auto& pt : fam) tv.push_back(term.value(pt));
      den *= pow_mean(tv, term.q);
    }
    double dep_factor;
    if (prob.dep.family_sup) {
      dep_factor = prob.dep.family_sup(fam);
    } else {
      dep_factor = 0.0;
      for (const auto& psi : prob.atoms.points) {
        std::vector<double> dv;
        dv.reserve(fam.size());
        for (const auto& pt : fam) dv.push_back(prob.dep.value(psi, pt));
        dep_factor = std::max(dep_factor, pow_mean(dv, prob.dep.pstar));
      }
    }
    den *= dep_factor;
    if (den > 1e-300) out.lower = std::max(out.lower, num / den);
  }

  std::vector<AbstractPoint> pool;
  for (const auto& fam : families) pool.insert(pool.end(), fam.begin(), fam.end());
  FitCore fc = fit_core(prob, pool);
  out.lp_value = fc.lp_value;
  out.pool_upper = fc.pool_upper;
  out.weights = fc.weights;
  out.status = fc.status;
  return out;
}

FitResult fit_certificate(const AnyOp& op, const ExponentScheme& sch, const BallSample& atoms,
                          const std::vector<DominationPair>& pairs) {
  if (!same_space(atoms.space, codomain_of(op)))
    throw input_error("certificate atoms must sample the codomain ball");
  AbstractProblem prob = canonical_problem(op, sch, atoms);
  std::vector<AbstractPoint> pool;
  pool.reserve(pairs.size());
  for (const auto& pr : pairs) pool.push_back({pr.xs, pr.phi});
  FitCore fc = fit_core(prob, pool);

  FitResult out;
  out.status = fc.status;
  out.lp_value = fc.lp_value;
  out.pair_weights = fc.pair_weights;
  out.cert.atoms = atoms;
  out.cert.weights = fc.weights;
  out.cert.pstar = sch.pstar();
  out.cert.constant = fc.lp_value;
  return out;
}

namespace {

int default_grid_resolution(int dual_dim) { return dual_dim >= 3 ? 64 : 720; }

// Measure factor (sum_k mu_k |<psi_k, phi>|^{p*})^{1/p*}.
double measure_factor(const DominationCertificate& cert, const Vec& phi, double psv) {
  double s = 0.0;
  const size_t K = cert.atoms.points.size();
  for (size_t k = 0; k < K; ++k) {
    if (cert.weights[k] == 0.0) continue;
    s += cert.weights[k] * pow_p(std::fabs(pairing(cert.atoms.points[k], phi)), psv);
  }
  return std::pow(s, 1.0 / psv);
}

}  // namespace

ValidationResult validate_certificate(const AnyOp& op, const DominationCertificate& cert,
                                      int grid_resolution, int budget, uint64_t seed) {
  const SpaceSpec F = codomain_of(op);
  if (!same_space(cert.atoms.space, F))
    throw input_error("certificate atoms must sample the codomain ball");
  if (cert.weights.size() != cert.atoms.points.size())
    throw input_error("certificate weights/atoms length mismatch");
  const SpaceSpec Fd = dual(F);
  if (Fd.dim > 3) throw input_error("validation sweep supports codomain dims 1..3");
  const double psv = cert.pstar.is_inf() ? 1.0 : cert.pstar.value();
  if (grid_resolution == 0) grid_resolution = default_grid_resolution(Fd.dim);

  ValidationResult out;
  out.certified = true;
  double opscale = max_abs_entry(op);

  Vec best_phi;
  double best_ratio = -1.0;
  auto consider = [&](const Vec& phi) {
    OpNormEval fn = form_norm(op, phi, budget, mix_seed(seed, 0xf0a));
    out.certified = out.certified && fn.exact;
    double den = measure_factor(cert, phi, psv);
    if (den <= 1e-14) {
      if (fn.value > 1e-10 * std::max(1.0, opscale)) {
        out.unbounded = true;
        out.worst = {fn.argmax, phi};
        out.constant = std::numeric_limits<double>::infinity();
      }
      return;
    }
    double r = fn.value / den;
    if (r > best_ratio) {
      best_ratio = r;
      best_phi = phi;
      out.worst = {fn.argmax, phi};
    }
  };

  for (const Vec& phi : sphere_grid(Fd, grid_resolution)) {
    consider(phi);
    if (out.unbounded) return out;
  }

  // Local polish around the best grid direction.
  if (!best_phi.empty()) {
    double step = 4.0 / grid_resolution;
    Vec cur = best_phi;
    for (int round = 0; round < 40 && !out.unbounded; ++round) {
      bool improved = false;
      for (int c = 0; c < Fd.dim && !out.unbounded; ++c) {
        for (double sgn : {1.0, -1.0}) {
          Vec cand = cur;
          cand[c] += sgn * step;
          double nv = norm(Fd, cand);
          if (nv <= 1e-12) continue;
          for (double& t : cand) t /= nv;
          double before = best_ratio;
          consider(cand);
          if (best_ratio > before) {
            cur = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
      if (step < 1e-10) break;
    }
  }

  if (!out.unbounded) out.constant = std::max(best_ratio, 0.0);
  return out;
}

namespace {

// Witness family from LP dual weights: each pool pair with positive weight
// lambda contributes arguments scaled by lambda^{1/q_slot} and a functional
// scaled by lambda^{1/p*}, the split that turns the summed pointwise
// inequalities back into the family quotient.
SummingWitness witness_from_dual(const AnyOp& op, const ExponentScheme& sch,
                                 const std::vector<DominationPair>& pairs,
                                 const std::vector<double>& lambda, size_t cap) {
  std::vector<size_t> idx;
  for (size_t j = 0; j < pairs.size(); ++j)
    if (lambda[j] > 1e-12) idx.push_back(j);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return lambda[a] > lambda[b]; });
  if (idx.size() > cap) idx.resize(cap);

  std::vector<SpaceSpec> doms = domains_of(op);
  SummingWitness w;
  w.xs.resize(doms.size());
  for (size_t j = 0; j < doms.size(); ++j) w.xs[j].space = doms[j];
  w.phis.space = dual(codomain_of(op));

  auto slot_exp = [&](size_t j) -> double {
    if (sch.kind == ExponentScheme::Kind::multi_joint)
      return sch.p.is_inf() ? 0.0 : 1.0 / (sch.p.value() * sch.arity);
    const Exponent& q = sch.qs[j];
    return q.is_inf() ? 0.0 : 1.0 / q.value();
  };
  double phi_exp = sch.pstar().is_inf() ? 0.0 : 1.0 / sch.pstar().value();

  for (size_t r : idx) {
    double l = lambda[r];
    for (size_t j = 0; j < doms.size(); ++j) {
      Vec x = pairs[r].xs[j];
      double f = std::pow(l, slot_exp(j));
      for (double& t : x) t *= f;
      w.xs[j].items.push_back(std::move(x));
    }
    Vec phi = pairs[r].phi;
    double f = std::pow(l, phi_exp);
    for (double& t : phi) t *= f;
    w.phis.items.push_back(std::move(phi));
  }
  return w;
}

}  // namespace

ConstantEstimate refine(const AnyOp& op, const ExponentScheme& sch, const RefineCfg& cfg,
                        uint64_t seed) {
  const SpaceSpec F = codomain_of(op);
  const SpaceSpec Fd = dual(F);
  ConstantEstimate est;
  est.scheme = sch;

  BallSample atoms = ball_points(F, std::max(cfg.atom_budget, 2 * F.dim), mix_seed(seed, 0xa70));

  // Seed pool: coarse dual grid paired with its form maximizers, plus the
  // operator-norm pair.
  std::vector<DominationPair> pairs;
  int res0 = Fd.dim >= 3 ? 5 : 16;
  for (const Vec& phi : sphere_grid(Fd, res0)) {
    OpNormEval fn = form_norm(op, phi, 4, mix_seed(seed, 0x5eed, pairs.size()));
    if (fn.value > 1e-14) pairs.push_back({fn.argmax, phi});
  }
  {
    OpNormEval ev = std::holds_alternative<LinearOp>(op)
                        ? op_norm_eval(std::get<LinearOp>(op), 16, mix_seed(seed, 0x0b0))
                        : op_norm_eval(std::get<MultilinearOp>(op), 16, mix_seed(seed, 0x0b0));
    if (ev.value > 1e-14)
      pairs.push_back({ev.argmax, norming_functional(F, apply_any(op, ev.argmax))});
  }

  double best_upper = std::numeric_limits<double>::infinity();
  bool best_certified = false;
  FitResult last_fit;
  bool have_cert = false;

  for (int round = 0; round < cfg.max_rounds; ++round) {
    FitResult fit = fit_certificate(op, sch, atoms, pairs);
    if (fit.status != LpStatus::optimal)
      throw numeric_error(std::string("measure fit LP failed: ") + lp_status_name(fit.status));
    last_fit = fit;
    est.lp_value = fit.lp_value;
    est.rounds = round + 1;

    ValidationResult val = validate_certificate(op, fit.cert, cfg.grid_resolution, 8,
                                                mix_seed(seed, 0xa1, round));
    if (!val.unbounded && val.constant < best_upper) {
      best_upper = val.constant;
      best_certified = val.certified;
      est.certificate = fit.cert;
      est.certificate.constant = val.constant;
      have_cert = true;
    }
    if (!val.unbounded &&
        val.constant - fit.lp_value <= cfg.rel_gap * std::max(val.constant, 1e-12)) {
      est.converged = true;
      break;
    }
    if (val.worst.phi.empty()) break;
    if (!pairs.empty()) {
      const DominationPair& prev = pairs.back();
      bool same = prev.phi.size() == val.worst.phi.size();
      for (size_t i = 0; same && i < prev.phi.size(); ++i)
        same = std::fabs(prev.phi[i] - val.worst.phi[i]) < 1e-12;
      if (same) break;  // the cut repeats: the loop has stalled
    }
    pairs.push_back(val.worst);
  }

  if (!have_cert) {
    // Every validation sweep found an uncovered direction; there is no
    // certified finite constant for the measures we produced.
    est.certificate = last_fit.cert;
    best_upper = std::numeric_limits<double>::infinity();
    best_certified = false;
  }
  est.upper = best_upper;
  est.upper_certified = best_certified;

  WitnessSearch ws = witness_lower_bound(op, sch, cfg.ascent, mix_seed(seed, 0x10e5));
  est.lower = ws.lower;
  est.lower_rigorous = ws.rigorous;
  est.best_witness = ws.best;

  SummingWitness dw = witness_from_dual(op, sch, pairs, last_fit.pair_weights, 12);
  if (!dw.phis.items.empty()) {
    RatioValue rv = ratio(op, dw, sch);
    if (rv.value > est.lower) {
      est.lower = rv.value;
      est.lower_rigorous = rv.rigorous;
      est.best_witness = dw;
    }
  }
  return est;
}

}  // namespace sumlab
