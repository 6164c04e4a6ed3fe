#include "sumlab/seqnorms.hpp"

#include <algorithm>
#include <cmath>

#include "sumlab/kernels.hpp"
#include "sumlab/linalg.hpp"
#include "sumlab/rng.hpp"
#include "sumlab/simplex.hpp"

namespace sumlab {

void validate(const VecSequence& seq) {
  validate(seq.space);
  for (const auto& x : seq.items)
    if (static_cast<int>(x.size()) != seq.space.dim)
      throw input_error("sequence item dimension mismatch");
}

const char* norm_method_name(NormMethod m) {
  switch (m) {
    case NormMethod::exact: return "exact";
    case NormMethod::extreme_enumeration: return "extreme_enumeration";
    case NormMethod::spectral: return "spectral";
    case NormMethod::ascent: return "ascent";
    case NormMethod::grid_oracle: return "grid_oracle";
  }
  return "?";
}

double pow_mean(const std::vector<double>& vals, const Exponent& p) {
  if (vals.empty()) return 0.0;
  if (p.is_inf()) return *std::max_element(vals.begin(), vals.end());
  double pv = p.value();
  if (!(pv >= 1.0)) throw input_error("sequence exponent must satisfy p >= 1");
  double s = kernels::sum_abs_pow(vals.data(), vals.size(), pv);
  return pv == 1.0 ? s : std::pow(s, 1.0 / pv);
}

NormEstimate strong_norm(const VecSequence& seq, const Exponent& p) {
  validate(seq);
  std::vector<double> ns;
  ns.reserve(seq.items.size());
  for (const auto& x : seq.items) ns.push_back(norm(seq.space, x));
  return {pow_mean(ns, p), NormMethod::exact, false};
}

namespace {

double family_value(const VecSequence& seq, const Vec& psi, const Exponent& p) {
  std::vector<double> a;
  a.reserve(seq.items.size());
  for (const auto& x : seq.items) a.push_back(std::fabs(pairing(psi, x)));
  return pow_mean(a, p);
}

}  // namespace

WeakEval weak_eval(const VecSequence& seq, const Exponent& p, const WeakCfg& cfg) {
  validate(seq);
  const SpaceSpec& E = seq.space;
  const int d = E.dim;
  const size_t m = seq.items.size();
  WeakEval out;
  out.attaining.assign(d, 0.0);
  out.attaining[0] = 1.0;
  if (m == 0) return out;

  if (p.is_inf()) {
    // sup_psi max_i |psi(x_i)| = max_i ||x_i||, attained by a norming functional.
    size_t best = 0;
    double bv = -1.0;
    for (size_t i = 0; i < m; ++i) {
      double v = norm(E, seq.items[i]);
      if (v > bv) {
        bv = v;
        best = i;
      }
    }
    out.value = bv;
    out.attaining = norming_functional(E, seq.items[best]);
    return out;
  }
  if (!(p.value() >= 1.0)) throw input_error("sequence exponent must satisfy p >= 1");

  if (m == 1) {
    out.value = norm(E, seq.items[0]);
    out.attaining = norming_functional(E, seq.items[0]);
    return out;
  }

  if (E.exponent.is_inf()) {
    // Dual ball is the l1 ball; the objective is convex, so the maximum
    // sits on a signed basis vector and signs drop under |.|.
    int bestj = 0;
    double bv = -1.0;
    std::vector<double> col(m);
    for (int j = 0; j < d; ++j) {
      for (size_t i = 0; i < m; ++i) col[i] = seq.items[i][j];
      double v = pow_mean(col, p);
      if (v > bv) {
        bv = v;
        bestj = j;
      }
    }
    out.value = bv;
    out.attaining.assign(d, 0.0);
    out.attaining[bestj] = 1.0;
    out.method = NormMethod::extreme_enumeration;
    return out;
  }

  if (E.exponent.is_one() && d <= 20) {
    // Dual ball is the l_inf cube; enumerate sign vectors, first sign fixed
    // by symmetry.
    uint64_t half = 1ull << (d - 1);
    Vec psi(d);
    double bv = -1.0;
    Vec bestpsi;
    for (uint64_t mask = 0; mask < half; ++mask) {
      psi[0] = 1.0;
      for (int j = 1; j < d; ++j) psi[j] = (mask >> (j - 1)) & 1 ? -1.0 : 1.0;
      double v = family_value(seq, psi, p);
      if (v > bv) {
        bv = v;
        bestpsi = psi;
      }
    }
    out.value = bv;
    out.attaining = bestpsi;
    out.method = NormMethod::extreme_enumeration;
    return out;
  }

  if (!E.exponent.is_inf() && E.exponent.value() == 2.0 && !p.is_inf() && p.value() == 2.0) {
    // Euclidean p = 2: the weak norm is the top singular value of the
    // m x d matrix whose rows are the items.
    std::vector<double> rows(m * d);
    for (size_t i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) rows[i * d + j] = seq.items[i][j];
    Vec v;
    out.value = top_singular_value(rows, static_cast<int>(m), d, &v);
    out.attaining = v;
    out.method = NormMethod::spectral;
    return out;
  }

  // Frank-Wolfe style multistart ascent: repeatedly replace psi by the unit
  // dual vector maximizing the linearized objective.  The objective is
  // convex on the dual ball, so each step is non-decreasing.
  double pv = p.value();
  double best = 0.0;
  Vec bestpsi = out.attaining;
  SpaceSpec Ed = dual(E);
  for (int s = 0; s < cfg.starts; ++s) {
    Vec psi;
    if (s < static_cast<int>(m)) {
      psi = norming_functional(E, seq.items[s]);
      if (norm(Ed, psi) <= 0.0) continue;
    } else {
      Rng rng(mix_seed(cfg.seed, 0x3eac, s));
      psi.assign(d, 0.0);
      double nv = 0.0;
      while (nv <= 1e-12) {
        for (double& c : psi) c = rng.gaussian();
        nv = norm(Ed, psi);
      }
      for (double& c : psi) c /= nv;
    }
    double v = family_value(seq, psi, p);
    for (int it = 0; it < cfg.iters; ++it) {
      Vec g(d, 0.0);
      for (const auto& x : seq.items) {
        double a = pairing(psi, x);
        if (a == 0.0) continue;
        double w = pv == 1.0 ? (a > 0 ? 1.0 : -1.0)
                             : std::pow(std::fabs(a), pv - 1.0) * (a > 0 ? 1.0 : -1.0);
        kernels::axpy(w, x.data(), g.data(), d);
      }
      double gn = kernels::max_abs(g.data(), d);
      if (gn <= 0.0) break;
      Vec next = norming_functional(E, g);
      double vn = family_value(seq, next, p);
      if (vn <= v + 1e-10 * std::max(1.0, v)) {
        if (vn > v) {
          v = vn;
          psi = next;
        }
        break;
      }
      v = vn;
      psi = next;
    }
    if (v > best) {
      best = v;
      bestpsi = psi;
    }
  }
  out.value = best;
  out.attaining = bestpsi;
  out.method = NormMethod::ascent;
  out.exact = false;
  return out;
}

NormEstimate weak_norm(const VecSequence& seq, const Exponent& p, const WeakCfg& cfg) {
  WeakEval ev = weak_eval(seq, p, cfg);
  return {ev.value, ev.method, !ev.exact};
}

namespace {

// Family (phi_i) = ||x_i||^(p-1) u_i / sigma^(p-1) with u_i norming x_i.
// It pairs to exactly the strong p-norm sigma and has weak_{p*} norm <= 1,
// so value / weak is a valid cohen lower bound and is exact for collinear
// sequences.  p = inf concentrates everything on the largest item.
struct NormingFamily {
  VecSequence phis;  // lives in dual(E)
  double paired = 0.0;
};

NormingFamily norming_family(const VecSequence& seq, const Exponent& p) {
  const SpaceSpec& E = seq.space;
  NormingFamily out;
  out.phis.space = dual(E);
  double sigma = strong_norm(seq, p).value;
  if (sigma <= 0.0) {
    out.phis.items.assign(seq.items.size(), Vec(E.dim, 0.0));
    return out;
  }
  if (p.is_inf()) {
    size_t best = 0;
    double bv = -1.0;
    for (size_t i = 0; i < seq.items.size(); ++i) {
      double v = norm(E, seq.items[i]);
      if (v > bv) {
        bv = v;
        best = i;
      }
    }
    out.phis.items.assign(seq.items.size(), Vec(E.dim, 0.0));
    out.phis.items[best] = norming_functional(E, seq.items[best]);
    out.paired = bv;
    return out;
  }
  double pv = p.value();
  for (const auto& x : seq.items) {
    double nx = norm(E, x);
    Vec u = norming_functional(E, x);
    double c = nx <= 0.0 ? 0.0 : std::pow(nx / sigma, pv - 1.0);
    for (double& t : u) t *= c;
    out.phis.items.push_back(std::move(u));
    out.paired += c * nx;
  }
  return out;
}

// sum_i |<u, phi_i>|^q for the cutting-plane sweeps.
double grid_constraint_value(const std::vector<Vec>& phis, const Vec& u, double q) {
  double s = 0.0;
  for (const auto& phi : phis) {
    double t = pairing(u, phi);
    s += q == 1.0 ? std::fabs(t) : std::pow(std::fabs(t), q);
  }
  return s;
}

NormEstimate cohen_grid_oracle(const VecSequence& seq, const Exponent& p, int res) {
  const SpaceSpec& E = seq.space;
  const SpaceSpec Ed = dual(E);
  const int d = E.dim;
  const int m = static_cast<int>(seq.items.size());
  const Exponent ps = p.conjugate();
  const double psv = ps.value();  // p = 1 is handled before we get here

  std::vector<Vec> U = sphere_grid(E, res);

  // Analytic floor: the norming family divided by its exact weak norm when
  // an exact route exists (the weak norm is <= 1 by construction, so the
  // division only improves the bound).
  NormingFamily nf = norming_family(seq, p);
  double floor_val = nf.paired;
  {
    WeakEval w = weak_eval(nf.phis, ps);
    if (w.exact && w.value > 1e-12 && nf.paired > 0.0)
      floor_val = std::max(floor_val, nf.paired / w.value);
  }

  // Cutting planes on the grid-relaxed problem: maximize sum_i <phi_i, x_i>
  // over families with sum_i |<u, phi_i>|^{p*} <= 1 at every grid u.  Split
  // phi into +/- parts; unit coordinate boxes are valid because each phi_i
  // alone must have dual norm <= 1.
  const int nv = 2 * m * d;
  std::vector<double> c(nv);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) {
      c[2 * (i * d + j)] = -seq.items[i][j];
      c[2 * (i * d + j) + 1] = seq.items[i][j];
    }
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int k = 0; k < nv; ++k) {
    std::vector<double> r(nv, 0.0);
    r[k] = 1.0;
    rows.push_back(std::move(r));
    rhs.push_back(1.0);
  }

  std::vector<Vec> phis(m, Vec(d, 0.0));
  double paired = 0.0;
  double grid_max = 0.0;
  bool have_point = false;
  for (int round = 0; round < 150; ++round) {
    LpResult lp = lp_min(c, rows, rhs);
    if (lp.status != LpStatus::optimal) break;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j)
        phis[i][j] = lp.x[2 * (i * d + j)] - lp.x[2 * (i * d + j) + 1];
    paired = -lp.objective;
    have_point = true;

    // Worst three violated grid constraints become new cuts.
    struct Viol {
      double g;
      int idx;
    };
    std::vector<Viol> top;
    grid_max = 0.0;
    for (size_t ui = 0; ui < U.size(); ++ui) {
      double g = grid_constraint_value(phis, U[ui], psv);
      grid_max = std::max(grid_max, g);
      if (g > 1.0 + 1e-7) {
        top.push_back({g, static_cast<int>(ui)});
        std::sort(top.begin(), top.end(), [](const Viol& a, const Viol& b) { return a.g > b.g; });
        if (top.size() > 3) top.pop_back();
      }
    }
    if (top.empty()) break;
    if (rows.size() > static_cast<size_t>(nv) + 400) break;
    for (const Viol& v : top) {
      const Vec& u = U[v.idx];
      std::vector<double> r(nv, 0.0);
      double lin = 0.0;
      for (int i = 0; i < m; ++i) {
        double t = pairing(u, phis[i]);
        double w = psv == 1.0 ? (t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0))
                              : psv * std::pow(std::fabs(t), psv - 1.0) * (t >= 0 ? 1.0 : -1.0);
        lin += w * t;
        for (int j = 0; j < d; ++j) {
          r[2 * (i * d + j)] += w * u[j];
          r[2 * (i * d + j) + 1] -= w * u[j];
        }
      }
      rows.push_back(std::move(r));
      rhs.push_back(1.0 - v.g + lin);
    }
  }

  double value = floor_val;
  if (have_point && paired > 0.0) {
    // Rescale the relaxed family back to certified feasibility: its true
    // weak norm is at most the grid maximum plus a covering correction.
    std::vector<double> dn;
    for (const auto& phi : phis) dn.push_back(norm(Ed, phi));
    double lip = pow_mean(dn, ps);
    double delta = grid_covering_estimate(E, res);
    double w_up = std::pow(std::max(grid_max, 1e-300), 1.0 / psv) + lip * delta;
    if (w_up > 1e-12) value = std::max(value, paired / w_up);
    VecSequence phiseq{Ed, phis};
    WeakEval w = weak_eval(phiseq, ps);
    if (w.exact && w.value > 1e-12) value = std::max(value, paired / w.value);
  }
  return {value, NormMethod::grid_oracle, true};
}

}  // namespace

NormEstimate grid_oracle(OracleKind kind, const VecSequence& seq, const Exponent& p, int res) {
  validate(seq);
  const SpaceSpec& E = seq.space;
  if (E.dim > 3) throw input_error("grid oracle supports dims 1..3");
  if (res == 0) res = E.dim == 3 ? 64 : 720;
  if (res < 4) throw input_error("grid oracle resolution too small");
  if (seq.items.empty()) return {0.0, NormMethod::exact, false};

  if (kind == OracleKind::weak) {
    auto U = sphere_grid(dual(E), res);
    double best = 0.0;
    for (const auto& psi : U) best = std::max(best, family_value(seq, psi, p));
    return {best, NormMethod::grid_oracle, true};
  }

  if (static_cast<int>(seq.items.size()) > 8)
    throw input_error("cohen grid oracle supports sequences of length <= 8");
  if (!p.is_inf() && p.value() == 1.0) return strong_norm(seq, p);
  if (E.dim == 1) return strong_norm(seq, p);
  if (seq.items.size() == 1)
    return {norm(E, seq.items[0]), NormMethod::exact, false};
  return cohen_grid_oracle(seq, p, res);
}

NormEstimate cohen_norm(const VecSequence& seq, const Exponent& p, const CohenCfg& cfg) {
  validate(seq);
  if (!p.is_inf() && !(p.value() >= 1.0))
    throw input_error("sequence exponent must satisfy p >= 1");
  const SpaceSpec& E = seq.space;
  const int m = static_cast<int>(seq.items.size());
  if (m == 0) return {0.0, NormMethod::exact, false};
  if (m == 1) return {norm(E, seq.items[0]), NormMethod::exact, false};
  // p = 1 decouples: each phi_i maximizes independently, giving the strong sum.
  if (!p.is_inf() && p.value() == 1.0) return strong_norm(seq, p);
  if (E.dim == 1) return strong_norm(seq, p);
  if (cfg.allow_oracle && E.dim <= 3 && m <= 4)
    return grid_oracle(OracleKind::cohen, seq, p, cfg.oracle_resolution);

  // Heuristic: alternating direction / profile ascent over families
  // phi_i = c_i psi_i, renormalized by the family weak norm each step.
  const Exponent ps = p.conjugate();
  const double psv = ps.value();  // finite: p = 1 was handled above
  const SpaceSpec Ed = dual(E);
  const int d = E.dim;

  auto family_weak_upper = [&](const VecSequence& phis) {
    // For the bound to stay a genuine lower bound we must divide by an
    // upper estimate of the weak norm; fall back to the strong norm when
    // no exact route exists.
    WeakEval w = weak_eval(phis, ps, {8, 200, cfg.seed});
    if (w.exact) return w;
    WeakEval up;
    up.value = strong_norm(phis, ps).value;
    up.exact = true;
    up.method = NormMethod::exact;
    return up;
  };

  NormingFamily nf = norming_family(seq, p);
  double best = 0.0;
  {
    // family_weak_upper is a valid upper estimate of the weak norm, so the
    // quotient is a genuine lower bound; it equals nf.paired when the
    // fallback (strong norm = 1 for this family) kicks in.
    WeakEval w = family_weak_upper(nf.phis);
    if (w.value > 1e-12) best = nf.paired / w.value;
  }

  for (int s = 0; s < cfg.starts; ++s) {
    VecSequence phis{Ed, {}};
    if (s == 0) {
      phis.items = nf.phis.items;
    } else {
      Rng rng(mix_seed(cfg.seed, 0xc0e, s));
      for (int i = 0; i < m; ++i) {
        Vec v(d);
        double nv = 0.0;
        while (nv <= 1e-12) {
          for (double& t : v) t = rng.gaussian();
          nv = norm(Ed, v);
        }
        double prof = std::fabs(rng.gaussian()) + 0.1;
        for (double& t : v) t *= prof / nv;
        phis.items.push_back(std::move(v));
      }
    }
    double prev = -1.0;
    for (int it = 0; it < cfg.iters; ++it) {
      WeakEval w = weak_eval(phis, ps, {8, 200, cfg.seed});
      if (w.value <= 1e-12) break;
      for (auto& phi : phis.items)
        for (double& t : phi) t /= w.value;
      double paired = 0.0;
      for (int i = 0; i < m; ++i) paired += std::fabs(pairing(phis.items[i], seq.items[i]));
      if (w.exact) {
        best = std::max(best, paired);
      } else {
        WeakEval up = family_weak_upper(phis);
        if (up.value > 1e-12) best = std::max(best, paired / up.value);
      }
      if (paired <= prev + 1e-10 * std::max(1.0, paired)) break;
      prev = paired;

      // Gradient of the pairing sum with the weak-norm attaining direction
      // projected out, then a step on directions (even) or profiles (odd).
      double eta = 0.1 * std::pow(0.9, it / 50);
      for (int i = 0; i < m; ++i) {
        double a = pairing(phis.items[i], seq.items[i]);
        double sg = a >= 0 ? 1.0 : -1.0;
        double ti = pairing(w.attaining, phis.items[i]);
        double wp = psv == 1.0 ? (ti > 0 ? 1.0 : (ti < 0 ? -1.0 : 0.0))
                               : std::pow(std::fabs(ti), psv - 1.0) * (ti >= 0 ? 1.0 : -1.0);
        if (it % 2 == 0) {
          for (int j = 0; j < d; ++j)
            phis.items[i][j] += eta * (sg * seq.items[i][j] / std::max(1e-12, paired) -
                                       wp * w.attaining[j]);
        } else {
          double np = norm(Ed, phis.items[i]);
          if (np <= 1e-12) continue;
          double dir = 0.0;
          for (int j = 0; j < d; ++j)
            dir += (sg * seq.items[i][j] / std::max(1e-12, paired) - wp * w.attaining[j]) *
                   phis.items[i][j] / np;
          for (int j = 0; j < d; ++j) phis.items[i][j] *= std::max(0.0, 1.0 + eta * dir / np);
        }
      }
    }
  }
  return {best, NormMethod::ascent, true};
}

}  // namespace sumlab
