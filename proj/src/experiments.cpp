#include "sumlab/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "sumlab/rng.hpp"
#include "sumlab/serialize.hpp"

namespace sumlab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::consistent:
      return "consistent";
    case Verdict::inconsistent:
      return "inconsistent";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

AscentCfg Budgets::ascent_cfg() const {
  AscentCfg a;
  a.starts = starts;
  a.iters = iters;
  a.m_max = m_max;
  return a;
}

RefineCfg Budgets::refine_cfg() const {
  RefineCfg r;
  r.max_rounds = refine_rounds;
  r.atom_budget = atom_budget;
  r.grid_resolution = grid_resolution;
  r.ascent = ascent_cfg();
  return r;
}

namespace {

BracketRow row_from(const ConstantEstimate& est) {
  BracketRow row;
  row.scheme = est.scheme.name();
  row.lower = est.lower;
  row.lower_rigorous = est.lower_rigorous;
  row.upper = est.upper;
  row.upper_certified = est.upper_certified;
  row.lp_value = est.lp_value;
  row.converged = est.converged;
  row.witness_length = static_cast<int>(est.best_witness.phis.items.size());
  return row;
}

// Every row brackets the same constant, so each lower bound must sit under
// each upper bound.  A violation between a rigorous lower and a certified
// upper is a hard inconsistency; heuristic violations stay inconclusive.
Verdict cross_consistency(const std::vector<BracketRow>& rows, double tol, std::string* note) {
  Verdict v = Verdict::consistent;
  for (const BracketRow& lo : rows) {
    for (const BracketRow& up : rows) {
      if (lo.lower <= up.upper * (1.0 + tol)) continue;
      if (lo.lower_rigorous && up.upper_certified) {
        *note = "lower bound for " + lo.scheme + " exceeds the certified constant for " +
                up.scheme;
        return Verdict::inconsistent;
      }
      v = Verdict::inconclusive;
      *note = "bracket overlap failed between " + lo.scheme + " and " + up.scheme +
              " but one side is heuristic";
    }
  }
  return v;
}

Report base_report(const char* experiment, const AnyOp& op, const Budgets& budgets,
                   uint64_t seed) {
  Report rep;
  rep.experiment = experiment;
  rep.operator_label = label_of(op);
  rep.operator_digest = operator_digest(op);
  rep.seed = seed;
  rep.budgets = budgets;
  return rep;
}

}  // namespace

Report coincidence(const AnyOp& op, const Exponent& p,
                   const std::vector<std::pair<Exponent, Exponent>>& pairs, const Budgets& budgets,
                   uint64_t seed) {
  if (p.is_one()) throw input_error("the coincidence study needs p > 1");
  if (arity(op) != 1) throw input_error("the coincidence study takes a linear operator");

  std::vector<std::pair<Exponent, Exponent>> all = pairs;
  bool has_canonical = false;
  for (const auto& pr : all)
    if (pr.first.is_one() && pr.second.same(p)) has_canonical = true;
  if (!has_canonical) all.insert(all.begin(), {Exponent::rational(1, 1), p});

  std::string pair_desc;
  for (const auto& pr : all) {
    PairAdmissibility gc = admissible_pair(p, pr.first, pr.second);
    if (!gc.member)
      throw input_error("pair (" + pr.first.str() + ", " + pr.second.str() +
                        ") does not satisfy the membership identity for p = " + p.str());
    if (!pair_desc.empty()) pair_desc += ";";
    pair_desc += pr.first.str() + "," + pr.second.str();
  }

  Report rep = base_report("coincidence", op, budgets, seed);
  rep.params = {{"p", p.str()}, {"pairs", pair_desc}};
  for (size_t i = 0; i < all.size(); ++i) {
    ExponentScheme sch = ExponentScheme::linear(p, all[i].first, all[i].second);
    ConstantEstimate est = refine(op, sch, budgets.refine_cfg(), mix_seed(seed, 0xc01, i));
    rep.brackets.push_back(row_from(est));
  }
  rep.verdict = cross_consistency(rep.brackets, budgets.tol, &rep.note);
  return rep;
}

Report multi_equivalence(const AnyOp& op, const Exponent& p, std::vector<ExponentScheme> schemes,
                         const Budgets& budgets, uint64_t seed) {
  const int n = arity(op);
  if (n < 2) throw input_error("the equivalence study takes a multilinear operator");
  if (schemes.empty()) {
    schemes.push_back(ExponentScheme::joint(p, n));
    schemes.push_back(ExponentScheme::separate(p, n));
    // Asymmetric split with the same inverse sum: the first slot carries
    // twice the weight of the others, so sum_j 1/q_j = 1/p still holds.
    std::vector<Exponent> qs;
    for (int j = 0; j < n; ++j) {
      int w = j == 0 ? 2 : 1;
      if (p.is_inf())
        qs.push_back(Exponent::infinity());
      else if (p.is_rational())
        qs.push_back(Exponent::rational(p.num() * (n + 1), p.den() * w));
      else
        qs.push_back(Exponent::from_double(p.value() * (n + 1) / w));
    }
    schemes.push_back(ExponentScheme::general(p, Exponent::rational(1, 1), qs));
  }

  std::string names;
  for (const ExponentScheme& s : schemes) {
    if (s.arity != n) throw input_error("scheme arity does not match operator");
    if (!names.empty()) names += ";";
    names += s.name();
  }

  Report rep = base_report("multi-equivalence", op, budgets, seed);
  rep.params = {{"p", p.str()}, {"schemes", names}};
  for (size_t i = 0; i < schemes.size(); ++i) {
    ConstantEstimate est = refine(op, schemes[i], budgets.refine_cfg(), mix_seed(seed, 0x3e, i));
    rep.brackets.push_back(row_from(est));
  }
  rep.verdict = cross_consistency(rep.brackets, budgets.tol, &rep.note);
  return rep;
}

Report triviality_probe(const AnyOp& op, const Exponent& p, const Exponent& q0,
                        const Exponent& q1, const std::vector<int>& lengths,
                        const Budgets& budgets, uint64_t seed) {
  PairAdmissibility gc = admissible_pair(p, q0, q1);
  if (!gc.member)
    throw input_error("(" + q0.str() + ", " + q1.str() +
                      ") does not satisfy the membership identity for p = " + p.str());
  if (!gc.triviality_zone)
    throw input_error("the probe only applies inside the disputed zone p < q1");
  if (lengths.empty()) throw input_error("the probe needs at least one witness length");

  ExponentScheme sch = ExponentScheme::linear(p, q0, q1);
  Report rep = base_report("triviality-probe", op, budgets, seed);
  std::string ls;
  for (int m : lengths) ls += (ls.empty() ? "" : ",") + std::to_string(m);
  rep.params = {{"p", p.str()}, {"q0", q0.str()}, {"q1", q1.str()}, {"lengths", ls}};

  AscentCfg acfg = budgets.ascent_cfg();
  bool trend_rigorous = true;
  for (int m : lengths) {
    if (m < 1) throw input_error("witness lengths must be positive");
    bool rig = true;
    double val = best_ratio_at_length(op, sch, m, acfg, mix_seed(seed, 0x77e, m), nullptr, &rig);
    trend_rigorous = trend_rigorous && rig;
    rep.trend.push_back({m, val});
    rep.max_ratio = std::max(rep.max_ratio, val);
  }

  ConstantEstimate est = refine(op, sch, budgets.refine_cfg(), mix_seed(seed, 0x77f));
  rep.brackets.push_back(row_from(est));
  rep.trend_upper = est.upper;
  rep.trend_bounded = rep.max_ratio <= est.upper * (1.0 + budgets.tol);

  if (rep.trend_bounded) {
    rep.verdict = Verdict::inconclusive;
    rep.note = "witness ratios stay bounded by the estimated constant at these lengths; "
               "this supports the nontrivial reading but proves nothing";
  } else if (trend_rigorous && est.upper_certified) {
    rep.verdict = Verdict::inconsistent;
    rep.note = "a rigorous witness ratio exceeds the certified constant";
  } else {
    rep.verdict = Verdict::inconclusive;
    rep.note = "witness ratios exceed the estimated constant but one side is heuristic";
  }
  return rep;
}

Report holder_factor_check(const Exponent& p, const Exponent& q0, const Exponent& q1, long trials,
                           uint64_t seed) {
  const Exponent ps = p.conjugate();
  if (!inverse_sum_matches(q0, {q1, ps}))
    throw input_error("exponents fail the inverse-sum identity 1/q0 = 1/q1 + 1/p*");
  if (trials < 1) throw input_error("at least one trial is required");

  Report rep;
  rep.experiment = "holder-check";
  rep.seed = seed;
  rep.params = {{"p", p.str()}, {"q0", q0.str()}, {"q1", q1.str()}};
  rep.trials = trials;

  const int sizes[] = {16, 64, 256, 1024, 4096, 10000};
  for (long t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, 0x401d, static_cast<uint64_t>(t)));
    int len = sizes[rng.below(6)];
    auto draw = [&](std::vector<double>& v) {
      v.assign(len, 0.0);
      switch (rng.below(4)) {
        case 0:  // iid uniform
          for (double& x : v) x = 2.0 * rng.unit() - 1.0;
          break;
        case 1: {  // power decay
          double s = 0.55 + rng.unit() * 2.45;
          for (int i = 0; i < len; ++i)
            v[i] = std::pow(i + 1.0, -s) * (rng.below(2) ? 1.0 : -1.0);
          break;
        }
        case 2: {  // geometric decay
          double r = 0.1 + rng.unit() * 0.85;
          double cur = 1.0;
          for (int i = 0; i < len; ++i) {
            v[i] = cur * (rng.below(2) ? 1.0 : -1.0);
            cur *= r;
          }
          break;
        }
        default: {  // sparse
          int nz = 1 + static_cast<int>(rng.below(16));
          for (int k = 0; k < nz; ++k) v[rng.below(len)] = 2.0 * rng.unit() - 1.0;
          break;
        }
      }
    };
    std::vector<double> a, b;
    draw(a);
    draw(b);
    std::vector<double> prod(len), aa(len), bb(len);
    for (int i = 0; i < len; ++i) {
      prod[i] = std::fabs(a[i] * b[i]);
      aa[i] = std::fabs(a[i]);
      bb[i] = std::fabs(b[i]);
    }
    double den = pow_mean(aa, ps) * pow_mean(bb, q1);
    if (den <= 1e-300) continue;
    rep.max_ratio = std::max(rep.max_ratio, pow_mean(prod, q0) / den);
  }

  if (rep.max_ratio <= 1.0 + 1e-9) {
    rep.verdict = Verdict::consistent;
    rep.note = "no quotient exceeded 1 beyond roundoff";
  } else {
    rep.verdict = Verdict::inconsistent;
    rep.note = "a random pair violated the factorization inequality";
  }
  return rep;
}

}  // namespace sumlab
