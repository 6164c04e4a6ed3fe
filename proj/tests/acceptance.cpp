// Acceptance gate: one line per criterion, exit 0 only if every criterion
// holds.  Tolerances are pinned here, next to the checks they govern, so a
// regression cannot be absorbed by a config change.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "sumlab/rng.hpp"
#include "sumlab/serialize.hpp"

using namespace sumlab;

namespace {

Exponent ex(const char* s) { return Exponent::parse(s); }

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

LinearOp identity2() {
  LinearOp op;
  op.domain = {2, ex("2")};
  op.codomain = {2, ex("2")};
  op.matrix = {1, 0, 0, 1};
  op.label = "id2";
  return op;
}

LinearOp rank_one_linear() {
  LinearOp op;
  op.domain = {2, ex("2")};
  op.codomain = {2, ex("2")};
  op.matrix = {1, 0, 0, 0};
  op.label = "rankone";
  return op;
}

MultilinearOp rank_one_bilinear() {
  MultilinearOp op;
  op.domains = {{2, ex("2")}, {2, ex("2")}};
  op.codomain = {2, ex("2")};
  op.tensor = {1, 0, 0, 0, 0, 0, 0, 0};  // (x, y) -> x1 y1 e1
  op.label = "rankone2";
  return op;
}

// Shared corpus for criteria 1 and 2: seeded sequences over spaces whose
// weak norm has a closed-form route, dims 1..3, lengths 1..4.
struct CorpusCase {
  VecSequence seq;
  Exponent p;
};

std::vector<CorpusCase> norm_corpus() {
  const char* qs[] = {"1", "2", "inf"};
  const char* ps[] = {"3/2", "2", "3"};
  std::vector<CorpusCase> corpus;
  for (int i = 0; i < 50; ++i) {
    Rng rng(mix_seed(0xACC0, i));
    int dim = 1 + static_cast<int>(rng.below(3));
    VecSequence seq;
    Exponent q = ex(qs[rng.below(3)]);
    seq.space = {dim, q};
    int m = 1 + static_cast<int>(rng.below(4));
    for (int k = 0; k < m; ++k) {
      Vec x(dim);
      for (double& t : x) t = rng.gaussian();
      seq.items.push_back(x);
    }
    // The Euclidean dual ball only has a closed-form route at p = 2
    // (spectral); the polytope duals enumerate for every p.
    Exponent p = q.same(ex("2")) ? ex("2") : ex(ps[rng.below(3)]);
    corpus.push_back({seq, p});
  }
  return corpus;
}

// Pinned budgets for the bracket-based criteria.
Budgets gate_budgets() {
  Budgets b;
  b.starts = 16;
  b.iters = 120;
  b.m_max = 4;
  return b;
}

SpaceSpec random_gate_space(Rng& rng) {
  const char* qs[] = {"4/3", "3/2", "2", "3", "4"};
  return {1 + static_cast<int>(rng.below(3)), ex(qs[rng.below(5)])};
}

bool overlap_ok(const std::vector<BracketRow>& rows, double tol) {
  for (const BracketRow& a : rows)
    for (const BracketRow& b : rows)
      if (a.lower > b.upper * (1.0 + tol)) return false;
  return true;
}

}  // namespace

int main() {
  int failures = 0;
  auto run = [&](int id, const char* name, auto&& body) {
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", id, name,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  };

  std::vector<CorpusCase> corpus = norm_corpus();

  run(1, "closed-form weak norms match the grid oracle on 50 seeded sequences", [&](std::string& d) {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const CorpusCase& c : corpus) {
      NormEstimate exact = weak_norm(c.seq, c.p);
      if (exact.lower_bound_only) {
        d = "a corpus case missed the closed-form weak route";
        return false;
      }
      int res = c.seq.space.dim >= 3 ? 256 : 720;
      NormEstimate oracle = grid_oracle(OracleKind::weak, c.seq, c.p, res);
      if (exact.value < 1e-12) continue;
      // The grid maximum never exceeds the sup it samples.
      if (oracle.value > exact.value * (1.0 + 1e-9)) {
        d = fmt("oracle %.6f above exact %.6f", oracle.value, exact.value);
        return false;
      }
      worst = std::max(worst, (exact.value - oracle.value) / exact.value);
    }
    double secs = elapsed_s(t0);
    if (worst > 0.02) {
      d = fmt("worst relative deviation %.4f > 0.02", worst);
      return false;
    }
    if (secs > 60.0) {
      d = fmt("runtime %.1fs > 60s", secs);
      return false;
    }
    d = fmt("worst deviation %.4f, %.1fs", worst, secs);
    return true;
  });

  run(2, "norm chain weak <= strong <= cohen plus the collinear product law", [&](std::string& d) {
    for (const CorpusCase& c : corpus) {
      double w = weak_norm(c.seq, c.p).value;
      double s = strong_norm(c.seq, c.p).value;
      double coh = grid_oracle(OracleKind::cohen, c.seq, c.p).value;
      if (s - w < -1e-9 || coh - s < -1e-9) {
        d = fmt("chain slack %.2e / %.2e below -1e-9", s - w, coh - s);
        return false;
      }
    }
    const char* qs[] = {"1", "3/2", "2", "3", "inf"};
    const char* ps[] = {"3/2", "2", "3"};
    for (int i = 0; i < 20; ++i) {
      Rng rng(mix_seed(0xACC2, i));
      int dim = 1 + static_cast<int>(rng.below(3));
      SpaceSpec sp{dim, ex(qs[rng.below(5)])};
      Vec x(dim);
      for (double& t : x) t = rng.gaussian();
      int m = 1 + static_cast<int>(rng.below(5));
      Exponent p = ex(ps[rng.below(3)]);
      VecSequence seq;
      seq.space = sp;
      std::vector<double> lambda;
      for (int k = 0; k < m; ++k) {
        double lk = rng.uniform(-2.0, 2.0);
        lambda.push_back(std::fabs(lk));
        Vec xi = x;
        for (double& t : xi) t *= lk;
        seq.items.push_back(xi);
      }
      double want = pow_mean(lambda, p) * norm(sp, x);
      double got = cohen_norm(seq, p).value;
      if (want > 1e-12 && std::fabs(got - want) > 0.02 * want) {
        d = fmt("collinear law got %.6f want %.6f", got, want);
        return false;
      }
    }
    return true;
  });

  ExponentScheme d2 = ExponentScheme::summing(ex("2"));
  RefineCfg gate_refine = gate_budgets().refine_cfg();

  run(3, "brackets are valid and mostly tight on 20 random operators", [&](std::string& d) {
    int tight = 0;
    double worst_violation = -1e300;
    for (int i = 0; i < 20; ++i) {
      Rng rng(mix_seed(0xACC3, i));
      LinearOp op = random_linear(random_gate_space(rng), random_gate_space(rng),
                                  mix_seed(0xACC3, i, 1));
      ConstantEstimate est = refine(AnyOp{op}, d2, gate_refine, mix_seed(0xACC3, i, 2));
      worst_violation = std::max(worst_violation, est.lower - est.upper);
      if (est.lower > est.upper + 1e-6) {
        d = fmt("lower %.6f above upper %.6f", est.lower, est.upper);
        return false;
      }
      if (std::isfinite(est.upper) && est.upper > 0 &&
          (est.upper - est.lower) <= 0.10 * est.upper)
        ++tight;
    }
    if (tight < 16) {
      d = fmt("only %.0f/20 brackets closed to 10%%", static_cast<double>(tight));
      return false;
    }
    d = fmt("%.0f/20 within 10%%, max lower-upper %.2e", static_cast<double>(tight),
            worst_violation);
    return true;
  });

  run(4, "anchors: identity sqrt(2), rank-one operator norm, zero operator", [&](std::string& d) {
    const double root2 = std::sqrt(2.0);
    ConstantEstimate id = refine(AnyOp{identity2()}, d2, gate_refine, 1);
    if (std::fabs(id.lower - root2) > 0.05 * root2 ||
        std::fabs(id.upper - root2) > 0.05 * root2) {
      d = fmt("identity bracket [%.4f, %.4f] off sqrt(2)", id.lower, id.upper);
      return false;
    }
    for (int i = 0; i < 5; ++i) {
      Rng rng(mix_seed(0xACC4, i));
      SpaceSpec E = random_gate_space(rng);
      SpaceSpec F = random_gate_space(rng);
      Vec v(E.dim), u(F.dim);
      for (double& t : v) t = rng.gaussian();
      for (double& t : u) t = rng.gaussian();
      LinearOp op;
      op.domain = E;
      op.codomain = F;
      op.matrix.assign(static_cast<size_t>(E.dim) * F.dim, 0.0);
      for (int r = 0; r < F.dim; ++r)
        for (int c = 0; c < E.dim; ++c) op.matrix[static_cast<size_t>(r) * E.dim + c] = u[r] * v[c];
      op.label = "rankone";
      double want = norm(dual(E), v) * norm(F, u);
      ConstantEstimate est = refine(AnyOp{op}, d2, gate_refine, mix_seed(0xACC4, i, 1));
      if (std::fabs(est.lower - want) > 0.05 * want || std::fabs(est.upper - want) > 0.05 * want) {
        d = fmt("rank-one bracket [%.4f, %.4f] off the operator norm", est.lower, est.upper);
        return false;
      }
    }
    LinearOp zero;
    zero.domain = {2, ex("2")};
    zero.codomain = {2, ex("2")};
    zero.matrix = {0, 0, 0, 0};
    zero.label = "zero";
    ConstantEstimate z = refine(AnyOp{zero}, d2, gate_refine, 1);
    if (z.lower != 0.0 || z.upper != 0.0) {
      d = fmt("zero operator bracket [%.2e, %.2e]", z.lower, z.upper);
      return false;
    }
    return true;
  });

  run(5, "admissible-pair brackets agree on 10 random operators", [&](std::string& d) {
    std::vector<std::pair<Exponent, Exponent>> pairs = {{ex("4/3"), ex("4")},
                                                        {ex("8/7"), ex("8/3")}};
    for (int i = 0; i < 10; ++i) {
      Rng rng(mix_seed(0xACC5, i));
      LinearOp op = random_linear(random_gate_space(rng), random_gate_space(rng),
                                  mix_seed(0xACC5, i, 1));
      Report rep = coincidence(AnyOp{op}, ex("2"), pairs, gate_budgets(), mix_seed(0xACC5, i, 2));
      if (rep.verdict != Verdict::consistent || !overlap_ok(rep.brackets, 0.05)) {
        d = "operator " + std::to_string(i) + " verdict " + verdict_name(rep.verdict);
        return false;
      }
    }
    return true;
  });

  run(6, "joint, per-slot, and general schemes agree on 5 random bilinear maps",
      [&](std::string& d) {
        std::vector<ExponentScheme> schemes = {
            ExponentScheme::joint(ex("2"), 2),
            ExponentScheme::separate(ex("2"), 2),
            ExponentScheme::general(ex("2"), ex("1"), {ex("4"), ex("4")}),
        };
        SpaceSpec l22{2, ex("2")};
        for (int i = 0; i < 5; ++i) {
          MultilinearOp op = random_multilinear({l22, l22}, l22, mix_seed(0xACC6, i));
          Report rep = multi_equivalence(AnyOp{op}, ex("2"), schemes, gate_budgets(),
                                         mix_seed(0xACC6, i, 1));
          if (rep.verdict != Verdict::consistent || !overlap_ok(rep.brackets, 0.05)) {
            d = "map " + std::to_string(i) + " verdict " + verdict_name(rep.verdict);
            return false;
          }
        }
        ConstantEstimate anchor = refine(AnyOp{rank_one_bilinear()},
                                         ExponentScheme::joint(ex("2"), 2), gate_refine, 1);
        if (std::fabs(anchor.lower - 1.0) > 0.05 || std::fabs(anchor.upper - 1.0) > 0.05) {
          d = fmt("rank-one bilinear bracket [%.4f, %.4f] off 1", anchor.lower, anchor.upper);
          return false;
        }
        return true;
      });

  run(7, "factor inequality over 1000 trials and a bounded-trend probe", [&](std::string& d) {
    Report hold = holder_factor_check(ex("2"), ex("4/3"), ex("4"), 1000, 0xACC7);
    if (hold.verdict != Verdict::consistent || hold.max_ratio > 1.0 + 1e-9) {
      d = fmt("max factor ratio %.12f", hold.max_ratio);
      return false;
    }
    Report probe = triviality_probe(AnyOp{rank_one_linear()}, ex("2"), ex("4/3"), ex("4"),
                                    {1, 2, 3, 4}, gate_budgets(), 0xACC7);
    if (!probe.trend_bounded || probe.verdict == Verdict::inconsistent) {
      d = "probe trend unbounded or verdict inconsistent";
      return false;
    }
    d = fmt("max ratio %.9f, trend high %.4f", hold.max_ratio, probe.max_ratio);
    return true;
  });

  run(8, "abstract engine reproduces the concrete routines bit for bit", [&](std::string& d) {
    LinearOp op = random_linear({2, ex("2")}, {2, ex("2")}, 0xACC8);
    ExponentScheme lin = ExponentScheme::linear(ex("2"), ex("4/3"), ex("4"));
    BallSample atoms = ball_points({2, ex("2")}, 360, 0xACC8);
    AbstractProblem prob = canonical_problem(AnyOp{op}, lin, atoms);

    AscentCfg quick;
    quick.starts = 6;
    quick.iters = 60;
    std::vector<std::vector<AbstractPoint>> families;
    std::vector<DominationPair> pool;
    double best = 0.0;
    for (int k = 0; k < 10; ++k) {
      SummingWitness w;
      best_ratio_at_length(AnyOp{op}, lin, 1 + k % 3, quick, mix_seed(0xACC8, k), &w);
      double value = ratio(AnyOp{op}, w, lin).value;
      std::vector<AbstractPoint> fam;
      for (size_t i = 0; i < w.phis.items.size(); ++i)
        fam.push_back({{w.xs[0].items[i]}, w.phis.items[i]});
      AbstractBounds one = abstract_bounds(prob, {fam});
      if (one.lower != value) {  // exact double equality
        d = fmt("family quotient %.17g differs from ratio %.17g", one.lower, value);
        return false;
      }
      best = std::max(best, value);
      families.push_back(fam);
      for (const AbstractPoint& pt : fam) pool.push_back({pt.slots, pt.phi});
    }
    AbstractBounds all = abstract_bounds(prob, families);
    FitResult fit = fit_certificate(AnyOp{op}, lin, atoms, pool);
    if (all.lower != best || all.lp_value != fit.lp_value) {  // exact double equality
      d = "pooled abstract run diverged from the concrete fit";
      return false;
    }

    // The certificate never sees (q0, q1): the canonical scheme at the
    // same p must validate to the same constant.
    FitResult fit2 = fit_certificate(AnyOp{op}, ExponentScheme::summing(ex("2")), atoms, pool);
    ValidationResult va = validate_certificate(AnyOp{op}, fit.cert, 0, 8, 0xACC8);
    ValidationResult vb = validate_certificate(AnyOp{op}, fit2.cert, 0, 8, 0xACC8);
    if (std::fabs(va.constant - vb.constant) > 1e-9) {
      d = fmt("validated constants %.12f vs %.12f", va.constant, vb.constant);
      return false;
    }
    return true;
  });

  run(9, "identical seeds produce byte-identical report payloads", [&](std::string& d) {
    Budgets small;
    small.starts = 6;
    small.iters = 40;
    small.m_max = 2;
    small.atom_budget = 180;
    std::vector<std::pair<Exponent, Exponent>> one_pair = {{ex("4/3"), ex("4")}};
    auto dump = [&](const Report& r) { return canonical_dump(report_payload(r)); };

    if (dump(coincidence(AnyOp{identity2()}, ex("2"), one_pair, small, 11)) !=
        dump(coincidence(AnyOp{identity2()}, ex("2"), one_pair, small, 11))) {
      d = "coincidence payload drifted";
      return false;
    }
    if (dump(multi_equivalence(AnyOp{rank_one_bilinear()}, ex("2"), {}, small, 12)) !=
        dump(multi_equivalence(AnyOp{rank_one_bilinear()}, ex("2"), {}, small, 12))) {
      d = "multilinear payload drifted";
      return false;
    }
    if (dump(triviality_probe(AnyOp{rank_one_linear()}, ex("2"), ex("4/3"), ex("4"), {1, 2},
                              small, 13)) !=
        dump(triviality_probe(AnyOp{rank_one_linear()}, ex("2"), ex("4/3"), ex("4"), {1, 2},
                              small, 13))) {
      d = "probe payload drifted";
      return false;
    }
    if (dump(holder_factor_check(ex("2"), ex("4/3"), ex("4"), 200, 14)) !=
        dump(holder_factor_check(ex("2"), ex("4/3"), ex("4"), 200, 14))) {
      d = "factor-check payload drifted";
      return false;
    }
    return true;
  });

  std::printf("%s\n", failures == 0 ? "acceptance: all criteria hold"
                                    : "acceptance: criteria failed");
  return failures == 0 ? 0 : 1;
}
