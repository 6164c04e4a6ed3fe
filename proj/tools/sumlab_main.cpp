// Command-line frontend: load operators or sequences from JSON, run the
// norm evaluators, constant brackets, domination certificates, and the
// bundled studies, and write report files under --out.
//
// Exit codes: 0 success, 1 usage, 2 bad input, 3 an experiment returned an
// inconsistent verdict (the report is still written first), 4 numerical
// failure.
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sumlab/serialize.hpp"

namespace {

using namespace sumlab;

struct Globals {
  uint64_t seed = 1;
  Budgets budgets;
  std::string out = ".";
  std::string label;
};

void add_globals(CLI::App* cmd, Globals& g) {
  cmd->add_option("--seed", g.seed, "seed for all stochastic searches");
  cmd->add_option("--budget", g.budgets.starts, "multistart budget for ascent searches");
  cmd->add_option("--m-max", g.budgets.m_max, "largest witness family length searched");
  cmd->add_option("--atoms", g.budgets.atom_budget, "measure atom sample size");
  cmd->add_option("--grid", g.budgets.grid_resolution,
                  "dual sphere grid resolution (0 = dimension default)");
  cmd->add_option("--tol", g.budgets.tol, "relative slack for bracket cross-checks");
  cmd->add_option("--out", g.out, "directory that receives reports/");
  cmd->add_option("--label", g.label, "report file stem (defaults to the operator label)");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find(sep, start);
    if (end == std::string::npos) end = s.size();
    parts.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

std::vector<std::pair<Exponent, Exponent>> parse_pairs(const std::string& text) {
  std::vector<std::pair<Exponent, Exponent>> out;
  for (const std::string& chunk : split(text, ';')) {
    if (chunk.empty()) continue;
    std::vector<std::string> qs = split(chunk, ',');
    if (qs.size() != 2) throw input_error("each pair must be q0,q1 (pairs separated by ';')");
    out.push_back({Exponent::parse(qs[0]), Exponent::parse(qs[1])});
  }
  if (out.empty()) throw input_error("no exponent pairs given");
  return out;
}

std::vector<int> parse_lengths(const std::string& text) {
  std::vector<int> out;
  for (const std::string& chunk : split(text, ',')) {
    if (chunk.empty()) continue;
    try {
      out.push_back(std::stoi(chunk));
    } catch (const std::exception&) {
      throw input_error("witness lengths must be integers");
    }
  }
  return out;
}

Report single_bracket_report(const char* experiment, const AnyOp& op, const ExponentScheme& sch,
                             const ConstantEstimate& est, const Globals& g) {
  Report rep;
  rep.experiment = experiment;
  rep.operator_label = label_of(op);
  rep.operator_digest = operator_digest(op);
  rep.seed = g.seed;
  rep.budgets = g.budgets;
  rep.params = {{"p", sch.p.str()}, {"scheme", sch.name()}};
  BracketRow row;
  row.scheme = sch.name();
  row.lower = est.lower;
  row.lower_rigorous = est.lower_rigorous;
  row.upper = est.upper;
  row.upper_certified = est.upper_certified;
  row.lp_value = est.lp_value;
  row.converged = est.converged;
  row.witness_length = static_cast<int>(est.best_witness.phis.items.size());
  rep.brackets.push_back(row);
  if (row.lower <= row.upper * (1.0 + g.budgets.tol)) {
    rep.verdict = Verdict::consistent;
  } else if (row.lower_rigorous && row.upper_certified) {
    rep.verdict = Verdict::inconsistent;
    rep.note = "the lower bound exceeds the certified constant";
  } else {
    rep.verdict = Verdict::inconclusive;
    rep.note = "the bracket did not close but one side is heuristic";
  }
  return rep;
}

int finish(const Report& rep, const Globals& g) {
  std::filesystem::path path = write_report(rep, g.out, g.label);
  ordered_json line{{"experiment", rep.experiment},
                    {"verdict", verdict_name(rep.verdict)},
                    {"report", path.string()}};
  if (!rep.note.empty()) line["note"] = rep.note;
  std::cout << line.dump() << "\n";
  return rep.verdict == Verdict::inconsistent ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bracket summing constants of operators between finite l_q spaces"};
  app.require_subcommand(1);

  Globals g;

  auto* norm_cmd = app.add_subcommand("norm", "evaluate a sequence norm");
  std::string norm_kind, norm_p = "2", norm_file;
  norm_cmd->add_option("--kind", norm_kind, "strong | weak | cohen")->required();
  norm_cmd->add_option("--p", norm_p, "summing exponent");
  norm_cmd->add_option("file", norm_file, "sequence JSON file")->required();
  add_globals(norm_cmd, g);

  auto* const_cmd = app.add_subcommand("constant", "bracket the summing constant of an operator");
  std::string c_p, c_q0, c_q1, c_tuple, c_file;
  const_cmd->add_option("--p", c_p, "summing exponent")->required();
  auto* c_q0_opt = const_cmd->add_option("--q0", c_q0, "outer exponent (linear scheme)");
  auto* c_q1_opt = const_cmd->add_option("--q1", c_q1, "argument exponent (linear scheme)");
  auto* c_joint = const_cmd->add_flag("--joint", "joint product scheme (multilinear)");
  auto* c_sep = const_cmd->add_flag("--separate", "per-slot scheme (multilinear)");
  auto* c_tup =
      const_cmd->add_option("--q-tuple", c_tuple, "q0,q_1,..,q_n for the general scheme");
  c_joint->excludes(c_sep, c_tup, c_q0_opt, c_q1_opt);
  c_sep->excludes(c_tup, c_q0_opt, c_q1_opt);
  c_tup->excludes(c_q0_opt, c_q1_opt);
  const_cmd->add_option("file", c_file, "operator JSON file")->required();
  add_globals(const_cmd, g);

  auto* dom_cmd = app.add_subcommand("dominate", "fit and validate a domination certificate");
  std::string d_p = "2", d_file;
  dom_cmd->add_option("--p", d_p, "summing exponent");
  dom_cmd->add_option("file", d_file, "operator JSON file")->required();
  add_globals(dom_cmd, g);

  auto* coin_cmd =
      app.add_subcommand("verify-coincidence", "cross-check brackets over admissible pairs");
  std::string v_p = "2", v_pairs = "1,2;4/3,4;8/7,8/3", v_file;
  coin_cmd->add_option("--p", v_p, "summing exponent");
  coin_cmd->add_option("--pairs", v_pairs, "q0,q1 pairs separated by ';'");
  coin_cmd->add_option("file", v_file, "operator JSON file")->required();
  add_globals(coin_cmd, g);

  auto* multi_cmd = app.add_subcommand("multi-equivalence",
                                       "cross-check joint, separate, and general schemes");
  std::string m_p = "2", m_file;
  multi_cmd->add_option("--p", m_p, "summing exponent");
  multi_cmd->add_option("file", m_file, "multilinear operator JSON file")->required();
  add_globals(multi_cmd, g);

  auto* triv_cmd = app.add_subcommand(
      "adjudicate-triviality", "probe witness ratio growth inside the disputed p < q1 zone");
  std::string t_p, t_q0, t_q1, t_lengths = "1,2,3,4,6,8", t_file;
  triv_cmd->add_option("--p", t_p, "summing exponent")->required();
  triv_cmd->add_option("--q0", t_q0, "outer exponent")->required();
  triv_cmd->add_option("--q1", t_q1, "argument exponent")->required();
  triv_cmd->add_option("--lengths", t_lengths, "witness lengths, comma separated");
  triv_cmd->add_option("file", t_file, "operator JSON file")->required();
  add_globals(triv_cmd, g);

  auto* hold_cmd = app.add_subcommand("holder-check",
                                      "random-sequence stress of the factorization inequality");
  std::string h_p, h_q0, h_q1;
  long h_trials = 1000;
  hold_cmd->add_option("--p", h_p, "summing exponent")->required();
  hold_cmd->add_option("--q0", h_q0, "product exponent")->required();
  hold_cmd->add_option("--q1", h_q1, "second factor exponent")->required();
  hold_cmd->add_option("--trials", h_trials, "number of random pairs");
  add_globals(hold_cmd, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (norm_cmd->parsed()) {
      VecSequence seq = sequence_from_json(load_json_file(norm_file));
      Exponent p = Exponent::parse(norm_p);
      NormEstimate est;
      if (norm_kind == "strong") {
        est = strong_norm(seq, p);
      } else if (norm_kind == "weak") {
        WeakCfg cfg;
        cfg.starts = g.budgets.starts;
        cfg.seed = g.seed;
        est = weak_norm(seq, p, cfg);
      } else if (norm_kind == "cohen") {
        CohenCfg cfg;
        cfg.seed = g.seed;
        cfg.oracle_resolution = g.budgets.grid_resolution;
        est = cohen_norm(seq, p, cfg);
      } else {
        throw input_error("norm kind must be strong, weak, or cohen");
      }
      ordered_json line{{"kind", norm_kind},
                        {"p", p.str()},
                        {"value", est.value},
                        {"method", norm_method_name(est.method)},
                        {"lower_bound_only", est.lower_bound_only}};
      std::cout << line.dump() << "\n";
      return 0;
    }

    if (const_cmd->parsed()) {
      AnyOp op = op_from_json(load_json_file(c_file));
      Exponent p = Exponent::parse(c_p);
      const int n = arity(op);
      ExponentScheme sch = ExponentScheme::summing(p);
      if (!c_tuple.empty()) {
        std::vector<std::string> parts = split(c_tuple, ',');
        if (static_cast<int>(parts.size()) != n + 1)
          throw input_error("--q-tuple needs q0 plus one exponent per operator slot");
        Exponent q0 = Exponent::parse(parts[0]);
        std::vector<Exponent> qs;
        for (size_t i = 1; i < parts.size(); ++i) qs.push_back(Exponent::parse(parts[i]));
        std::vector<Exponent> rhs = qs;
        rhs.push_back(p.conjugate());
        if (!inverse_sum_matches(q0, rhs))
          throw input_error("the exponent tuple fails the membership identity "
                            "1/q0 = sum_j 1/q_j + 1/p*");
        sch = ExponentScheme::general(p, q0, qs);
      } else if (c_joint->count()) {
        if (n < 2) throw input_error("--joint needs a multilinear operator");
        sch = ExponentScheme::joint(p, n);
      } else if (c_sep->count()) {
        if (n < 2) throw input_error("--separate needs a multilinear operator");
        sch = ExponentScheme::separate(p, n);
      } else if (!c_q0.empty() || !c_q1.empty()) {
        if (c_q0.empty() || c_q1.empty()) throw input_error("--q0 and --q1 go together");
        if (n != 1) throw input_error("--q0/--q1 define a linear scheme");
        Exponent q0 = Exponent::parse(c_q0);
        Exponent q1 = Exponent::parse(c_q1);
        if (!admissible_pair(p, q0, q1).member)
          throw input_error("(" + q0.str() + ", " + q1.str() +
                            ") is not an admissible pair for p = " + p.str() +
                            " (needs 1/q0 = 1/q1 + 1/p*)");
        sch = ExponentScheme::linear(p, q0, q1);
      } else if (n > 1) {
        sch = ExponentScheme::joint(p, n);
      }
      ConstantEstimate est = refine(op, sch, g.budgets.refine_cfg(), g.seed);
      Report rep = single_bracket_report("constant", op, sch, est, g);
      std::filesystem::path path = write_report(rep, g.out, g.label);
      ordered_json line{{"scheme", sch.name()},     {"lower", est.lower},
                        {"upper", est.upper},       {"lp_value", est.lp_value},
                        {"converged", est.converged}, {"report", path.string()}};
      std::cout << line.dump() << "\n";
      return rep.verdict == Verdict::inconsistent ? 3 : 0;
    }

    if (dom_cmd->parsed()) {
      AnyOp op = op_from_json(load_json_file(d_file));
      Exponent p = Exponent::parse(d_p);
      const int n = arity(op);
      ExponentScheme sch =
          n == 1 ? ExponentScheme::summing(p) : ExponentScheme::joint(p, n);
      ConstantEstimate est = refine(op, sch, g.budgets.refine_cfg(), g.seed);
      Report rep = single_bracket_report("dominate", op, sch, est, g);
      ordered_json payload = report_payload(rep);
      payload["certificate"] = certificate_to_json(est.certificate);
      std::string stem = g.label.empty() ? rep.operator_label : g.label;
      std::filesystem::path path = write_document(payload, rep.experiment, stem, g.out);
      ordered_json line{{"constant", est.upper},
                        {"certified", est.upper_certified},
                        {"atoms_used", est.certificate.atoms.points.size()},
                        {"report", path.string()}};
      std::cout << line.dump() << "\n";
      return rep.verdict == Verdict::inconsistent ? 3 : 0;
    }

    if (coin_cmd->parsed()) {
      AnyOp op = op_from_json(load_json_file(v_file));
      Report rep = coincidence(op, Exponent::parse(v_p), parse_pairs(v_pairs), g.budgets, g.seed);
      return finish(rep, g);
    }

    if (multi_cmd->parsed()) {
      AnyOp op = op_from_json(load_json_file(m_file));
      Report rep = multi_equivalence(op, Exponent::parse(m_p), {}, g.budgets, g.seed);
      return finish(rep, g);
    }

    if (triv_cmd->parsed()) {
      AnyOp op = op_from_json(load_json_file(t_file));
      Report rep = triviality_probe(op, Exponent::parse(t_p), Exponent::parse(t_q0),
                                    Exponent::parse(t_q1), parse_lengths(t_lengths), g.budgets,
                                    g.seed);
      return finish(rep, g);
    }

    if (hold_cmd->parsed()) {
      Report rep = holder_factor_check(Exponent::parse(h_p), Exponent::parse(h_q0),
                                       Exponent::parse(h_q1), h_trials, g.seed);
      return finish(rep, g);
    }
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
