#include "sumlab/serialize.hpp"

#include <ctime>
#include <fstream>

namespace sumlab {

ordered_json space_to_json(const SpaceSpec& s) {
  return ordered_json{{"dim", s.dim}, {"exponent", s.exponent.str()}};
}

SpaceSpec space_from_json(const ordered_json& j) {
  SpaceSpec s{j.at("dim").get<int>(), Exponent::parse(j.at("exponent").get<std::string>())};
  validate(s);
  return s;
}

ordered_json op_to_json(const AnyOp& op) {
  if (std::holds_alternative<LinearOp>(op)) {
    const LinearOp& lo = std::get<LinearOp>(op);
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < lo.codomain.dim; ++r) {
      ordered_json row = ordered_json::array();
      for (int c = 0; c < lo.domain.dim; ++c) row.push_back(lo.matrix[r * lo.domain.dim + c]);
      rows.push_back(std::move(row));
    }
    return ordered_json{{"schema", "1"},
                        {"kind", "linear"},
                        {"domain", space_to_json(lo.domain)},
                        {"codomain", space_to_json(lo.codomain)},
                        {"matrix", std::move(rows)},
                        {"label", lo.label}};
  }
  const MultilinearOp& mo = std::get<MultilinearOp>(op);
  ordered_json doms = ordered_json::array();
  for (const SpaceSpec& d : mo.domains) doms.push_back(space_to_json(d));
  return ordered_json{{"schema", "1"},
                      {"kind", "multilinear"},
                      {"domains", std::move(doms)},
                      {"codomain", space_to_json(mo.codomain)},
                      {"tensor", mo.tensor},
                      {"label", mo.label}};
}

AnyOp op_from_json(const ordered_json& j) {
  if (j.value("schema", std::string("1")) != "1")
    throw input_error("unsupported operator file schema");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    LinearOp lo;
    lo.domain = space_from_json(j.at("domain"));
    lo.codomain = space_from_json(j.at("codomain"));
    for (const auto& row : j.at("matrix")) {
      if (static_cast<int>(row.size()) != lo.domain.dim)
        throw input_error("matrix row length does not match the domain dimension");
      for (const auto& v : row) lo.matrix.push_back(v.get<double>());
    }
    lo.label = j.value("label", std::string());
    validate(lo);
    return lo;
  }
  if (kind == "multilinear") {
    MultilinearOp mo;
    for (const auto& d : j.at("domains")) mo.domains.push_back(space_from_json(d));
    mo.codomain = space_from_json(j.at("codomain"));
    mo.tensor = j.at("tensor").get<std::vector<double>>();
    mo.label = j.value("label", std::string());
    validate(mo);
    return mo;
  }
  throw input_error("operator kind must be linear or multilinear");
}

ordered_json sequence_to_json(const VecSequence& seq) {
  ordered_json items = ordered_json::array();
  for (const Vec& v : seq.items) items.push_back(v);
  return ordered_json{
      {"schema", "1"}, {"space", space_to_json(seq.space)}, {"items", std::move(items)}};
}

VecSequence sequence_from_json(const ordered_json& j) {
  if (j.value("schema", std::string("1")) != "1")
    throw input_error("unsupported sequence file schema");
  VecSequence seq;
  seq.space = space_from_json(j.at("space"));
  for (const auto& v : j.at("items")) seq.items.push_back(v.get<Vec>());
  validate(seq);
  return seq;
}

namespace {

const char* sample_kind_name(SampleKind k) {
  return k == SampleKind::exact_extreme_points ? "extreme-points" : "sample";
}

SampleKind sample_kind_parse(const std::string& s) {
  if (s == "extreme-points") return SampleKind::exact_extreme_points;
  if (s == "sample") return SampleKind::heuristic_sample;
  throw input_error("unknown atom sample kind: " + s);
}

}  // namespace

ordered_json certificate_to_json(const DominationCertificate& cert) {
  ordered_json atoms = ordered_json::array();
  for (const Vec& v : cert.atoms.points) atoms.push_back(v);
  return ordered_json{{"space", space_to_json(cert.atoms.space)},
                      {"atom_kind", sample_kind_name(cert.atoms.kind)},
                      {"atoms", std::move(atoms)},
                      {"weights", cert.weights},
                      {"pstar", cert.pstar.str()},
                      {"constant", cert.constant}};
}

DominationCertificate certificate_from_json(const ordered_json& j) {
  DominationCertificate cert;
  cert.atoms.space = space_from_json(j.at("space"));
  cert.atoms.kind = sample_kind_parse(j.at("atom_kind").get<std::string>());
  for (const auto& v : j.at("atoms")) cert.atoms.points.push_back(v.get<Vec>());
  cert.weights = j.at("weights").get<std::vector<double>>();
  cert.pstar = Exponent::parse(j.at("pstar").get<std::string>());
  cert.constant = j.at("constant").get<double>();
  if (cert.weights.size() != cert.atoms.points.size())
    throw input_error("certificate weights/atoms length mismatch");
  return cert;
}

ordered_json bracket_to_json(const BracketRow& row) {
  return ordered_json{{"scheme", row.scheme},
                      {"lower", row.lower},
                      {"lower_rigorous", row.lower_rigorous},
                      {"upper", row.upper},
                      {"upper_certified", row.upper_certified},
                      {"lp_value", row.lp_value},
                      {"converged", row.converged},
                      {"witness_length", row.witness_length}};
}

ordered_json report_payload(const Report& rep) {
  ordered_json params = ordered_json::object();
  for (const auto& kv : rep.params) params[kv.first] = kv.second;
  ordered_json brackets = ordered_json::array();
  for (const BracketRow& row : rep.brackets) brackets.push_back(bracket_to_json(row));
  ordered_json trend = ordered_json::array();
  for (const auto& pt : rep.trend) trend.push_back(ordered_json::array({pt.first, pt.second}));
  return ordered_json{
      {"experiment", rep.experiment},
      {"operator", ordered_json{{"label", rep.operator_label}, {"digest", rep.operator_digest}}},
      {"seed", rep.seed},
      {"budgets",
       ordered_json{{"m_max", rep.budgets.m_max},
                    {"starts", rep.budgets.starts},
                    {"iters", rep.budgets.iters},
                    {"atom_budget", rep.budgets.atom_budget},
                    {"grid_resolution", rep.budgets.grid_resolution},
                    {"refine_rounds", rep.budgets.refine_rounds},
                    {"tol", rep.budgets.tol}}},
      {"params", std::move(params)},
      {"brackets", std::move(brackets)},
      {"verdict", verdict_name(rep.verdict)},
      {"trend", std::move(trend)},
      {"trend_upper", rep.trend_upper},
      {"trend_bounded", rep.trend_bounded},
      {"max_ratio", rep.max_ratio},
      {"trials", rep.trials},
      {"note", rep.note}};
}

ordered_json wrap_document(const ordered_json& payload) {
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return ordered_json{
      {"schema", "1"}, {"header", ordered_json{{"timestamp", stamp}}}, {"payload", payload}};
}

ordered_json report_document(const Report& rep) { return wrap_document(report_payload(rep)); }

std::string canonical_dump(const ordered_json& j) { return j.dump(); }

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string operator_digest(const AnyOp& op) {
  return digest_hex(fnv1a64(canonical_dump(op_to_json(op))));
}

namespace {

std::string sanitize_stem(const std::string& s) {
  std::string out;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_' || c == '.';
    out += ok ? c : '-';
  }
  return out.empty() ? "report" : out;
}

}  // namespace

std::filesystem::path write_document(const ordered_json& payload, const std::string& experiment,
                                     const std::string& stem,
                                     const std::filesystem::path& out_dir) {
  std::filesystem::path dir = out_dir / "reports" / sanitize_stem(experiment);
  std::filesystem::create_directories(dir);
  std::filesystem::path path = dir / (sanitize_stem(stem) + ".json");
  std::ofstream out(path);
  if (!out) throw input_error("cannot write report file: " + path.string());
  out << wrap_document(payload).dump(2) << "\n";
  return path;
}

std::filesystem::path write_report(const Report& rep, const std::filesystem::path& out_dir,
                                   const std::string& stem) {
  std::string base = stem.empty() ? (rep.operator_label.empty() ? rep.experiment
                                                                : rep.operator_label)
                                  : stem;
  return write_document(report_payload(rep), rep.experiment, base, out_dir);
}

ordered_json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace sumlab
