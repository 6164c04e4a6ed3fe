#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sumlab/serialize.hpp"

using namespace sumlab;
namespace fs = std::filesystem;

namespace {

Exponent ex(const char* s) { return Exponent::parse(s); }

LinearOp sample_linear() {
  LinearOp op;
  op.domain = {2, ex("4/3")};
  op.codomain = {3, ex("inf")};
  op.matrix = {1, -2, 0.5, 0, 3, -0.25};
  op.label = "probe";
  return op;
}

MultilinearOp sample_bilinear() {
  MultilinearOp op;
  op.domains = {{2, ex("2")}, {2, ex("2")}};
  op.codomain = {2, ex("2")};
  op.tensor = {1, 0, 0, 0, 0, 0, 0, 1};
  op.label = "diagprod";
  return op;
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "sumlab_serialize_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("spaces and exponents survive the round trip") {
  for (const char* q : {"1", "2", "4/3", "8/7", "inf", "2.75"}) {
    SpaceSpec s{3, ex(q)};
    SpaceSpec back = space_from_json(space_to_json(s));
    CHECK(back.dim == 3);
    CHECK(back.exponent.same(s.exponent));
  }
}

TEST_CASE("operators survive the round trip") {
  AnyOp lin{sample_linear()};
  AnyOp lin2 = op_from_json(op_to_json(lin));
  const LinearOp& a = std::get<LinearOp>(lin);
  const LinearOp& b = std::get<LinearOp>(lin2);
  CHECK(a.matrix == b.matrix);
  CHECK(a.label == b.label);
  CHECK(same_space(a.domain, b.domain));
  CHECK(same_space(a.codomain, b.codomain));

  AnyOp bil{sample_bilinear()};
  AnyOp bil2 = op_from_json(op_to_json(bil));
  CHECK(std::get<MultilinearOp>(bil).tensor == std::get<MultilinearOp>(bil2).tensor);
  CHECK(operator_digest(bil) == operator_digest(bil2));
}

TEST_CASE("sequences and certificates survive the round trip") {
  VecSequence seq{{2, ex("2")}, {{1, 0}, {0.5, -0.25}}};
  VecSequence seq2 = sequence_from_json(sequence_to_json(seq));
  CHECK(seq2.items == seq.items);
  CHECK(seq2.space.exponent.same(seq.space.exponent));

  DominationCertificate cert;
  cert.atoms.space = {2, ex("2")};
  cert.atoms.points = {{1, 0}, {0, 1}};
  cert.atoms.kind = SampleKind::heuristic_sample;
  cert.weights = {0.25, 0.75};
  cert.pstar = ex("2");
  cert.constant = 1.5;
  DominationCertificate cert2 = certificate_from_json(certificate_to_json(cert));
  CHECK(cert2.atoms.points == cert.atoms.points);
  CHECK(cert2.weights == cert.weights);
  CHECK(cert2.constant == cert.constant);
  CHECK(cert2.pstar.same(cert.pstar));
}

TEST_CASE("unknown schema versions are rejected") {
  ordered_json j = op_to_json(AnyOp{sample_linear()});
  j["schema"] = "2";
  CHECK_THROWS_AS(op_from_json(j), input_error);

  ordered_json c = certificate_to_json(DominationCertificate{});
  c["weights"].push_back(0.5);  // length mismatch against atoms
  CHECK_THROWS_AS(certificate_from_json(c), input_error);
}

TEST_CASE("malformed files surface as input errors") {
  fs::path dir = scratch_dir();
  fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(load_json_file(bad), input_error);
  CHECK_THROWS_AS(load_json_file(dir / "missing.json"), input_error);
}

TEST_CASE("digests are stable and entry-sensitive") {
  AnyOp op{sample_linear()};
  std::string d1 = operator_digest(op);
  std::string d2 = operator_digest(op);
  CHECK(d1 == d2);
  CHECK(d1.size() == 16);  // fnv1a64 hex

  LinearOp tweaked = sample_linear();
  tweaked.matrix[3] = 1e-9;
  CHECK(operator_digest(AnyOp{tweaked}) != d1);
}

TEST_CASE("report payloads are deterministic, headers are not part of them") {
  Report rep;
  rep.experiment = "coincidence";
  rep.operator_label = "id";
  rep.operator_digest = "0123456789abcdef";
  rep.seed = 7;
  rep.params = {{"p", "2"}, {"pairs", "1,2;4/3,4"}};
  rep.brackets = {{"summing:q0=1,q1=2,p=2", 1.41, true, 1.42, true, 1.415, true, 2}};
  rep.verdict = Verdict::consistent;
  rep.trend = {{1, 1.0}, {2, 1.41}};
  rep.max_ratio = 1.41;
  rep.trials = 2;
  rep.note = "anchor";

  std::string p1 = canonical_dump(report_payload(rep));
  std::string p2 = canonical_dump(report_payload(rep));
  CHECK(p1 == p2);

  ordered_json doc = report_document(rep);
  CHECK(doc["schema"] == "1");
  CHECK(doc["header"].contains("timestamp"));
  CHECK(canonical_dump(doc["payload"]) == p1);
}

TEST_CASE("reports land under out/reports/experiment/stem.json") {
  Report rep;
  rep.experiment = "holder-check";
  rep.operator_label = "";
  rep.verdict = Verdict::consistent;
  fs::path dir = scratch_dir();
  fs::path where = write_report(rep, dir);
  CHECK(where == dir / "reports" / "holder-check" / "holder-check.json");
  CHECK(fs::exists(where));

  ordered_json loaded = load_json_file(where);
  CHECK(loaded["payload"]["experiment"] == "holder-check");
  CHECK(loaded["payload"]["verdict"] == "consistent");

  fs::path named = write_report(rep, dir, "custom run/01");
  CHECK(named.filename() == "custom-run-01.json");  // stem sanitized
}
