#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sumlab/serialize.hpp"

using namespace sumlab;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "sumlab_cli_test";
  fs::create_directories(dir);
  return dir;
}

CliRun run_cli(const std::string& args) {
  static int counter = 0;
  fs::path capture = scratch_dir() / ("capture" + std::to_string(counter++) + ".txt");
  std::string cmd =
      std::string(SUMLAB_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  CliRun r;
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

// The tool prints one JSON line as its last output line.
ordered_json last_json_line(const std::string& text) {
  std::istringstream in(text);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  return ordered_json::parse(last);
}

fs::path write_identity_op() {
  LinearOp op;
  op.domain = {2, Exponent::parse("2")};
  op.codomain = {2, Exponent::parse("2")};
  op.matrix = {1, 0, 0, 1};
  op.label = "id2";
  fs::path file = scratch_dir() / "id2.json";
  std::ofstream(file) << op_to_json(AnyOp{op}).dump(2) << "\n";
  return file;
}

fs::path write_basis_sequence() {
  VecSequence seq{{2, Exponent::parse("2")}, {{1, 0}, {0, 1}}};
  fs::path file = scratch_dir() / "basis.json";
  std::ofstream(file) << sequence_to_json(seq).dump(2) << "\n";
  return file;
}

}  // namespace

TEST_CASE("constant subcommand brackets the identity") {
  fs::path op = write_identity_op();
  fs::path out = scratch_dir() / "out_const";
  CliRun r = run_cli("constant --p 2 --out " + out.string() + " " + op.string());
  REQUIRE(r.code == 0);
  ordered_json line = last_json_line(r.out);
  CHECK(line["lower"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  CHECK(line["upper"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  CHECK(line["converged"].get<bool>());
  fs::path report = line["report"].get<std::string>();
  CHECK(fs::exists(report));
  ordered_json doc = load_json_file(report);
  CHECK(doc["schema"] == "1");
  CHECK(doc["payload"]["experiment"] == "constant");
}

TEST_CASE("exit codes separate usage, input, and verdict failures") {
  fs::path op = write_identity_op();
  // (1, 3) violates the membership identity at p = 2
  CliRun bad_pair = run_cli("constant --p 2 --q0 1 --q1 3 " + op.string());
  CHECK(bad_pair.code == 2);
  CHECK(bad_pair.out.find("admissible") != std::string::npos);

  CliRun good_pair = run_cli("constant --p 2 --q0 4/3 --q1 4 --out " +
                             (scratch_dir() / "out_pair").string() + " " + op.string());
  CHECK(good_pair.code == 0);

  CHECK(run_cli("constant --p 2 --no-such-flag " + op.string()).code == 1);
  CHECK(run_cli("frobnicate").code == 1);
  CHECK(run_cli("").code == 1);  // a subcommand is required
  CHECK(run_cli("constant --p 2 " + (scratch_dir() / "missing.json").string()).code == 2);
}

TEST_CASE("norm subcommand evaluates all three kinds") {
  fs::path seq = write_basis_sequence();
  ordered_json strong = last_json_line(run_cli("norm --kind strong --p 2 " + seq.string()).out);
  CHECK(strong["value"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  ordered_json weak = last_json_line(run_cli("norm --kind weak --p 2 " + seq.string()).out);
  CHECK(weak["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

  ordered_json cohen = last_json_line(run_cli("norm --kind cohen --p 2 " + seq.string()).out);
  CHECK(cohen["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(cohen["lower_bound_only"].get<bool>());

  CHECK(run_cli("norm --kind nuclear --p 2 " + seq.string()).code == 2);
}

TEST_CASE("holder-check writes a consistent report") {
  fs::path out = scratch_dir() / "out_holder";
  CliRun r = run_cli("holder-check --p 2 --q0 1 --q1 2 --trials 50 --out " + out.string());
  REQUIRE(r.code == 0);
  ordered_json line = last_json_line(r.out);
  CHECK(line["verdict"] == "consistent");
  CHECK(fs::exists(out / "reports" / "holder-check" / "holder-check.json"));
}

TEST_CASE("identical runs produce byte-identical payloads") {
  fs::path op = write_identity_op();
  fs::path out_a = scratch_dir() / "rerun_a";
  fs::path out_b = scratch_dir() / "rerun_b";
  std::string tail = " --p 2 --seed 5 " + op.string();
  REQUIRE(run_cli("constant --out " + out_a.string() + tail).code == 0);
  REQUIRE(run_cli("constant --out " + out_b.string() + tail).code == 0);
  ordered_json doc_a = load_json_file(out_a / "reports" / "constant" / "id2.json");
  ordered_json doc_b = load_json_file(out_b / "reports" / "constant" / "id2.json");
  CHECK(canonical_dump(doc_a["payload"]) == canonical_dump(doc_b["payload"]));
}
