#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sumlab/experiments.hpp"

using namespace sumlab;

namespace {

Exponent ex(const char* s) { return Exponent::parse(s); }

LinearOp identity2() {
  LinearOp op;
  op.domain = {2, ex("2")};
  op.codomain = {2, ex("2")};
  op.matrix = {1, 0, 0, 1};
  op.label = "id";
  return op;
}

MultilinearOp product_diag() {
  // (x, y) -> (x1 y1, x2 y2), the rank-style bilinear anchor
  MultilinearOp op;
  op.domains = {{2, ex("2")}, {2, ex("2")}};
  op.codomain = {2, ex("2")};
  op.tensor = {1, 0, 0, 0, 0, 0, 0, 1};
  op.label = "diagprod";
  return op;
}

Budgets quick_budgets() {
  Budgets b;
  b.starts = 8;
  b.iters = 60;
  b.m_max = 3;
  b.atom_budget = 360;
  return b;
}

}  // namespace

TEST_CASE("coincidence brackets agree across admissible pairs") {
  Report rep = coincidence(AnyOp{identity2()}, ex("2"), {{ex("4/3"), ex("4")}},
                           quick_budgets(), 1);
  REQUIRE(rep.brackets.size() == 2);  // canonical (1, 2) prepended
  CHECK(rep.brackets[0].scheme.find("q0=1") != std::string::npos);
  CHECK(rep.verdict == Verdict::consistent);
  for (const BracketRow& row : rep.brackets) {
    CHECK(row.lower == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
    CHECK(row.upper == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  }
  CHECK(rep.experiment == "coincidence");
  CHECK(!rep.operator_digest.empty());
}

TEST_CASE("coincidence rejects p = 1 and non-member pairs") {
  CHECK_THROWS_AS(coincidence(AnyOp{identity2()}, ex("1"), {}, quick_budgets(), 1), input_error);
  CHECK_THROWS_AS(
      coincidence(AnyOp{identity2()}, ex("2"), {{ex("1"), ex("3")}}, quick_budgets(), 1),
      input_error);
  CHECK_THROWS_AS(coincidence(AnyOp{product_diag()}, ex("2"), {}, quick_budgets(), 1),
                  input_error);
}

TEST_CASE("multilinear equivalence uses the three default schemes") {
  Report rep = multi_equivalence(AnyOp{product_diag()}, ex("2"), {}, quick_budgets(), 1);
  REQUIRE(rep.brackets.size() == 3);
  CHECK(rep.brackets[0].scheme.find("joint") != std::string::npos);
  CHECK(rep.brackets[1].scheme.find("separate") != std::string::npos);
  CHECK(rep.brackets[2].scheme == "general:q0=1,q=[3,6],p=2");
  CHECK(rep.verdict == Verdict::consistent);
  // The orthonormal witness (e_i, e_i) with phi_i = e_i forces sqrt(2)
  // exactly as for the identity, and the uniform circle measure attains
  // it; every scheme brackets the same constant.
  for (const BracketRow& row : rep.brackets) {
    CHECK(row.lower == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    CHECK(row.upper == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
  }
  CHECK_THROWS_AS(multi_equivalence(AnyOp{identity2()}, ex("2"), {}, quick_budgets(), 1),
                  input_error);
}

TEST_CASE("triviality probe stays honest about bounded trends") {
  CHECK_THROWS_AS(
      triviality_probe(AnyOp{identity2()}, ex("2"), ex("1"), ex("2"), {1, 2}, quick_budgets(), 1),
      input_error);  // (1, 2) is the classical pair, not the disputed zone
  CHECK_THROWS_AS(
      triviality_probe(AnyOp{identity2()}, ex("2"), ex("4/3"), ex("4"), {}, quick_budgets(), 1),
      input_error);

  Report rep = triviality_probe(AnyOp{identity2()}, ex("2"), ex("4/3"), ex("4"), {1, 2, 3},
                                quick_budgets(), 1);
  REQUIRE(rep.trend.size() == 3);
  CHECK(rep.trend[0].first == 1);
  // Ratios grow with length by definition of the sup, and cannot pass the
  // certified constant here.
  CHECK(rep.trend[0].second <= rep.trend[2].second + 1e-9);
  CHECK(rep.max_ratio <= rep.trend_upper * (1 + quick_budgets().tol));
  CHECK(rep.trend_bounded);
  CHECK(rep.verdict == Verdict::inconclusive);
  CHECK(!rep.note.empty());
}

TEST_CASE("factor inequality holds on random sequences") {
  Report rep = holder_factor_check(ex("2"), ex("1"), ex("2"), 200, 1);
  CHECK(rep.verdict == Verdict::consistent);
  CHECK(rep.trials == 200);
  CHECK(rep.max_ratio <= 1.0 + 1e-9);
  CHECK(rep.max_ratio > 0.5);  // products do get close to the bound

  Report again = holder_factor_check(ex("2"), ex("1"), ex("2"), 200, 1);
  CHECK(again.max_ratio == rep.max_ratio);

  CHECK_THROWS_AS(holder_factor_check(ex("2"), ex("1"), ex("3"), 10, 1), input_error);
  CHECK_THROWS_AS(holder_factor_check(ex("2"), ex("1"), ex("2"), 0, 1), input_error);
}
