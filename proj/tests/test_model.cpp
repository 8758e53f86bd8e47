#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmm/problem.hpp"
#include "support.hpp"

using namespace pmm;
using namespace pmm::testing;

TEST_CASE("constructor rejects inconsistent shapes") {
  Matrix A = Matrix::Identity(2, 2);
  Matrix B = Matrix::Zero(2, 1);
  Matrix F = Matrix::Zero(2, 1);
  Matrix E = Matrix::Zero(1, 2);
  Matrix G = Matrix::Zero(1, 2);
  Vector s = Vector::Ones(2), r = Vector::Zero(1), g = Vector::Zero(1);

  CHECK_NOTHROW(ProblemInstance(A, B, F, E, G, s, r, g));
  CHECK_THROWS_AS(ProblemInstance(A, B, F, Matrix::Zero(1, 3), G, s, r, g),
                  DimensionError);
  CHECK_THROWS_AS(ProblemInstance(Matrix::Zero(2, 3), B, F, E, G, s, r, g),
                  DimensionError);
  CHECK_THROWS_AS(ProblemInstance(A, B, F, E, G, Vector::Ones(3), r, g),
                  DimensionError);
}

TEST_CASE("constructor rejects negative entries in E and G") {
  Matrix E(1, 1), G(1, 1);
  E << -0.5;
  G << 0.0;
  CHECK_THROWS_AS(ProblemInstance(Matrix::Identity(1, 1), Matrix::Zero(1, 1),
                                  Matrix::Zero(1, 1), E, G, Vector::Ones(1),
                                  Vector::Zero(1), Vector::Zero(1)),
                  std::invalid_argument);
}

TEST_CASE("positivity condition on scalar instances") {
  // a - |b|e - |f|g = 0.9 - 0.2 - 0.1 = 0.6
  auto ok = check_positivity_condition(
      scalar_instance(0.9, 0.2, 0.1, 1, 1, 1, 0.1, 0.05));
  CHECK(ok.ok);
  CHECK(ok.min_margin == doctest::Approx(0.6));

  auto bad = check_positivity_condition(
      scalar_instance(0.2, 0.2, 0.1, 1, 1, 1, 0.1, 0.05));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].row == 0);
  CHECK(bad.violations[0].col == 0);
  CHECK(bad.violations[0].margin == doctest::Approx(-0.1));

  // E = G = 0 reduces the condition to A >= 0
  auto reduced = check_positivity_condition(
      scalar_instance(0.7, 0.5, 0.5, 0, 0, 1, 0, 0));
  CHECK(reduced.ok);
}

TEST_CASE("cost condition on scalar instances") {
  auto ok =
      check_cost_condition(scalar_instance(0.9, 0.2, 0.1, 1, 1, 1, 0.1, 0.05));
  CHECK(ok.ok);
  CHECK(ok.min_margin == doctest::Approx(0.95));

  auto bad =
      check_cost_condition(scalar_instance(0.9, 0.2, 0.1, 1, 0, 0, 1, 0));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].margin == doctest::Approx(-1.0));

  // r = gamma = 0 reduces to s >= 0
  auto reduced =
      check_cost_condition(scalar_instance(0.9, 0.2, 0.1, 1, 1, 0.3, 0, 0));
  CHECK(reduced.ok);
}

TEST_CASE("checks are pure") {
  auto inst = s1();
  auto a = check_positivity_condition(inst);
  auto b = check_positivity_condition(inst);
  CHECK(a.ok == b.ok);
  CHECK(a.min_margin == b.min_margin);
  CHECK(a.violations.size() == b.violations.size());
}

TEST_CASE("configurable slack admits boundary cases") {
  // dyadic values so the margin is exactly 0
  auto inst = scalar_instance(0.375, 0.25, 0.125, 1, 1, 1, 0.1, 0.05);
  CHECK(check_positivity_condition(inst).ok);
  auto tight = scalar_instance(0.375 - 1e-12, 0.25, 0.125, 1, 1, 1, 0.1, 0.05);
  CHECK_FALSE(check_positivity_condition(tight).ok);
  CHECK(check_positivity_condition(tight, 1e-9).ok);
}

TEST_CASE("load_problem parses a scalar file") {
  const std::string text = R"({
    "A": [[0.9]], "B": [[0.2]], "F": [[0.1]],
    "E": [[1.0]], "G": [[1.0]],
    "s": [1.0], "r": [0.1], "gamma": [0.05]
  })";
  auto inst = load_problem(text);
  CHECK(inst.n() == 1);
  CHECK(inst.m() == 1);
  CHECK(inst.l() == 1);
  CHECK(inst.A(0, 0) == 0.9);
}

TEST_CASE("load_problem error paths") {
  CHECK_THROWS_WITH_AS(
      load_problem(R"({"A": [[1]], "B": [[0]], "F": [[0]], "E": [[0]],
                       "s": [1], "r": [0], "gamma": [0]})"),
      doctest::Contains("G"), ParseError);

  CHECK_THROWS_WITH_AS(
      load_problem(R"({"A": [[1]], "B": [[0]], "F": [[0]], "E": [[-0.5]],
                       "G": [[0]], "s": [1], "r": [0], "gamma": [0]})"),
      doctest::Contains("E"), ParseError);

  CHECK_THROWS_AS(load_problem("not json"), ParseError);

  // shape inconsistency surfaces as a parse-level error naming the fields
  CHECK_THROWS_AS(
      load_problem(R"({"A": [[1,0],[0,1]], "B": [[0],[0]], "F": [[0],[0]],
                       "E": [[0]], "G": [[0,0]], "s": [1,1], "r": [0],
                       "gamma": [0]})"),
      ParseError);
}

TEST_CASE("unknown keys warn instead of failing") {
  std::vector<std::string> warnings;
  load_problem(R"({"A": [[1]], "B": [[0]], "F": [[0]], "E": [[0]],
                   "G": [[0]], "s": [1], "r": [0], "gamma": [0],
                   "comment": "hello"})",
               &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("comment") != std::string::npos);
}

TEST_CASE("serialize/load round trip is exact") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_validated_instance(rng, 3, 2, 2);
    auto again = load_problem(serialize_problem(inst));
    CHECK(again.A == inst.A);
    CHECK(again.B == inst.B);
    CHECK(again.F == inst.F);
    CHECK(again.E == inst.E);
    CHECK(again.G == inst.G);
    CHECK(again.s == inst.s);
    CHECK(again.r == inst.r);
    CHECK(again.gamma == inst.gamma);
  }
}

TEST_CASE("instances passing the positivity check have nonnegative A") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_validated_instance(rng, 4, 3, 2);
    REQUIRE(check_positivity_condition(inst).ok);
    CHECK((inst.A.array() >= 0.0).all());
  }
}
