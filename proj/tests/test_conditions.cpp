#include <doctest.h>

#include <cmath>

#include "liouville/conditions.hpp"
#include "oracle_values.hpp"

using namespace liouville;

namespace {
ProblemSpec spec(const char* g, int m, int n) {
  ProblemSpec s;
  s.m = m;
  s.n = n;
  s.g = Nonlinearity::parse(g);
  return s;
}
}  // namespace

TEST_CASE("problem spec validation") {
  CHECK_NOTHROW(spec("zeta^2", 2, 3).validate());
  CHECK_THROWS_AS(spec("zeta^2", 0, 3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(spec("zeta^2", 2, 0).validate(), std::invalid_argument);
  ProblemSpec bad = spec("zeta^2", 2, 3);
  bad.A = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("tail condition") {
  CHECK(check_tail_condition(spec("zeta^2", 2, 3)).converged());
  CHECK(check_tail_condition(spec("zeta", 3, 3)).diverged());
  auto lp = check_tail_condition(spec("zeta*ln(2+zeta)^3", 2, 3));
  REQUIRE(lp.converged());
  CHECK(lp.value == doctest::Approx(oracle::kTailLogPow3M2).epsilon(1e-8));
}

TEST_CASE("liminf condition") {
  auto boundary = check_liminf_condition(spec("zeta^3", 2, 3));
  CHECK(boundary.decision == LiminfDecision::Satisfied);
  CHECK(std::fabs(boundary.limit_exponent) < 1e-6);
  for (double v : boundary.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-7));

  auto steep = check_liminf_condition(spec("zeta^4", 2, 3));
  CHECK(steep.decision == LiminfDecision::Violated);
  CHECK(steep.fitted_exponent == doctest::Approx(-1.5).epsilon(1e-6));
  CHECK(steep.values.back() == doctest::Approx((2.0 / 3.0) * std::pow(steep.t_samples.back(), -0.5)).epsilon(1e-6));

  for (const char* g : {"zeta^2", "zeta^5", "exp(zeta)-1"}) {
    CHECK(check_liminf_condition(spec(g, 4, 3)).decision == LiminfDecision::Satisfied);
    CHECK(check_liminf_condition(spec(g, 3, 3)).decision == LiminfDecision::Satisfied);
  }
}

TEST_CASE("nonexistence condition") {
  auto ops = check_nonexistence_condition(spec("1+zeta^2", 1, 3));
  REQUIRE(ops.integral.converged());
  CHECK(ops.integral.value == doctest::Approx(oracle::kWholeLineOnePlusSquareM1).epsilon(1e-8));
  REQUIRE(ops.g_positive_at_zero.has_value());
  CHECK(*ops.g_positive_at_zero);
  CHECK(check_nonexistence_condition(spec("zeta^2", 1, 3)).integral.diverged());
  auto cube = check_nonexistence_condition(spec("zeta^3", 2, 3));
  CHECK(cube.integral.diverged());
  CHECK(cube.integral.deciding_end == "lower");
}

TEST_CASE("classification examples") {
  CHECK(classify(spec("zeta^2", 2, 3)).outcome == Outcome::OnlyTrivialSolutions);
  CHECK(classify(spec("zeta^4", 2, 3)).outcome == Outcome::BoundOnly);
  CHECK(classify(spec("zeta*ln(2+zeta)^2", 2, 5)).outcome == Outcome::Inconclusive);
  CHECK(classify(spec("1+zeta^2", 1, 3)).outcome == Outcome::NoGlobalSolutions);
  CHECK(classify(spec("zeta^2", 4, 3)).outcome == Outcome::OnlyTrivialSolutions);
}

TEST_CASE("verdict routing matches the evidence") {
  for (const char* g : {"zeta^2", "zeta^4", "zeta", "1+zeta^2", "zeta*ln(2+zeta)^3", "exp(zeta)-1"}) {
    for (int m : {1, 2, 4}) {
      for (int n : {1, 3, 5}) {
        Verdict v = classify(spec(g, m, n));
        CAPTURE(g);
        CAPTURE(m);
        CAPTURE(n);
        switch (v.outcome) {
          case Outcome::NoGlobalSolutions:
            CHECK(v.nonexistence.integral.converged());
            break;
          case Outcome::OnlyTrivialSolutions:
            CHECK(v.tail.converged());
            CHECK((v.liminf.decision == LiminfDecision::Satisfied || m >= n));
            break;
          case Outcome::BoundOnly:
            CHECK(v.tail.converged());
            CHECK(v.liminf.decision == LiminfDecision::Violated);
            break;
          case Outcome::Inconclusive:
            CHECK_FALSE(v.nonexistence.integral.converged());
            break;
        }
        CHECK(v.theorems.size() == 5);
      }
    }
  }
}

TEST_CASE("classification is invariant under scaling of g") {
  for (const char* g : {"zeta^2", "zeta^4", "zeta", "1+zeta^2", "zeta*ln(2+zeta)^3"}) {
    ProblemSpec s = spec(g, 2, 3);
    Outcome base = classify(s).outcome;
    for (double c : {1e-3, 1e3}) {
      ProblemSpec t = s;
      t.g = s.g.scaled(c);
      CHECK_MESSAGE(classify(t).outcome == base, g << " c=" << c);
    }
  }
}

TEST_CASE("equivalence of the generalized and classical integrals") {
  for (const char* g : {"zeta^2", "zeta", "zeta*ln(2+zeta)^2", "zeta*ln(2+zeta)^3", "zeta^0.5", "1+zeta^2"}) {
    auto e = keller_osserman_equivalence(Nonlinearity::parse(g));
    CHECK_MESSAGE(e.agree, g);
  }
  auto sq = keller_osserman_equivalence(Nonlinearity::parse("zeta^2"));
  CHECK(sq.generalized.converged());
  CHECK(sq.classical.converged());
  auto border = keller_osserman_equivalence(Nonlinearity::parse("zeta*ln(2+zeta)^2"));
  CHECK(border.generalized.diverged());
  CHECK(border.classical.diverged());
}

TEST_CASE("inverse of G") {
  CHECK(g_inverse_of_G(spec("zeta^3", 2, 3), 4.0) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(g_inverse_of_G(spec("zeta^2", 2, 3), 2.0) == doctest::Approx(1.0).epsilon(1e-8));
  GFunction G(Nonlinearity::parse("zeta*ln(2+zeta)^3"), 2);
  for (double r : {1e-3, 1.0, 1e3}) {
    double lt = G.log_inverse(std::log(r));
    CHECK(std::exp(G.log_G(lt)) == doctest::Approx(r).epsilon(1e-6));
  }
  try {
    g_inverse_of_G(spec("1+zeta^2", 1, 3), 10.0);
    FAIL("expected an undefined inverse");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("inverse undefined at r") != std::string::npos);
  }
  CHECK_THROWS_AS(GFunction(Nonlinearity::parse("zeta"), 2), std::invalid_argument);
}

TEST_CASE("mean bound and decay curve") {
  CHECK(mean_bound(spec("zeta^3", 2, 3), 10.0, 1.0, 1.0) == doctest::Approx(0.1).epsilon(1e-8));
  double one = mean_bound(spec("zeta^3", 2, 3), 10.0, 1.0, 1.0);
  CHECK(mean_bound(spec("zeta^3", 2, 3), 10.0, 2.0, 1.0) == doctest::Approx(2 * one).epsilon(1e-14));
  CHECK(mean_bound(spec("zeta^2", 2, 3), 1.0, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-8));

  auto cube = decay_curve(spec("zeta^3", 2, 3), {1.0, 10.0, 100.0}, 1.0, 1.0);
  REQUIRE(cube.bounds.size() == 3);
  CHECK(cube.bounds[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(cube.bounds[1] == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(cube.bounds[2] == doctest::Approx(0.01).epsilon(1e-8));
  CHECK(cube.strictly_decreasing);
  CHECK(cube.reaches_epsilon == false);

  auto sq = decay_curve(spec("zeta^2", 2, 3), {1.0, 2.0}, 1.0, 1.0);
  CHECK(sq.bounds[0] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(sq.bounds[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sq.non_increasing);
}
