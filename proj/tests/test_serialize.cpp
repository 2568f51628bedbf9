#include <doctest.h>

#include <cmath>

#include "liouville/serialize.hpp"

using namespace liouville;

TEST_CASE("reals are written with 17 significant digits") {
  CHECK(dump(Json(0.1), -1) == "0.10000000000000001");
  Json j = {{"x", 1.0 / 3.0}};
  CHECK(dump(j, -1) == "{\"x\":0.33333333333333331}");
  CHECK(dump(Json::array({1, 2}), -1) == "[1,2]");
}

TEST_CASE("non-finite reals become strings") {
  CHECK(real(INFINITY) == "inf");
  CHECK(real(-INFINITY) == "-inf");
  CHECK(real(NAN) == "nan");
  CHECK(real(2.5) == 2.5);
}

TEST_CASE("pretty printing keeps key order") {
  Json j;
  j["b"] = 1;
  j["a"] = Json::array();
  j["c"] = Json::object();
  CHECK(dump(j) == "{\n  \"b\": 1,\n  \"a\": [],\n  \"c\": {}\n}");
}

TEST_CASE("verdict shape") {
  ProblemSpec s;
  s.g = Nonlinearity::parse("zeta^2");
  Json j = to_json(classify(s));
  CHECK(j["outcome"] == "OnlyTrivialSolutions");
  REQUIRE(j["evidence"].contains("t211"));
  REQUIRE(j["evidence"].contains("t221"));
  REQUIRE(j["evidence"].contains("t231"));
  CHECK(j["evidence"]["t211"]["status"] == "Converged");
  CHECK(j["theorems"].is_array());
}

TEST_CASE("harness report shape") {
  ComparisonCase c;
  c.psi = Nonlinearity::parse("zeta^2");
  c.gamma = Nonlinearity::parse("zeta^2/4");
  Json j = to_json(integral_comparison(c), c);
  for (const char* key : {"lemma", "inputs", "empirical_constant", "pass", "witnesses"}) CHECK(j.contains(key));
  CHECK(j["lemma"] == "34");
  CHECK(j["inputs"]["psi"] == c.psi.render());
}

TEST_CASE("profile csv columns") {
  RadialProfile p = RadialProfile::from_samples(3, {0.0, 1.0}, {1.0, 2.0}, {0.0, 0.0});
  CHECK(profile_csv(p) == "r,u\n0,1\n1,2\n");
  Json h = profile_header(p);
  CHECK(h["status"] == "Global");
  CHECK_FALSE(h.contains("bracket"));
}
