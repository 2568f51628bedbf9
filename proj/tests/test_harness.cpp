#include <doctest.h>

#include <cmath>
#include <numbers>

#include "liouville/harness.hpp"
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

RadialProfile constant_profile(int n, double c, double r_end) {
  std::vector<double> grid, u, du;
  for (int i = 0; i <= 64; ++i) {
    grid.push_back(r_end * i / 64.0);
    u.push_back(c);
    du.push_back(0.0);
  }
  return RadialProfile::from_samples(n, grid, u, du);
}

RadialProfile sinh_profile(double r_end) {
  std::vector<double> grid, u, du;
  for (int i = 0; i <= 512; ++i) {
    double s = r_end * i / 512.0;
    grid.push_back(s);
    if (s == 0.0) {
      u.push_back(1.0);
      du.push_back(0.0);
    } else {
      u.push_back(std::sinh(s) / s);
      du.push_back((s * std::cosh(s) - std::sinh(s)) / (s * s));
    }
  }
  return RadialProfile::from_samples(3, grid, u, du);
}

}  // namespace

TEST_CASE("ball volumes") {
  CHECK(ball_volume(1, 1.0) == doctest::Approx(oracle::kUnitBall1).epsilon(1e-14));
  CHECK(ball_volume(2, 1.0) == doctest::Approx(oracle::kUnitBall2).epsilon(1e-14));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(oracle::kUnitBall3).epsilon(1e-14));
  CHECK(ball_volume(5, 1.0) == doctest::Approx(oracle::kUnitBall5).epsilon(1e-14));
  CHECK(ball_volume(8, 1.0) == doctest::Approx(oracle::kUnitBall8).epsilon(1e-14));
  CHECK(ball_volume(3, 2.0) == doctest::Approx(8.0 * oracle::kUnitBall3).epsilon(1e-14));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK_THROWS_AS(ball_volume(0, 1.0), std::invalid_argument);
}

TEST_CASE("mean over the doubled ball") {
  RadialProfile one = constant_profile(3, 1.0, 4.0);
  CHECK(J_of_rho(one, 1.0, 1.0) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(J_of_rho(one, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  RadialProfile one_d = constant_profile(1, 1.0, 4.0);
  CHECK(J_of_rho(one_d, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  RadialProfile neg = constant_profile(3, -2.4, 4.0);
  CHECK(J_of_rho(neg, 0.5, 1.0) == doctest::Approx(2.4).epsilon(1e-12));
  CHECK_THROWS_AS(J_of_rho(one, 1.0, 5.0), std::out_of_range);
  CHECK_THROWS_AS(JFunction(one, 0.0), std::invalid_argument);
}

TEST_CASE("doubling sequence") {
  SUBCASE("mean grows slowly: endpoint reached at once") {
    RadialProfile p = constant_profile(1, 1.0, 4.0);
    auto t = doubling_sequence(p, spec("zeta^2", 2, 1), 1.0);
    CHECK(t.termination == Termination::Endpoint);
    REQUIRE(t.r_sequence.size() == 2);
    CHECK(t.r_sequence[1] == 2.0);
    CHECK(t.empirical_C > 0);
  }
  SUBCASE("cubic growth doubles twice") {
    RadialProfile p = constant_profile(3, 1.0, 4.0);
    auto t = doubling_sequence(p, spec("zeta^2", 2, 3), 1.0);
    CHECK(t.termination == Termination::Doubling);
    REQUIRE(t.r_sequence.size() == 3);
    CHECK(t.r_sequence[1] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-9));
    CHECK(t.r_sequence[2] == doctest::Approx(std::cbrt(4.0)).epsilon(1e-9));
    CHECK(t.doubling_ok);
    CHECK(t.max_doubling_error <= 1e-6);
    CHECK((t.branch == "reciprocal" || t.branch == "root"));
    CHECK(t.empirical_C == std::max(t.C_reciprocal, t.C_root));
  }
  SUBCASE("guards") {
    RadialProfile p = constant_profile(3, 1.0, 1.5);
    CHECK_THROWS_AS(doubling_sequence(p, spec("zeta^2", 2, 3), 1.0), std::out_of_range);
    RadialProfile zero = constant_profile(3, 0.0, 4.0);
    CHECK_THROWS_AS(doubling_sequence(zero, spec("zeta^2", 2, 3), 1.0), std::invalid_argument);
  }
}

TEST_CASE("annulus ratio on sinh(r)/r") {
  RadialProfile p = sinh_profile(3.0);
  auto rep = annulus_ratio(p, spec("zeta", 2, 3), 1.0, 2.0);
  CHECK(rep.empirical_constant == doctest::Approx(oracle::kAnnulusSinhRatio).epsilon(1e-8));
  CHECK(rep.pass);
  CHECK_THROWS_AS(annulus_ratio(p, spec("zeta", 2, 3), 1.0, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(annulus_ratio(p, spec("zeta", 2, 3), 1.0, 1.0), std::invalid_argument);
  RadialProfile zero = constant_profile(3, 0.0, 4.0);
  CHECK_THROWS_AS(annulus_ratio(zero, spec("zeta^2", 2, 3), 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("integral comparison") {
  ComparisonCase c;
  c.psi = Nonlinearity::parse("zeta^2");
  c.gamma = Nonlinearity::parse("zeta^2/4");
  auto rep = integral_comparison(c);
  CHECK(rep.empirical_constant == doctest::Approx(oracle::kComparisonRatio).epsilon(1e-10));
  CHECK(rep.pass);
  CHECK(rep.hypothesis_margin >= 0.0);

  ComparisonCase flat;
  flat.psi = Nonlinearity::parse("2");
  flat.gamma = Nonlinearity::parse("1");
  auto f = integral_comparison(flat);
  // (integral of z^(-1/2) over [1,4])^2 = 4, integral of 1/2 = 3/2
  CHECK(f.empirical_constant == doctest::Approx(8.0 / 3.0).epsilon(1e-10));

  SUBCASE("hypothesis failure") {
    ComparisonCase bad = c;
    bad.gamma = Nonlinearity::parse("zeta^2");
    CHECK_THROWS_AS(integral_comparison(bad), DomainError);
  }
  SUBCASE("parameter guards") {
    ComparisonCase bad = c;
    bad.M2 = 1.5;
    CHECK_THROWS_AS(integral_comparison(bad), std::invalid_argument);
    bad = c;
    bad.theta = 1.0;
    CHECK_THROWS_AS(integral_comparison(bad), std::invalid_argument);
    bad = c;
    bad.alpha = 1.5;
    CHECK_THROWS_AS(integral_comparison(bad), std::invalid_argument);
  }
}

TEST_CASE("annulus and doubling constants are scale invariant in the data") {
  // Scaling u by c scales both masses by c for g linear.
  for (double scale : {0.1, 10.0}) {
    RadialProfile base = sinh_profile(3.0);
    RadialProfile p = base;
    for (auto& x : p.cascade[0]) x *= scale;
    for (auto& x : p.slopes[0]) x *= scale;
    auto a = annulus_ratio(base, spec("zeta", 2, 3), 1.0, 1.5);
    auto b = annulus_ratio(p, spec("zeta", 2, 3), 1.0, 1.5);
    CHECK(b.empirical_constant == doctest::Approx(a.empirical_constant).epsilon(1e-10));
    CHECK(J_of_rho(p, 1.0, 1.5) == doctest::Approx(scale * J_of_rho(base, 1.0, 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("tail bound from the mean") {
  RadialProfile p = constant_profile(3, 1.0, 4.0);
  auto rep = tail_bound_check(p, spec("zeta^3", 2, 3), 1.0);
  REQUIRE(rep.status == IntegralStatus::Converged);
  CHECK(rep.J_r == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(rep.empirical_constant == doctest::Approx(8.0 / (rep.J_r * 1.0)).epsilon(1e-7));
  CHECK(rep.pass);
  CHECK_THROWS_AS(tail_bound_check(p, spec("zeta", 2, 3), 1.0), DomainError);
  RadialProfile zero = constant_profile(3, 0.0, 4.0);
  CHECK_THROWS_AS(tail_bound_check(zero, spec("zeta^3", 2, 3), 1.0), std::invalid_argument);
}

TEST_CASE("mean of a convex source dominates the source of the mean") {
  RadialProfile p = sinh_profile(3.0);
  for (double rho : {0.5, 1.0, 2.0, 3.0}) {
    auto s = jensen_gap(p, Nonlinearity::parse("zeta^2"), rho);
    CHECK(s.gap >= -1e-12 * s.mean_source);
  }
  auto flat = jensen_gap(constant_profile(3, 2.0, 1.0), Nonlinearity::parse("zeta^2"), 1.0);
  CHECK(std::fabs(flat.gap) <= 1e-10);
}

TEST_CASE("harness on blow-up profiles") {
  ProblemSpec s = spec("zeta^2", 2, 3);
  RadialProfile p = integrate_radial(s, 1.0, 50.0);
  REQUIRE(p.status == ProfileStatus::BlowUp);
  const double R = p.r_end();
  auto t = doubling_sequence(p, s, 0.25 * R);
  CHECK(t.empirical_C > 0);
  CHECK(t.doubling_ok);
  auto a = annulus_ratio(p, s, 0.25 * R, 0.5 * R);
  CHECK(a.empirical_constant > 0);
  auto b = tail_bound_check(p, s, 0.5 * R);
  CHECK(b.empirical_constant > 0);
}

TEST_CASE("doubling sequences increase and stop within the step bound") {
  for (double u0 : {0.5, 1.0, 4.0}) {
    ProblemSpec s = spec("zeta^2", 2, 3);
    RadialProfile p = integrate_radial(s, u0, 50.0);
    for (double f : {0.25, 0.375, 0.5}) {
      auto t = doubling_sequence(p, s, f * p.r_end());
      for (std::size_t i = 1; i < t.r_sequence.size(); ++i) CHECK(t.r_sequence[i] > t.r_sequence[i - 1]);
      double bound = std::ceil(s.n * std::log2(t.J_2r / t.J_r)) + 1;
      CHECK(static_cast<double>(t.r_sequence.size() - 1) <= bound);
      bool endpoint = t.termination == Termination::Endpoint;
      CHECK(endpoint == (t.r_sequence.back() == 2.0 * t.r));
    }
  }
}

TEST_CASE("comparison ratio is invariant under common scaling") {
  ComparisonCase base;
  base.psi = Nonlinearity::parse("zeta^2");
  base.gamma = Nonlinearity::parse("zeta^2/4");
  double ref = integral_comparison(base).empirical_constant;
  for (const char* c : {"0.1", "10"}) {
    ComparisonCase scaled = base;
    scaled.psi = Nonlinearity::parse(std::string(c) + "*zeta^2");
    scaled.gamma = Nonlinearity::parse(std::string(c) + "*zeta^2/4");
    auto rep = integral_comparison(scaled);
    CHECK(rep.empirical_constant == doctest::Approx(ref).epsilon(1e-10));
  }
}
