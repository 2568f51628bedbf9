#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "liouville/simulator.hpp"
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

TEST_CASE("linear equation reproduces sinh(r)/r") {
  IntegrationOptions o;
  o.checkpoints = {0.5, 1.0, 2.0, 4.0};
  RadialProfile p = integrate_radial(spec("zeta", 2, 3), 1.0, 5.0, o);
  REQUIRE(p.status == ProfileStatus::Global);
  CHECK(p.u(0.5) == doctest::Approx(oracle::kSinhOverR_0p5).epsilon(1e-8));
  CHECK(p.u(1.0) == doctest::Approx(oracle::kSinhOverR_1).epsilon(1e-8));
  CHECK(p.u(2.0) == doctest::Approx(oracle::kSinhOverR_2).epsilon(1e-8));
  CHECK(p.u(4.0) == doctest::Approx(oracle::kSinhOverR_4).epsilon(1e-8));
  CHECK(p.r_end() == 5.0);
  for (std::size_t i = 1; i < p.grid.size(); ++i) CHECK(p.grid[i] > p.grid[i - 1]);
}

TEST_CASE("one-dimensional blow-up radius") {
  RadialProfile p = integrate_radial(spec("zeta^2", 2, 1), 1.0, 10.0);
  REQUIRE(p.status == ProfileStatus::BlowUp);
  CHECK(std::fabs(p.blowup_radius - oracle::kBlowUpRadius1D) < 1e-4);
  CHECK(p.bracket_lo <= oracle::kBlowUpRadius1D);
  CHECK(p.bracket_hi >= oracle::kBlowUpRadius1D);
  CHECK(p.bracket_hi - p.bracket_lo <= 1e-6);
  CHECK(p.crossing_radii.size() >= 3);
}

TEST_CASE("critical power blows up at the explicit radius") {
  // u = (1 - r^2/3)^(-1/2) solves Delta u = u^5 in three dimensions
  RadialProfile p = integrate_radial(spec("zeta^5", 2, 3), 1.0, 10.0);
  REQUIRE(p.status == ProfileStatus::BlowUp);
  CHECK(p.blowup_radius == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
  CHECK(p.bracket_lo <= std::sqrt(3.0) + 1e-12);
  CHECK(p.u(1.0) == doctest::Approx(1.0 / std::sqrt(1.0 - 1.0 / 3.0)).epsilon(1e-8));
}

TEST_CASE("zero data stays zero") {
  RadialProfile p = integrate_radial(spec("zeta^2", 2, 3), 0.0, 5.0);
  CHECK(p.status == ProfileStatus::Global);
  for (double u : p.values()) CHECK(u == 0.0);
}

TEST_CASE("odd order and bad arguments are rejected") {
  CHECK_THROWS_AS(integrate_radial(spec("zeta^2", 3, 3), 1.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_radial(spec("zeta^2", 2, 3), 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("profile interpolation stays inside the range") {
  RadialProfile p = integrate_radial(spec("zeta", 2, 3), 1.0, 2.0);
  CHECK_THROWS_AS(p.u(2.5), std::out_of_range);
  CHECK_THROWS_AS(p.u(-0.1), std::out_of_range);
  CHECK(p.dv(0, 1.0) == doctest::Approx((std::cosh(1.0) - std::sinh(1.0))).epsilon(1e-7));
}

TEST_CASE("halving the tolerance moves checkpoints by less than ten local errors") {
  IntegrationOptions a;
  a.checkpoints = {1.0, 2.0, 3.0};
  IntegrationOptions b = a;
  b.rtol = a.rtol / 2;
  b.atol = a.atol / 2;
  for (const char* g : {"zeta", "zeta^2"}) {
    RadialProfile p = integrate_radial(spec(g, 2, 3), 0.5, 3.0, a);
    RadialProfile q = integrate_radial(spec(g, 2, 3), 0.5, 3.0, b);
    for (double r : a.checkpoints) {
      auto i = static_cast<std::size_t>(std::find(p.grid.begin(), p.grid.end(), r) - p.grid.begin());
      REQUIRE(i < p.grid.size());
      double err = std::max(p.local_error[i], 1e-15);
      CHECK(std::fabs(p.u(r) - q.u(r)) < 10.0 * err);
    }
  }
}

TEST_CASE("cascade consistency for the biharmonic system") {
  IntegrationOptions o;
  o.cascade_initial = {0.5};
  ProblemSpec s = spec("zeta^2", 4, 3);
  RadialProfile p = integrate_radial(s, 1.0, 1.5, o);
  REQUIRE(p.status == ProfileStatus::Global);
  for (double r : {0.5, 0.9, 1.2}) {
    double h = 1e-3;
    double d2 = (p.u(r + h) - 2 * p.u(r) + p.u(r - h)) / (h * h);
    double d1 = (p.u(r + h) - p.u(r - h)) / (2 * h);
    double lap = d2 + 2.0 * d1 / r;
    CHECK(lap == doctest::Approx(p.v(1, r)).epsilon(1e-5));
  }
}

TEST_CASE("blow-up radius is non-increasing in the initial value") {
  double prev = INFINITY;
  for (double u0 : {0.5, 1.0, 2.0, 4.0}) {
    RadialProfile p = integrate_radial(spec("zeta^2", 2, 3), u0, 50.0);
    REQUIRE(p.status == ProfileStatus::BlowUp);
    CHECK(p.blowup_radius <= prev);
    prev = p.blowup_radius;
  }
}

TEST_CASE("profiles from samples") {
  RadialProfile p = RadialProfile::from_samples(3, {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
  CHECK(p.u(1.5) == 1.0);
  CHECK_THROWS_AS(RadialProfile::from_samples(3, {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile::from_samples(3, {0.5, 1.0}, {1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("explicit positive solution") {
  CHECK(counterexample_overflow_radius(1.0) == doctest::Approx(std::sqrt(std::pow(std::log(std::log(1e300)), 2) - 1)));
  CHECK(counterexample_overflow_radius(10.0) == 0.0);

  auto rep = verify_counterexample(1, 3, 2.0, 1.0, std::nullopt, {});
  CHECK(rep.pass);
  CHECK(rep.k_auto);
  CHECK(rep.k <= 1048576.0);
  CHECK(rep.min_scaled_residual >= 0.0);
  CHECK(rep.fd_pass);
  REQUIRE(rep.fd_checks.size() == 3);
  for (const auto& c : rep.fd_checks) CHECK(c.rel_error <= 1e-5);
  for (double r : rep.r_grid) CHECK(r < rep.r_overflow);

  // nu above the order fails on a large enough grid for every fixed k
  for (double k : {1.0, 2.0, 4.0}) {
    auto fail = verify_counterexample(1, 3, 3.0, 1.0, k, {});
    CHECK_FALSE(fail.pass);
  }

  auto zero_nu = verify_counterexample(1, 3, 0.0, 1.0, 1.0, {});
  CHECK(zero_nu.pass);

  auto shrunk = verify_counterexample(1, 3, 2.0, 1.0, 1.0, {0.0, 1.0, 100.0});
  CHECK(shrunk.dropped_points == 1);
  CHECK(shrunk.r_grid.size() == 2);
}

TEST_CASE("jets of the explicit solution agree with finite differences") {
  Expr u = counterexample_profile(0.5);
  for (double r : {0.5, 1.0, 2.0}) {
    Jet j = jet_eval(u, r, 2);
    auto f = [&](double x) { return evaluate(u, x); };
    double h = 1e-2 * (1 + std::fabs(r));
    double d1 = (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h);
    double d2 = (-f(r + 2 * h) + 16 * f(r + h) - 30 * f(r) + 16 * f(r - h) - f(r - 2 * h)) / (12 * h * h);
    CHECK(j.derivative(1) == doctest::Approx(d1).epsilon(1e-5));
    CHECK(j.derivative(2) == doctest::Approx(d2).epsilon(1e-5));
  }
}
