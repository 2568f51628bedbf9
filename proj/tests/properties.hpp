#pragma once

// Randomized property checks shared by the unit suite and the acceptance run.

#include <cmath>
#include <random>
#include <string>

#include "liouville/format.hpp"
#include "liouville/harness.hpp"
#include "liouville/jet.hpp"
#include "liouville/quadrature.hpp"

namespace properties {

constexpr int kCases = 200;

struct Result {
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures == 0) first_failure = what;
    ++failures;
  }
  bool ok() const { return cases >= kCases && failures == 0; }
};

inline bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(b)); }

inline liouville::RadialProfile random_profile(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> level(0.1, 5.0);
  std::vector<double> grid, u;
  for (int i = 0; i < 64; ++i) {
    grid.push_back(2.0 * i / 63.0);
    u.push_back(level(rng));
  }
  std::vector<double> du(u.size(), 0.0);
  return liouville::RadialProfile::from_samples(n, grid, u, du);
}

inline Result quadrature_additivity() {
  Result res;
  std::mt19937 rng(20240511);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), point(-5.0, 5.0);
  for (int i = 0; i < kCases; ++i) {
    double a = coef(rng), b = coef(rng);
    auto f = [&](double x) { return std::sin(a * x) + b * x * x + std::exp(-x * x); };
    double x0 = point(rng), x1 = point(rng), x2 = point(rng);
    double whole = liouville::integrate_adaptive(f, x0, x2, 1e-12).value;
    double split = liouville::integrate_adaptive(f, x0, x1, 1e-12).value +
                   liouville::integrate_adaptive(f, x1, x2, 1e-12).value;
    res.record(close(split, whole, 1e-9), "case " + std::to_string(i));
  }
  return res;
}

inline Result verdict_scaling() {
  Result res;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> power(0.5, 4.0), log_scale(std::log(1e-3), std::log(1e3));
  std::uniform_int_distribution<int> dim(1, 6), half(1, 3);
  for (int i = 0; i < kCases; ++i) {
    std::string base = "zeta^" + liouville::format_real(power(rng));
    liouville::ProblemSpec a;
    a.m = 2 * half(rng);
    a.n = dim(rng);
    a.g = liouville::Nonlinearity::parse(base);
    liouville::ProblemSpec b = a;
    std::string scaled = liouville::format_real(std::exp(log_scale(rng))) + "*" + base;
    b.g = liouville::Nonlinearity::parse(scaled);
    res.record(classify(a).outcome == classify(b).outcome,
               scaled + " m=" + std::to_string(a.m) + " n=" + std::to_string(a.n));
  }
  return res;
}

inline Result mean_monotone() {
  Result res;
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int i = 0; i < kCases; ++i) {
    liouville::RadialProfile p = random_profile(rng, dim(rng));
    liouville::JFunction J(p, 1.0);
    double prev = 0.0;
    bool ok = true;
    for (double rho : p.grid) {
      double v = J(rho);
      ok = ok && v >= prev;
      prev = v;
    }
    res.record(ok, "profile " + std::to_string(i));
  }
  return res;
}

inline Result jensen_direction() {
  Result res;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> power(1.0, 3.0), radius(0.2, 2.0);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int i = 0; i < kCases; ++i) {
    liouville::RadialProfile p = random_profile(rng, dim(rng));
    auto g = liouville::Nonlinearity::parse("zeta^" + liouville::format_real(power(rng)));
    auto s = liouville::jensen_gap(p, g, radius(rng));
    res.record(s.gap >= -1e-9 * s.mean_source, "profile " + std::to_string(i));
  }
  return res;
}

/// Jet derivatives up to order 4 against central differences of the next
/// lower jet entry, h = 1e-4 (1 + |r|).
inline Result jet_differences() {
  Result res;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), point(0.1, 3.0);
  liouville::ParseOptions po;
  po.variable = "r";
  for (int i = 0; i < kCases; ++i) {
    double a = coef(rng), b = coef(rng), c = coef(rng);
    std::string src = "exp(" + liouville::format_real(a) + "*r)*sqrt(1 + " + liouville::format_real(b * b) +
                      "*r^2) + " + liouville::format_real(std::fabs(c)) + "*r^3 + ln(1 + r^2)";
    liouville::Expr e = liouville::parse_expression(src, po).expr;
    double r = point(rng);
    double h = 1e-4 * (1 + std::fabs(r));
    auto mid = liouville::jet_eval(e, r, 4), hi = liouville::jet_eval(e, r + h, 4), lo = liouville::jet_eval(e, r - h, 4);
    bool ok = true;
    for (int k = 1; k <= 4; ++k) {
      double fd = (hi.derivative(k - 1) - lo.derivative(k - 1)) / (2 * h);
      ok = ok && close(mid.derivative(k), fd, 1e-5);
    }
    res.record(ok, src + " at r=" + liouville::format_real(r));
  }
  return res;
}

}  // namespace properties
