#include "liouville/harness.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "liouville/format.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

namespace {

constexpr double kRelTol = 1e-12;

void check_dimension(int n) {
  if (n < 1) throw std::invalid_argument("dimension n must be at least 1");
}

// omega_n * integral over [a, b] of f(s) s^(n-1), with f sampled on the profile.
template <class F>
double shell_integral(const RadialProfile& p, double a, double b, F f) {
  if (b <= a) return 0.0;
  const int n = p.n;
  auto q = integrate_adaptive([&](double s) { return f(s) * std::pow(s, n - 1); }, a, b, kRelTol, 0.0, 200);
  return unit_sphere_area(n) * q.value;
}

template <class F>
double ball_integral(const RadialProfile& p, double rho, F f) {
  if (rho < 0.0) throw std::invalid_argument("radius must be non-negative");
  p.interval(rho);  // range check
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.grid.size() && p.grid[i] < rho; ++i) {
    total += shell_integral(p, p.grid[i], std::min(p.grid[i + 1], rho), f);
  }
  return total;
}

}  // namespace

double ball_volume(int n, double r) {
  check_dimension(n);
  if (!(r >= 0)) throw std::invalid_argument("radius must be non-negative");
  double half = 0.5 * n;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0)) * std::pow(r, n);
}

double unit_sphere_area(int n) {
  check_dimension(n);
  double half = 0.5 * n;
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - std::lgamma(half));
}

// ---------------------------------------------------------------------------
// J_r

JFunction::JFunction(const RadialProfile& profile, double r) : profile_(&profile), r_(r) {
  if (!(r > 0)) throw std::invalid_argument("base radius r must be positive");
  ball_2r_ = ball_volume(profile.n, 2.0 * r);
  cumulative_.assign(profile.grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < profile.grid.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + partial(i, profile.grid[i + 1]);
  }
}

double JFunction::partial(std::size_t i, double rho) const {
  const RadialProfile& p = *profile_;
  return shell_integral(p, p.grid[i], rho, [&](double s) { return std::fabs(p.u(s)); });
}

double JFunction::mass(double rho) const {
  if (rho < 0.0) throw std::invalid_argument("radius must be non-negative");
  std::size_t i = profile_->interval(rho);
  return cumulative_[i] + partial(i, std::min(rho, profile_->grid[i + 1]));
}

double J_of_rho(const RadialProfile& profile, double r, double rho) { return JFunction(profile, r)(rho); }

double source_mass(const RadialProfile& profile, const Nonlinearity& g, double rho) {
  return ball_integral(profile, rho, [&](double s) { return g(std::fabs(profile.u(s))); });
}

// ---------------------------------------------------------------------------
// Doubling sequence

std::string to_string(Termination t) { return t == Termination::Endpoint ? "Endpoint" : "Doubling"; }

DoublingTrace doubling_sequence(const RadialProfile& profile, const ProblemSpec& spec, double r) {
  spec.validate();
  if (!(r > 0)) throw std::invalid_argument("base radius r must be positive");
  if (2.0 * r > profile.r_end() * (1.0 + 1e-12)) {
    throw std::out_of_range("profile must cover [0, 2r]; it ends at " + format_real(profile.r_end()));
  }
  const double two_r = std::min(2.0 * r, profile.r_end());
  JFunction J(profile, r);

  DoublingTrace tr;
  tr.r = r;
  tr.J_r = J(r);
  tr.J_2r = J(two_r);
  if (!(tr.J_r > 0)) throw std::invalid_argument("J_r(r) must be positive (u vanishes on B_r)");

  tr.r_sequence = {r};
  tr.J_values = {tr.J_r};
  const double width = 1e-10 * r;
  while (tr.r_sequence.back() < 1.5 * r) {
    double ri = tr.r_sequence.back();
    double target = 2.0 * tr.J_values.back();
    if (tr.J_2r <= target) {
      tr.r_sequence.push_back(2.0 * r);
      tr.J_values.push_back(tr.J_2r);
      tr.termination = Termination::Endpoint;
      break;
    }
    double lo = ri, hi = two_r;
    while (hi - lo > width) {
      double mid = 0.5 * (lo + hi);
      if (J(mid) <= target) lo = mid; else hi = mid;
    }
    double Jlo = J(lo);
    tr.r_sequence.push_back(lo);
    tr.J_values.push_back(Jlo);
    tr.termination = Termination::Doubling;
    tr.max_doubling_error = std::max(tr.max_doubling_error, std::fabs(Jlo / target - 1.0));
    if (tr.r_sequence.size() > 100000) throw std::runtime_error("doubling sequence failed to terminate");
  }
  tr.doubling_ok = tr.max_doubling_error <= 1e-6;

  const Nonlinearity& g = spec.g;
  const double m = spec.m;
  const double a = std::log(tr.J_r), b = std::log(tr.J_2r);
  double reciprocal = integrate_adaptive([&](double s) {
    double z = std::exp(s);
    return z / g(0.5 * z);
  }, a, b, 1e-10).value;
  double root = integrate_adaptive([&](double s) {
    double z = std::exp(s);
    return std::pow(g(0.5 * z), -1.0 / m) * std::pow(z, 1.0 / m);
  }, a, b, 1e-10).value;
  tr.C_reciprocal = reciprocal / std::pow(r, m);
  tr.C_root = root / r;
  if (tr.C_reciprocal >= tr.C_root) {
    tr.branch = "reciprocal";
    tr.empirical_C = tr.C_reciprocal;
  } else {
    tr.branch = "root";
    tr.empirical_C = tr.C_root;
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Annulus ratio

AnnulusReport annulus_ratio(const RadialProfile& profile, const ProblemSpec& spec, double r1, double r2) {
  spec.validate();
  if (!(r1 > 0 && r2 > r1 && r2 <= 2.0 * r1)) throw std::invalid_argument("need 0 < r1 < r2 <= 2 r1");
  AnnulusReport rep;
  rep.r1 = r1;
  rep.r2 = r2;
  JFunction J(profile, r1);
  rep.annulus_mass = J.mass(r2) - J.mass(r1);
  rep.source_mass = source_mass(profile, spec.g, r1);
  if (!(rep.source_mass > 0)) throw std::invalid_argument("trivial profile: g(|u|) has zero mass on B_r1");
  rep.empirical_constant = rep.annulus_mass / (std::pow(r2 - r1, spec.m) * rep.source_mass);
  rep.pass = rep.empirical_constant > 0;
  rep.note = "evaluated on a radial solution of the equation";
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison of the two integrals

ComparisonReport integral_comparison(const ComparisonCase& c) {
  if (!(c.theta > 1)) throw std::invalid_argument("theta must exceed 1");
  if (!(c.alpha > 0 && c.alpha <= 1)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(c.nu > 1)) throw std::invalid_argument("nu must exceed 1");
  if (!(c.M1 > 0)) throw std::invalid_argument("M1 must be positive");
  if (!(c.M2 >= c.nu * c.M1)) throw std::invalid_argument("need M2 >= nu * M1");
  if (c.hypothesis_points < 2 || c.window_points < 2) throw std::invalid_argument("need at least two sample points");

  ComparisonReport rep;
  rep.hypothesis_margin = INFINITY;
  const double ratio = c.M2 / c.M1;
  for (int i = 0; i < c.hypothesis_points; ++i) {
    double z = c.M1 * std::pow(ratio, static_cast<double>(i) / (c.hypothesis_points - 1));
    double gz = c.gamma(z);
    double lowest = INFINITY;
    for (int j = 0; j < c.window_points; ++j) {
      double w = z / c.theta * std::pow(c.theta, 2.0 * j / (c.window_points - 1));
      double pw = c.psi(w);
      if (!(pw > 0)) throw DomainError("psi must be positive; psi(" + format_real(w) + ") = " + format_real(pw));
      lowest = std::min(lowest, pw);
    }
    if (!(gz > 0)) throw DomainError("gamma must be positive; gamma(" + format_real(z) + ") = " + format_real(gz));
    double margin = lowest - gz;
    if (margin < rep.hypothesis_margin) {
      rep.hypothesis_margin = margin;
      rep.hypothesis_witness = z;
    }
    if (margin < -1e-12 * std::max(lowest, gz)) {
      throw DomainError("hypothesis gamma <= min psi over [zeta/theta, theta zeta] fails at zeta=" + format_real(z));
    }
  }

  double left = integrate_adaptive([&](double z) { return std::pow(c.gamma(z), -c.alpha) * std::pow(z, c.alpha - 1.0); },
                                   c.M1, c.M2, 1e-13).value;
  rep.lhs = std::pow(left, 1.0 / c.alpha);
  rep.rhs_core = integrate_adaptive([&](double z) { return 1.0 / c.psi(z); }, c.M1, c.M2, 1e-13).value;
  rep.empirical_constant = rep.lhs / rep.rhs_core;
  rep.pass = rep.empirical_constant > 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Tail bound from the mean

TailBoundReport tail_bound_check(const RadialProfile& profile, const ProblemSpec& spec, double r,
                            const ImproperOptions& options) {
  spec.validate();
  if (!(r > 0)) throw std::invalid_argument("base radius r must be positive");
  TailBoundReport rep;
  rep.r = r;
  rep.J_r = J_of_rho(profile, r, r);
  if (!(rep.J_r > 0)) throw std::invalid_argument("J_r(r) must be positive (u vanishes on B_r)");
  // zeta = 4 t turns the integral into 4^(1/m) G(J/4).
  IntegralVerdict v = big_G(spec.g, spec.m, rep.J_r / 4.0, options);
  rep.status = v.status;
  if (v.diverged()) throw DomainError("tail integral diverges; the tail condition fails for this g and m");
  if (!v.converged()) {
    rep.note = "tail integral inconclusive: " + v.diagnostic;
    return rep;
  }
  rep.lhs = std::pow(4.0, 1.0 / spec.m) * v.value;
  rep.empirical_constant = rep.lhs / r;
  rep.pass = rep.empirical_constant > 0;
  rep.note = "evaluated on a radial solution of the equation";
  return rep;
}

JensenSample jensen_gap(const RadialProfile& profile, const Nonlinearity& g, double rho) {
  if (!(rho > 0)) throw std::invalid_argument("radius must be positive");
  JensenSample s;
  s.rho = rho;
  double vol = ball_volume(profile.n, rho);
  s.mean_source = source_mass(profile, g, rho) / vol;
  s.source_of_mean = g(JFunction(profile, rho).mass(rho) / vol);
  s.gap = s.mean_source - s.source_of_mean;
  return s;
}

}  // namespace liouville
