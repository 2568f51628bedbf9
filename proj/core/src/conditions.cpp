#include "liouville/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "liouville/format.hpp"

namespace liouville {

namespace {

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == -INFINITY) return -INFINITY;
  if (a == INFINITY) return INFINITY;
  return a + std::log1p(std::exp(b - a));
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Largest |s| the inverse search will visit before giving up.
constexpr double kSearchLimit = 1e10;

}  // namespace

void ProblemSpec::validate() const {
  if (m < 1) throw std::invalid_argument("operator order m must be at least 1");
  if (n < 1) throw std::invalid_argument("dimension n must be at least 1");
  if (!(A > 0)) throw std::invalid_argument("coefficient bound A must be positive");
}

std::string to_string(LiminfDecision d) {
  switch (d) {
    case LiminfDecision::Satisfied: return "satisfied";
    case LiminfDecision::Violated: return "violated";
    case LiminfDecision::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::NoGlobalSolutions: return "NoGlobalSolutions";
    case Outcome::OnlyTrivialSolutions: return "OnlyTrivialSolutions";
    case Outcome::BoundOnly: return "BoundOnly";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

IntegralVerdict check_tail_condition(const ProblemSpec& spec, const ImproperOptions& options) {
  spec.validate();
  return improper_integral_log(spec.g, spec.m, 0.0, INFINITY, options);
}

LiminfDiagnostics check_liminf_condition(const ProblemSpec& spec, const IntegralVerdict* tail,
                                         const LiminfOptions& options) {
  spec.validate();
  LiminfDiagnostics d;
  const int power = spec.n - spec.m;
  if (power <= 0) {
    d.decision = LiminfDecision::Satisfied;
    d.reason = "m >= n: the power n-m of G is not positive and t G^(n-m)(t) -> 0";
    return d;
  }
  IntegralVerdict own;
  if (tail == nullptr) {
    own = improper_integral_log(spec.g, spec.m, 0.0, INFINITY, options.integral);
    tail = &own;
  }
  if (tail->diverged()) {
    d.decision = LiminfDecision::Violated;
    d.reason = "G is identically +inf because the integral over [1, inf) diverges";
    return d;
  }
  if (!tail->converged()) {
    d.decision = LiminfDecision::Inconclusive;
    d.reason = "G(1) could not be evaluated: " + tail->diagnostic;
    return d;
  }

  double log_G = tail->log_value;
  bool infinite = false;
  for (int j = 0; j <= options.j_max; ++j) {
    double log_t = -j * std::log(2.0);
    if (j > 0 && !infinite) {
      auto piece = improper_integral_log(spec.g, spec.m, log_t, log_t + std::log(2.0), options.integral);
      if (piece.diverged()) {
        infinite = true;
      } else if (!piece.converged()) {
        d.decision = LiminfDecision::Inconclusive;
        d.reason = "G could not be evaluated at t=" + format_real(std::exp(log_t));
        return d;
      } else {
        log_G = log_add(log_G, piece.log_value);
      }
    }
    double lg = infinite ? INFINITY : log_G;
    double lv = power * lg + log_t;
    d.t_samples.push_back(std::exp(log_t));
    d.G_values.push_back(std::exp(lg));
    d.log_values.push_back(lv);
    d.values.push_back(std::exp(lv));
  }
  if (infinite) {
    d.decision = LiminfDecision::Violated;
    d.reason = "G is infinite at a positive t";
    return d;
  }

  const std::size_t count = d.t_samples.size();
  const std::size_t window = std::min<std::size_t>(count, static_cast<std::size_t>(options.fit_points));
  std::vector<double> xs, ys;
  for (std::size_t i = count - window; i < count; ++i) {
    xs.push_back(std::log(d.t_samples[i]));
    ys.push_back(std::log(d.G_values[i]));
  }
  d.fitted_exponent = least_squares_slope(xs, ys);
  d.limit_exponent = 1.0 + power * d.fitted_exponent;

  double min_log = *std::min_element(d.log_values.begin(), d.log_values.end());
  bool all_above_floor = std::all_of(d.log_values.begin(), d.log_values.end(), [&](double lv) {
    return options.floor > 0.0 ? lv > std::log(options.floor) : lv > -INFINITY;
  });
  const double e = d.limit_exponent;
  if (std::fabs(e) <= options.exact_band || e > options.dead_band) {
    if (min_log <= std::log(options.ceiling)) {
      d.decision = LiminfDecision::Satisfied;
      d.reason = std::fabs(e) <= options.exact_band ? "t G^(n-m)(t) tends to a finite constant"
                                                     : "t G^(n-m)(t) decays like t^" + format_real(e);
    } else {
      d.decision = LiminfDecision::Inconclusive;
      d.reason = "fitted decay but every sample exceeds the ceiling";
    }
  } else if (e < -options.dead_band) {
    if (all_above_floor) {
      d.decision = LiminfDecision::Violated;
      d.reason = "t G^(n-m)(t) grows like t^" + format_real(e);
    } else {
      d.decision = LiminfDecision::Inconclusive;
      d.reason = "fitted growth but some sample is below the floor";
    }
  } else {
    d.decision = LiminfDecision::Inconclusive;
    d.reason = "fitted power of t " + format_real(e) + " lies inside the dead band";
  }
  return d;
}

NonexistenceCheck check_nonexistence_condition(const ProblemSpec& spec, const ImproperOptions& options) {
  spec.validate();
  NonexistenceCheck c;
  c.integral = improper_integral_log(spec.g, spec.m, -INFINITY, INFINITY, options);
  if (c.integral.converged()) {
    try {
      c.g_positive_at_zero = spec.g.evaluate(0.0).value > 0.0;
    } catch (const DomainError&) {
      c.g_positive_at_zero = false;
    }
  }
  return c;
}

Verdict classify(const ProblemSpec& spec, const ClassifyOptions& options) {
  spec.validate();
  Verdict v;
  v.nonexistence = check_nonexistence_condition(spec, options.integral);
  v.tail = check_tail_condition(spec, options.integral);
  LiminfOptions lopts = options.liminf;
  lopts.integral = options.integral;
  v.liminf = check_liminf_condition(spec, &v.tail, lopts);

  const bool none = v.nonexistence.integral.converged();
  const bool tail = v.tail.converged();
  const bool high_order = spec.m >= spec.n;
  const bool liminf = v.liminf.decision == LiminfDecision::Satisfied;

  v.theorems.push_back({"nonexistence", none, "no global weak solutions"});
  v.theorems.push_back({"triviality", tail && liminf, "every global weak solution is trivial"});
  v.theorems.push_back({"triviality-high-order", tail && high_order, "every global weak solution is trivial (m >= n)"});
  v.theorems.push_back({"mean-bound", tail, "r^-n times the integral of |u| over B_r is at most C G^-1(k r)"});
  v.theorems.push_back({"mean-decay", tail, "the ball mean of |u| tends to 0 as r -> inf"});

  if (none) {
    v.outcome = Outcome::NoGlobalSolutions;
  } else if (tail && (liminf || high_order)) {
    v.outcome = Outcome::OnlyTrivialSolutions;
  } else if (tail && v.liminf.decision == LiminfDecision::Violated) {
    v.outcome = Outcome::BoundOnly;
  } else {
    v.outcome = Outcome::Inconclusive;
  }
  return v;
}

KoEquivalence keller_osserman_equivalence(const Nonlinearity& g, const ImproperOptions& options) {
  KoEquivalence r;
  r.generalized = improper_integral_log(g, 2, 0.0, INFINITY, options);
  r.classical = classical_ko(g, options);
  r.agree = r.generalized.status == r.classical.status;
  return r;
}

// ---------------------------------------------------------------------------

GFunction::GFunction(Nonlinearity g, int m, const ImproperOptions& options)
    : g_(std::move(g)), m_(m), options_(options) {
  auto tail = improper_integral_log(g_, m_, 0.0, INFINITY, options_);
  if (!tail.converged()) {
    throw std::invalid_argument("G is not finite: the integral over [1, inf) is " + to_string(tail.status));
  }
  log_G1_ = tail.log_value;
}

double GFunction::log_G(double s) const {
  if (s == 0.0) return log_G1_;
  if (s < 0.0) {
    auto piece = improper_integral_log(g_, m_, s, 0.0, options_);
    if (piece.diverged()) return INFINITY;
    if (!piece.converged()) throw DomainError("G could not be evaluated at t=exp(" + format_real(s) + ")");
    return log_add(log_G1_, piece.log_value);
  }
  auto v = improper_integral_log(g_, m_, s, INFINITY, options_);
  if (!v.converged()) throw DomainError("G could not be evaluated at t=exp(" + format_real(s) + ")");
  return v.log_value;
}

double GFunction::operator()(double t) const {
  if (!(t > 0)) throw std::invalid_argument("G(t) needs t > 0");
  return std::exp(log_G(std::log(t)));
}

double GFunction::log_sup() const {
  if (!log_sup_) {
    auto head = improper_integral_log(g_, m_, -INFINITY, 0.0, options_);
    if (head.diverged()) {
      log_sup_ = INFINITY;
    } else if (head.converged()) {
      log_sup_ = log_add(log_G1_, head.log_value);
    } else {
      throw DomainError("cannot decide whether G is bounded near 0: " + head.diagnostic);
    }
  }
  return *log_sup_;
}

double GFunction::log_inverse(double log_r) const {
  if (std::isnan(log_r)) throw std::invalid_argument("G^-1 needs r > 0");
  auto f = [&](double s) { return log_G(s) - log_r; };
  double f0 = f(0.0);
  if (f0 == 0.0) return 0.0;

  // Bracket a (f > 0) < b (f < 0); G is decreasing in s.
  double a, b, fa, fb;
  if (f0 > 0) {
    a = 0.0;
    fa = f0;
    b = 1.0;
    fb = f(b);
    while (fb > 0) {
      a = b;
      fa = fb;
      b *= 2.0;
      if (b > kSearchLimit) throw DomainError("G^-1 out of reach at r=exp(" + format_real(log_r) + ")");
      fb = f(b);
    }
  } else {
    if (log_r >= log_sup()) throw DomainError("inverse undefined at r=" + format_real(std::exp(log_r)));
    b = 0.0;
    fb = f0;
    a = -1.0;
    fa = f(a);
    while (fa < 0) {
      b = a;
      fb = fa;
      a *= 2.0;
      if (a < -kSearchLimit) throw DomainError("G^-1 out of reach at r=exp(" + format_real(log_r) + ")");
      fa = f(a);
    }
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  // Illinois variant of regula falsi; bisection whenever a value is infinite.
  int side = 0;
  double s = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    if (std::isfinite(fa) && std::isfinite(fb)) {
      s = (a * fb - b * fa) / (fb - fa);
      if (!(s > a && s < b)) s = 0.5 * (a + b);
    } else {
      s = 0.5 * (a + b);
    }
    double fs = f(s);
    if (std::fabs(fs) <= 1e-12 || (b - a) <= 4e-16 * std::max(1.0, std::fabs(s))) return s;
    if (fs > 0) {
      a = s;
      fa = fs;
      if (side == 1) fb *= 0.5;
      side = 1;
    } else {
      b = s;
      fb = fs;
      if (side == -1) fa *= 0.5;
      side = -1;
    }
  }
  return s;
}

double g_inverse_of_G(const ProblemSpec& spec, double r, const ImproperOptions& options) {
  spec.validate();
  if (!(r > 0)) throw std::invalid_argument("G^-1(r) needs r > 0");
  GFunction G(spec.g, spec.m, options);
  return std::exp(G.log_inverse(std::log(r)));
}

double mean_bound(const ProblemSpec& spec, double r, double C, double k, const ImproperOptions& options) {
  spec.validate();
  if (!(r > 0) || !(C > 0) || !(k > 0)) throw std::invalid_argument("mean bound needs r, C, k > 0");
  GFunction G(spec.g, spec.m, options);
  return C * std::exp(G.log_inverse(std::log(k * r)));
}

DecayCurve decay_curve(const ProblemSpec& spec, const std::vector<double>& r_grid, double C, double k,
                       double epsilon, const ImproperOptions& options) {
  spec.validate();
  if (!(C > 0) || !(k > 0)) throw std::invalid_argument("decay curve needs C, k > 0");
  if (r_grid.empty()) throw std::invalid_argument("decay curve needs a non-empty r grid");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
      throw std::invalid_argument("decay curve r grid must be positive and increasing");
    }
  }
  GFunction G(spec.g, spec.m, options);
  DecayCurve c;
  c.r_grid = r_grid;
  c.epsilon = epsilon;
  for (double r : r_grid) {
    double lb = std::log(C) + G.log_inverse(std::log(k * r));
    c.log_bounds.push_back(lb);
    c.bounds.push_back(std::exp(lb));
  }
  c.non_increasing = true;
  c.strictly_decreasing = true;
  for (std::size_t i = 1; i < c.log_bounds.size(); ++i) {
    if (c.log_bounds[i] > c.log_bounds[i - 1]) c.non_increasing = false;
    if (!(c.log_bounds[i] < c.log_bounds[i - 1])) c.strictly_decreasing = false;
  }
  c.reaches_epsilon = c.log_bounds.back() < std::log(epsilon);
  return c;
}

}  // namespace liouville
