#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouville/nonlinearity.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

/// One instance of the inequality: order m, dimension n, coefficient
/// bound A (carried for reports only) and the nonlinearity g.
struct ProblemSpec {
  int m = 2;
  int n = 3;
  double A = 1.0;
  Nonlinearity g;

  /// Throws std::invalid_argument unless m >= 1, n >= 1 and A > 0.
  void validate() const;
};

// ---------------------------------------------------------------------------
// The three conditions

/// Finiteness of the integral of g^(-1/m)(zeta) zeta^(1/m-1) over [1, inf).
IntegralVerdict check_tail_condition(const ProblemSpec& spec, const ImproperOptions& options = {});

enum class LiminfDecision { Satisfied, Violated, Inconclusive };
std::string to_string(LiminfDecision d);

struct LiminfOptions {
  int j_max = 60;           // samples t = 2^-j, j = 0..j_max
  int fit_points = 16;      // least-squares window at the small-t end
  double dead_band = 0.02;  // |1 + (n-m) slope| inside this band is undecided
  /// Inside this (much narrower) band the power of t is zero to working
  /// precision: t G^(n-m)(t) tends to a finite constant, which satisfies
  /// the liminf condition.
  double exact_band = 1e-6;
  double ceiling = 1e100;   // a satisfied verdict needs some sample below this
  double floor = 0.0;       // a violated verdict needs every sample above this
  ImproperOptions integral;
};

/// Evidence for the condition liminf_{t->0+} G^(n-m)(t) t < inf.
struct LiminfDiagnostics {
  std::vector<double> t_samples;   // decreasing
  std::vector<double> G_values;
  std::vector<double> values;      // G^(n-m)(t) t, +inf when G diverges
  std::vector<double> log_values;  // ln of `values`
  /// Least-squares slope of ln G against ln t over the fit window.
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  /// 1 + (n-m) * fitted_exponent: the power of t in t G^(n-m)(t).
  double limit_exponent = std::numeric_limits<double>::quiet_NaN();
  LiminfDecision decision = LiminfDecision::Inconclusive;
  std::string reason;
};

/// Decides the liminf condition from sampled G. When `tail` is given it
/// must be check_tail_condition(spec) and is reused for G(1).
LiminfDiagnostics check_liminf_condition(const ProblemSpec& spec, const IntegralVerdict* tail = nullptr,
                                         const LiminfOptions& options = {});

struct NonexistenceCheck {
  /// Integral of g^(-1/m)(zeta) zeta^(1/m-1) over (0, inf).
  IntegralVerdict integral;
  /// When the integral converges, g(0) > 0 must hold; this records it.
  std::optional<bool> g_positive_at_zero;
};

NonexistenceCheck check_nonexistence_condition(const ProblemSpec& spec, const ImproperOptions& options = {});

// ---------------------------------------------------------------------------
// Classification

enum class Outcome { NoGlobalSolutions, OnlyTrivialSolutions, BoundOnly, Inconclusive };
std::string to_string(Outcome o);

/// One theorem of the battery and whether its hypotheses held.
struct TheoremApplication {
  std::string id;          // "nonexistence", "triviality", "triviality-high-order", "mean-bound", "mean-decay"
  bool applies = false;
  std::string conclusion;  // what the theorem yields when it applies
};

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::vector<TheoremApplication> theorems;
  IntegralVerdict tail;             // integral over [1, inf)
  LiminfDiagnostics liminf;
  NonexistenceCheck nonexistence;   // integral over (0, inf)
};

struct ClassifyOptions {
  ImproperOptions integral;
  LiminfOptions liminf;
};

/// Applies the nonexistence theorem first, then the triviality theorems
/// (including the m >= n case), then the mean bound; anything undecided
/// lands in Inconclusive.
Verdict classify(const ProblemSpec& spec, const ClassifyOptions& options = {});

/// The generalized condition with m = 2 against the classical integral of
/// (int_1^zeta g)^(-1/2); the statuses should agree for admissible g.
struct KoEquivalence {
  IntegralVerdict generalized;
  IntegralVerdict classical;
  bool agree = false;
};

KoEquivalence keller_osserman_equivalence(const Nonlinearity& g, const ImproperOptions& options = {});

// ---------------------------------------------------------------------------
// G, its inverse, and the mean bound

/// G(t) with G(1) cached. Works in s = ln t so that arguments far outside
/// the double range (G^-1 of small r for logarithmic g) are reachable.
class GFunction {
 public:
  /// Throws std::invalid_argument when the integral over [1, inf) does not converge.
  GFunction(Nonlinearity g, int m, const ImproperOptions& options = {});

  /// ln G(e^s).
  double log_G(double s) const;
  double operator()(double t) const;

  /// ln of sup G = G(0+); +inf when G is unbounded near 0.
  double log_sup() const;
  bool unbounded_at_zero() const { return log_sup() == std::numeric_limits<double>::infinity(); }

  /// ln G^-1(r) for r given as ln r. Throws DomainError("inverse undefined at r")
  /// when r >= sup G.
  double log_inverse(double log_r) const;

  int m() const { return m_; }

 private:
  Nonlinearity g_;
  int m_;
  ImproperOptions options_;
  double log_G1_;
  mutable std::optional<double> log_sup_;
};

/// G^-1(r); may under- or overflow for extreme r, see GFunction::log_inverse.
double g_inverse_of_G(const ProblemSpec& spec, double r, const ImproperOptions& options = {});

/// C * G^-1(k r), the bound on r^-n times the integral of |u| over B_r.
double mean_bound(const ProblemSpec& spec, double r, double C, double k, const ImproperOptions& options = {});

struct DecayCurve {
  std::vector<double> r_grid;
  std::vector<double> bounds;
  std::vector<double> log_bounds;
  bool non_increasing = false;
  bool strictly_decreasing = false;
  /// The last entry is below `epsilon`.
  bool reaches_epsilon = false;
  double epsilon = 1e-3;
};

DecayCurve decay_curve(const ProblemSpec& spec, const std::vector<double>& r_grid, double C, double k,
                       double epsilon = 1e-3, const ImproperOptions& options = {});

}  // namespace liouville
