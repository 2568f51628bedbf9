#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "liouville/nonlinearity.hpp"

namespace liouville {

// ---------------------------------------------------------------------------
// Finite-interval adaptive quadrature

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Subdivides the
/// panel with the largest error until the summed error is below
/// max(abs_tol, rel_tol * |value|) or `max_panels` is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-12, double abs_tol = 0.0,
                                    std::size_t max_panels = 2000);

// ---------------------------------------------------------------------------
// Improper integrals of positive integrands with a finiteness verdict

enum class IntegralStatus { Converged, Diverged, Inconclusive };

std::string to_string(IntegralStatus s);

/// One block of the block decomposition. Bounds are natural logs of the
/// integration variable, so blocks far outside the double range of zeta are
/// representable.
struct BlockRecord {
  double log_lo = 0.0;
  double log_hi = 0.0;
  double integral = 0.0;
  double log_integral = -std::numeric_limits<double>::infinity();
  double error = 0.0;
  double partial_sum = 0.0;
  /// integral / previous block integral (NaN for the first block)
  double ratio = std::numeric_limits<double>::quiet_NaN();
};

struct IntegralVerdict {
  IntegralStatus status = IntegralStatus::Inconclusive;
  /// Meaningful only when Converged; +inf when Diverged.
  double value = std::numeric_limits<double>::quiet_NaN();
  /// ln(value); stays finite when value itself under- or overflows.
  double log_value = std::numeric_limits<double>::quiet_NaN();
  double error_bound = std::numeric_limits<double>::infinity();
  /// Which end decided the verdict: "lower", "upper", or "" for finite ranges.
  std::string deciding_end;
  std::string diagnostic;
  std::vector<BlockRecord> lower_blocks;  // blocks toward zeta = 0
  std::vector<BlockRecord> upper_blocks;  // finite blocks and blocks toward infinity

  bool converged() const { return status == IntegralStatus::Converged; }
  bool diverged() const { return status == IntegralStatus::Diverged; }
};

struct ImproperOptions {
  /// Relative tolerance on the value.
  double tol = 1e-9;
  /// Consecutive non-decaying blocks needed to declare divergence.
  int divergence_run = 8;
  /// A non-decaying block must carry at least this multiple of the first block's mass.
  double divergence_floor = 1e-8;
  /// Partial sums above this multiple of the first block are divergent outright.
  double divergence_ceiling = 1e12;
  /// Block ratios at or above 1 - band count as non-decaying.
  double divergent_ratio_band = 0.005;
  /// Block ratios at or below 1 - band count as decaying.
  double convergent_ratio_band = 0.02;
  /// Consecutive decaying blocks needed before a tail extrapolation is trusted.
  int convergence_run = 4;
  /// Largest number of geometric blocks per infinite end.
  int max_blocks = 40;
};

/// Integrand in logarithmic coordinates: returns ln h(s), where the integral
/// over zeta in (e^a, e^b) equals the integral of h(s) over s in (a, b).
/// For an integrand f(zeta), h(s) = f(e^s) e^s.
using LogDensity = std::function<double(double)>;

/// Integrates h over (log_lo, log_hi); either end may be infinite.
///
/// Finite stretches are split at s = 0 and s = +-2^k. Each infinite end is
/// covered by blocks [s0 2^j, s0 2^(j+1)] from a start |s0| >= 1, so that
/// power-law tails in zeta decay super-geometrically across blocks and
/// logarithmic tails (zeta^-1 ln^-p zeta) decay with the constant ratio 2^(1-p).
/// Partial sums in the block records restart for the finite stretch and each end.
/// Convergence is declared from a stable block ratio below one plus an
/// extrapolated tail; divergence from a run of non-decaying blocks or an
/// exploding partial sum.
IntegralVerdict integrate_log_density(const LogDensity& log_h, double log_lo, double log_hi,
                                      const ImproperOptions& options = {});

// ---------------------------------------------------------------------------
// The condition integrand g^(-1/m)(zeta) zeta^(1/m - 1) and its integrals

struct IntegrandValue {
  double value = 0.0;
  /// g(zeta) == 0: the value is the +inf sentinel.
  bool singular = false;
};

IntegrandValue ko_integrand(const Nonlinearity& g, int m, double zeta);

/// ln of the integrand in s = ln zeta, including the Jacobian e^s.
double ko_log_density(const Nonlinearity& g, int m, double s);

/// Integral of ko_integrand over [lower, upper]; `upper` may be +inf.
IntegralVerdict improper_integral(const Nonlinearity& g, int m, double lower, double upper,
                                  const ImproperOptions& options = {});

/// As improper_integral but with bounds given as ln zeta (either may be infinite).
IntegralVerdict improper_integral_log(const Nonlinearity& g, int m, double log_lower, double log_upper,
                                      const ImproperOptions& options = {});

/// G(t), the integral of ko_integrand over [t, inf). Diverged verdicts carry +inf.
IntegralVerdict big_G(const Nonlinearity& g, int m, double t, const ImproperOptions& options = {});

struct GTable {
  int m = 0;
  std::vector<double> t_grid;
  std::vector<double> G_values;  // +inf sentinel when the tail diverges
  std::vector<IntegralStatus> statuses;
  /// Verdict of the integral over (0, t_min): Diverged means G(t) -> inf as t -> 0+.
  IntegralStatus zero_end = IntegralStatus::Inconclusive;
  /// G(0+) when the integral over (0, inf) is finite.
  double sup_G = std::numeric_limits<double>::infinity();

  bool unbounded_at_zero() const { return zero_end == IntegralStatus::Diverged; }
  bool non_increasing() const;
  /// CSV with columns t,G.
  std::string to_csv() const;
};

/// Log-spaced table of G over [t_min, t_max] with `count` entries.
GTable big_G_table(const Nonlinearity& g, int m, double t_min, double t_max, int count,
                   const ImproperOptions& options = {});

/// The classical integral of (int_1^zeta g)^(-1/2) over [1, inf).
IntegralVerdict classical_ko(const Nonlinearity& g, const ImproperOptions& options = {});

}  // namespace liouville
