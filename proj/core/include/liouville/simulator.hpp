#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "liouville/conditions.hpp"
#include "liouville/jet.hpp"

namespace liouville {

enum class ProfileStatus { Global, BlowUp, Aborted };
std::string to_string(ProfileStatus s);

/// Sampled radial solution of Delta^(m/2) u = g(u) with the Laplacian
/// cascade v_0 = u, v_(j+1) = Delta v_j, j = 0..m/2-1.
///
/// Each v_j is stored with its radial derivative, so the profile carries a
/// cubic Hermite interpolant between grid points.
class RadialProfile {
 public:
  int n = 3;
  int m = 2;
  std::vector<double> grid;                  // strictly increasing radii, grid[0] = 0
  std::vector<std::vector<double>> cascade;  // cascade[j][i] = v_j(grid[i])
  std::vector<std::vector<double>> slopes;   // slopes[j][i] = v_j'(grid[i])
  /// Accumulated local error estimate of u up to grid[i].
  std::vector<double> local_error;

  ProfileStatus status = ProfileStatus::Global;
  /// Blow-up radius estimate and bracket [lo, hi] (BlowUp only).
  double blowup_radius = std::numeric_limits<double>::quiet_NaN();
  double bracket_lo = std::numeric_limits<double>::quiet_NaN();
  double bracket_hi = std::numeric_limits<double>::quiet_NaN();
  /// Radii at which |u| first reached the doubling levels 2^i above max(1, |u0|).
  std::vector<double> crossing_levels;
  std::vector<double> crossing_radii;
  std::string reason;

  /// A profile from samples of u and u' alone (m = 2); used for closed-form
  /// test profiles.
  static RadialProfile from_samples(int n, std::vector<double> grid, std::vector<double> u,
                                    std::vector<double> du);

  int half_m() const { return m / 2; }
  double r_end() const { return grid.back(); }
  const std::vector<double>& values() const { return cascade.front(); }

  /// Hermite interpolant of v_j (j = 0 is u) and of its derivative.
  double v(int j, double r) const;
  double dv(int j, double r) const;
  double u(double r) const { return v(0, r); }

  /// Index i with grid[i] <= r < grid[i+1] (clamped to the last interval).
  std::size_t interval(double r) const;
};

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Initial values v_j(0) for j >= 1 (v_0(0) = u0); missing entries are 0.
  std::vector<double> cascade_initial;
  /// Length of the Taylor step away from the singular point r = 0.
  double series_step = 1e-3;
  /// Largest step, as a fraction of r_max.
  double max_step_fraction = 1.0 / 256.0;
  /// |u| above this with steps below step_floor signals blow-up.
  double blowup_ceiling = 1e12;
  double step_floor = 1e-3;
  /// Required width of the blow-up bracket.
  double blowup_radius_tol = 1e-6;
  /// Radii the integrator must land on exactly.
  std::vector<double> checkpoints;
  std::size_t max_steps = 2'000'000;
};

/// Integrates the radial system outward from r = 0 with regular initial
/// data v_j'(0) = 0. Requires even m.
RadialProfile integrate_radial(const ProblemSpec& spec, double u0, double r_max,
                               const IntegrationOptions& options = {});

// ---------------------------------------------------------------------------
// The explicit positive solution exp(exp(k sqrt(1 + r^2)))

/// ln ln Z_MAX / k > 1 gives the radius where u reaches Z_MAX; 0 if none.
double counterexample_overflow_radius(double k, double z_max = kDefaultZMax);

struct CounterexampleOptions {
  double k_max = 1048576.0;  // 2^20
  /// k = auto tries k = 2^(i / ladder_steps), i = 0, 1, ...
  int ladder_steps = 8;
  double z_max = kDefaultZMax;
  /// Default grid when none is given: this many points on [0, r_overflow).
  int default_grid_points = 257;
  double fd_tolerance = 1e-5;
};

struct FiniteDifferenceCheck {
  double r = 0.0;
  double jet_value = 0.0;  // (Delta u)(r) / u(r) from jets
  double fd_value = 0.0;   // the same from Richardson-extrapolated central differences
  double rel_error = 0.0;
  bool pass = false;
};

struct CounterexampleReport {
  int half_m = 1;
  int n = 3;
  double nu = 0.0;
  double c0 = 1.0;
  double k = 1.0;
  bool k_auto = false;
  std::vector<double> k_tried;
  /// Certified range [0, r_overflow) where u <= Z_MAX.
  double r_overflow = 0.0;
  std::vector<double> r_grid;  // grid after shrinking to the certified range
  std::size_t dropped_points = 0;
  /// residual / u = (Delta^half_m u)/u - c0 ln^nu(2 + u), which has the
  /// sign of the residual and stays finite where u overflows.
  std::vector<double> scaled_residual;
  /// residual itself; +-inf where it exceeds the double range.
  std::vector<double> residual;
  double min_scaled_residual = std::numeric_limits<double>::quiet_NaN();
  double argmin_r = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  std::vector<FiniteDifferenceCheck> fd_checks;
  bool fd_pass = false;
  std::string note;
};

/// Residual of Delta^half_m u >= c0 u ln^nu(2 + u) for u = exp(exp(k sqrt(1 + r^2))).
/// `k` empty means auto: walk the ladder until the grid check passes or k > k_max.
/// An empty `r_grid` uses the default grid on the certified range.
CounterexampleReport verify_counterexample(int half_m, int n, double nu, double c0, std::optional<double> k,
                                           const std::vector<double>& r_grid,
                                           const CounterexampleOptions& options = {});

/// The profile exp(exp(k sqrt(1 + r^2))) as an expression in r.
Expr counterexample_profile(double k);

}  // namespace liouville
