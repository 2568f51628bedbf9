#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouville/conditions.hpp"
#include "liouville/simulator.hpp"

namespace liouville {

/// pi^(n/2) r^n / Gamma(n/2 + 1).
double ball_volume(int n, double r);
/// Area of the unit sphere in R^n, 2 pi^(n/2) / Gamma(n/2).
double unit_sphere_area(int n);

/// J_r(rho) = (1/|B_2r|) * integral of |u| over B_rho, on the profile's
/// Hermite interpolant. Cumulative masses per grid interval are cached.
class JFunction {
 public:
  JFunction(const RadialProfile& profile, double r);

  double r() const noexcept { return r_; }
  /// Integral of |u| over B_rho.
  double mass(double rho) const;
  double operator()(double rho) const { return mass(rho) / ball_2r_; }

 private:
  double partial(std::size_t i, double rho) const;

  const RadialProfile* profile_;
  double r_;
  double ball_2r_;
  std::vector<double> cumulative_;  // mass of B_{grid[i]}
};

double J_of_rho(const RadialProfile& profile, double r, double rho);

/// Integral of g(|u|) over B_rho.
double source_mass(const RadialProfile& profile, const Nonlinearity& g, double rho);

enum class Termination { Endpoint, Doubling };
std::string to_string(Termination t);

/// The two alternative lower bounds over [J_r(r), J_r(2r)]:
///   reciprocal: integral of 1 / g(zeta/2)                     >= C r^m
///   root:       integral of g^(-1/m)(zeta/2) zeta^(1/m - 1)   >= C r
struct DoublingTrace {
  double r = 0.0;
  std::vector<double> r_sequence;
  std::vector<double> J_values;  // J_r(r_i)
  Termination termination = Termination::Endpoint;
  std::string branch;            // "reciprocal" or "root": the one with the larger constant
  double empirical_C = 0.0;
  double C_reciprocal = 0.0;
  double C_root = 0.0;
  double J_r = 0.0;
  double J_2r = 0.0;
  /// Largest |J_r(r_(i+1)) / (2 J_r(r_i)) - 1| over the doubling steps.
  double max_doubling_error = 0.0;
  bool doubling_ok = true;
};

/// Builds r_0 = r, r_(i+1) = sup{rho in [r_i, 2r] : J_r(rho) <= 2 J_r(r_i)} until
/// r_i >= 3r/2 and evaluates both alternative bounds. The profile must cover [0, 2r].
DoublingTrace doubling_sequence(const RadialProfile& profile, const ProblemSpec& spec, double r);

struct AnnulusReport {
  double r1 = 0.0;
  double r2 = 0.0;
  double annulus_mass = 0.0;  // integral of |u| over B_r2 \ B_r1
  double source_mass = 0.0;   // integral of g(|u|) over B_r1
  double empirical_constant = 0.0;
  bool pass = false;
  std::string note;
};

/// annulus_mass / ((r2 - r1)^m source_mass), for 0 < r1 < r2 <= 2 r1.
AnnulusReport annulus_ratio(const RadialProfile& profile, const ProblemSpec& spec, double r1, double r2);

struct ComparisonCase {
  Nonlinearity psi;
  Nonlinearity gamma;
  double theta = 2.0;
  double alpha = 0.5;
  double nu = 2.0;
  double M1 = 1.0;
  double M2 = 4.0;
  /// Points of [M1, M2] where the hypothesis is sampled, and points per window.
  int hypothesis_points = 129;
  int window_points = 65;
};

struct ComparisonReport {
  double lhs = 0.0;       // (integral of gamma^(-alpha) zeta^(alpha-1))^(1/alpha)
  double rhs_core = 0.0;  // integral of 1/psi
  double empirical_constant = 0.0;
  bool pass = false;
  /// Smallest margin min(psi over the window) - gamma(zeta) and where it occurs.
  double hypothesis_margin = 0.0;
  double hypothesis_witness = 0.0;
};

/// Throws std::invalid_argument on a parameter guard and DomainError when the
/// sampled hypothesis gamma(zeta) <= min psi over [zeta/theta, theta zeta] fails.
ComparisonReport integral_comparison(const ComparisonCase& c);

struct TailBoundReport {
  double r = 0.0;
  double J_r = 0.0;
  double lhs = 0.0;  // integral over [J_r(r), inf) of g^(-1/m)(zeta/4) zeta^(1/m - 1)
  double empirical_constant = 0.0;
  bool pass = false;
  IntegralStatus status = IntegralStatus::Converged;
  std::string note;
};

/// Throws DomainError when the tail integral diverges.
TailBoundReport tail_bound_check(const RadialProfile& profile, const ProblemSpec& spec, double r,
                            const ImproperOptions& options = {});

struct JensenSample {
  double rho = 0.0;
  double mean_source = 0.0;  // mean of g(|u|) over B_rho
  double source_of_mean = 0.0;  // g(mean of |u| over B_rho)
  double gap = 0.0;
};

/// mean_source - source_of_mean, non-negative for convex g up to quadrature error.
JensenSample jensen_gap(const RadialProfile& profile, const Nonlinearity& g, double rho);

}  // namespace liouville
