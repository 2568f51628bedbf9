#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liouville/expression.hpp"

namespace liouville {

/// Default evaluation ceiling; values of g above it saturate to +inf.
inline constexpr double kDefaultZMax = 1e300;

struct Evaluation {
  double value = 0.0;
  bool saturated = false;
};

/// The nonlinearity g(zeta) on the right-hand side of the inequality.
class Nonlinearity {
 public:
  Nonlinearity() = default;
  Nonlinearity(Expr expr, std::string display_name, double z_max = kDefaultZMax);

  /// Parses `source` in the variable `zeta`; extra `parameters` are bound
  /// as named constants.
  static Nonlinearity parse(std::string_view source, const ParseOptions& options = {});

  const Expr& expr() const noexcept { return expr_; }
  const std::string& display_name() const noexcept { return display_name_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  double z_max() const noexcept { return z_max_; }

  /// g(zeta) for 0 <= zeta <= z_max. Results above z_max saturate to +inf
  /// with the flag set. Throws DomainError outside the domain.
  Evaluation evaluate(double zeta) const;
  double operator()(double zeta) const { return evaluate(zeta).value; }

  /// ln g(e^s) in sign/log form; usable far outside the double range of zeta.
  LogValue evaluate_log(double log_zeta) const { return liouville::evaluate_log(expr_, log_zeta); }

  /// c * g as a constant-product tree.
  Nonlinearity scaled(double c) const;
  /// g(c * zeta).
  Nonlinearity dilated(double c) const;

  std::string render() const { return expr_.render("zeta"); }

 private:
  Expr expr_;
  std::string display_name_;
  std::vector<std::string> warnings_;
  double z_max_ = kDefaultZMax;
};

struct SamplingPlan {
  int log_points = 512;
  double log_min = 1e-8;
  double log_max = 1e8;
  int linear_points = 128;
  double linear_min = 0.0;
  double linear_max = 10.0;
  /// tolerance = tol_scale * (1 + |g|)
  double tol_scale = 1e-10;

  /// Merged, sorted, de-duplicated sample points.
  std::vector<double> points() const;
};

struct MonotonicityCheck {
  bool pass = true;
  std::optional<double> witness_lo;  // zeta_1 < zeta_2 with g(zeta_1) > g(zeta_2) + tol
  std::optional<double> witness_hi;
};

struct ConvexityCheck {
  bool pass = true;
  /// (a, (a+b)/2, b) with g(mid) > (g(a)+g(b))/2 + tol.
  std::optional<std::array<double, 3>> witness;
  double worst_violation = 0.0;
};

struct PositivityCheck {
  bool pass = true;
  std::optional<double> witness;  // zeta > 0 with g(zeta) <= 0
};

/// Sampled check of the standing hypotheses on g: non-decreasing, convex,
/// positive on (0, inf). Only the sampled range is certified.
struct AdmissibilityReport {
  MonotonicityCheck nondecreasing;
  ConvexityCheck convex;
  PositivityCheck positive_on_positive;
  std::vector<double> grid;
  /// Evaluation failures (domain errors, saturation) at sample points.
  std::vector<std::string> notes;

  bool admissible() const {
    return nondecreasing.pass && convex.pass && positive_on_positive.pass;
  }
};

AdmissibilityReport check_admissible(const Nonlinearity& g, const SamplingPlan& plan = {});

}  // namespace liouville
