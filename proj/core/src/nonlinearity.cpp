#include "liouville/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace liouville {

Nonlinearity::Nonlinearity(Expr expr, std::string display_name, double z_max)
    : expr_(std::move(expr)), display_name_(std::move(display_name)), z_max_(z_max) {}

Nonlinearity Nonlinearity::parse(std::string_view source, const ParseOptions& options) {
  ParseOptions opts = options;
  opts.variable = "zeta";
  auto parsed = parse_expression(source, opts);
  Nonlinearity g(parsed.expr, std::string(source));
  g.warnings_ = std::move(parsed.warnings);
  return g;
}

Evaluation Nonlinearity::evaluate(double zeta) const {
  if (!(zeta >= 0)) throw DomainError("g evaluated at a negative argument");
  if (zeta > z_max_) throw DomainError("g evaluated beyond the evaluation ceiling");
  double v = liouville::evaluate(expr_, zeta);
  if (std::fabs(v) > z_max_) return {std::copysign(INFINITY, v), true};
  return {v, false};
}

Nonlinearity Nonlinearity::scaled(double c) const {
  Nonlinearity g(Expr::constant(c) * expr_, display_name_.empty() ? "" : "(" + display_name_ + ") scaled", z_max_);
  return g;
}

Nonlinearity Nonlinearity::dilated(double c) const {
  return Nonlinearity(expr_.substitute(Expr::constant(c) * Expr::variable()), display_name_ + " dilated", z_max_);
}

std::vector<double> SamplingPlan::points() const {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(log_points + linear_points));
  if (log_points > 1) {
    double a = std::log(log_min), b = std::log(log_max);
    for (int i = 0; i < log_points; ++i) pts.push_back(std::exp(a + (b - a) * i / (log_points - 1)));
  }
  if (linear_points > 1) {
    for (int i = 0; i < linear_points; ++i) {
      pts.push_back(linear_min + (linear_max - linear_min) * i / (linear_points - 1));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

AdmissibilityReport check_admissible(const Nonlinearity& g, const SamplingPlan& plan) {
  AdmissibilityReport report;
  report.grid = plan.points();

  std::vector<double> zs;
  std::vector<double> vals;
  zs.reserve(report.grid.size());
  vals.reserve(report.grid.size());
  for (double z : report.grid) {
    try {
      auto ev = g.evaluate(z);
      if (ev.saturated) {
        report.notes.push_back("saturated at zeta=" + std::to_string(z));
        continue;
      }
      zs.push_back(z);
      vals.push_back(ev.value);
    } catch (const DomainError& e) {
      report.notes.push_back(std::string(e.what()) + " at zeta=" + std::to_string(z));
      report.positive_on_positive.pass = false;
      if (!report.positive_on_positive.witness) report.positive_on_positive.witness = z;
    }
  }
  auto tol = [&](double a, double b) { return plan.tol_scale * (1.0 + std::max(std::fabs(a), std::fabs(b))); };

  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (zs[i] > 0 && !(vals[i] > 0) && report.positive_on_positive.pass) {
      report.positive_on_positive.pass = false;
      report.positive_on_positive.witness = zs[i];
    }
    if (i > 0 && vals[i - 1] > vals[i] + tol(vals[i - 1], vals[i]) && report.nondecreasing.pass) {
      report.nondecreasing.pass = false;
      report.nondecreasing.witness_lo = zs[i - 1];
      report.nondecreasing.witness_hi = zs[i];
    }
  }

  // Midpoint convexity over every sampled pair; the reported witness is the
  // pair with the largest violation relative to the local scale.
  double worst = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    for (std::size_t j = i + 1; j < zs.size(); ++j) {
      double mid = 0.5 * (zs[i] + zs[j]);
      double gm;
      try {
        auto ev = g.evaluate(mid);
        if (ev.saturated) continue;
        gm = ev.value;
      } catch (const DomainError&) {
        continue;
      }
      double chord = 0.5 * (vals[i] + vals[j]);
      double excess = gm - chord;
      double t = tol(gm, chord);
      if (excess > t) {
        double rel = excess / (1.0 + std::fabs(chord));
        if (rel > worst) {
          worst = rel;
          report.convex.pass = false;
          report.convex.witness = std::array<double, 3>{zs[i], mid, zs[j]};
          report.convex.worst_violation = excess;
        }
      }
    }
  }
  return report;
}

}  // namespace liouville
