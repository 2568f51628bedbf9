#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "liouville/format.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

std::string to_string(IntegralStatus s) {
  switch (s) {
    case IntegralStatus::Converged: return "Converged";
    case IntegralStatus::Diverged: return "Diverged";
    case IntegralStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

constexpr int kMaxFiniteBlocks = 128;
// Beyond this |s| the rounding of s itself (about 1e-9 in extended
// precision) pollutes the integrand; blocks stop there.
constexpr double kMaxLogArgument = 1e10;

long double log_add(long double a, long double b) {
  if (a < b) std::swap(a, b);
  if (a == -INFINITY) return -INFINITY;
  if (a == INFINITY) return INFINITY;
  return a + std::log1p(std::exp(b - a));
}

struct BlockIntegral {
  double log_value = -INFINITY;  // +inf: overflow or non-integrable point
  double rel_error = 0.0;
};

// Integral of exp(log_h) over [lo, hi], evaluated against a per-block scale
// so that blocks far outside the double range stay representable.
BlockIntegral integrate_block(const LogDensity& log_h, double lo, double hi, double rel_tol) {
  double shift = -INFINITY;
  for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    double v = log_h(lo + f * (hi - lo));
    if (std::isnan(v)) throw DomainError("integrand evaluates to NaN");
    if (v == INFINITY && f > 0.0 && f < 1.0) return {INFINITY, 0.0};
    if (std::isfinite(v)) shift = std::max(shift, v);
  }
  if (shift == -INFINITY) shift = 0.0;
  auto q = integrate_adaptive(
      [&](double s) {
        double v = log_h(s);
        if (std::isnan(v)) throw DomainError("integrand evaluates to NaN");
        return std::exp(v - shift);
      },
      lo, hi, rel_tol, 0.0, 4000);
  if (!std::isfinite(q.value)) return {INFINITY, 0.0};
  if (q.value <= 0.0) return {-INFINITY, 0.0};
  return {shift + std::log(q.value), q.abs_error / q.value};
}

double inner_tolerance(const ImproperOptions& o) { return std::clamp(o.tol * 1e-2, 1e-14, 1e-6); }

struct Piece {
  IntegralStatus status = IntegralStatus::Converged;
  double log_value = -INFINITY;
  double rel_error = 0.0;
  std::string diagnostic;
};

// Cuts at 0 and +-2^k: unit blocks near s = 0, geometric blocks in |s| beyond.
std::vector<double> block_cuts(double lo, double hi) {
  std::vector<double> cuts{lo};
  if (lo < 0.0 && hi > 0.0) cuts.push_back(0.0);
  double reach = std::max(std::fabs(lo), std::fabs(hi));
  for (double c = 1.0; c < reach; c *= 2.0) {
    if (lo < c && c < hi) cuts.push_back(c);
    if (lo < -c && -c < hi) cuts.push_back(-c);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

Piece integrate_finite(const LogDensity& log_h, double lo, double hi, const ImproperOptions& o,
                       std::vector<BlockRecord>& records) {
  Piece out;
  if (!(hi > lo)) return out;
  const std::vector<double> cuts = block_cuts(lo, hi);

  double abs_err_scaled = 0.0;
  double prev = NAN;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    auto b = integrate_block(log_h, cuts[i], cuts[i + 1], inner_tolerance(o));
    if (b.log_value == INFINITY) {
      out.status = IntegralStatus::Diverged;
      out.log_value = INFINITY;
      out.diagnostic = "integrand not integrable on the block [exp(" + format_real(cuts[i]) + "), exp(" +
                       format_real(cuts[i + 1]) + ")]";
      return out;
    }
    double before = out.log_value;
    out.log_value = log_add(out.log_value, b.log_value);
    // running error in units of the running sum
    if (std::isfinite(out.log_value)) {
      double scale_old = std::isfinite(before) ? std::exp(before - out.log_value) : 0.0;
      double w = std::isfinite(b.log_value) ? std::exp(b.log_value - out.log_value) : 0.0;
      abs_err_scaled = abs_err_scaled * scale_old + b.rel_error * w;
    }
    BlockRecord rec;
    rec.log_lo = cuts[i];
    rec.log_hi = cuts[i + 1];
    rec.log_integral = b.log_value;
    rec.integral = std::exp(b.log_value);
    rec.error = rec.integral * b.rel_error;
    rec.partial_sum = std::exp(out.log_value);
    rec.ratio = std::isnan(prev) ? NAN : std::exp(b.log_value - prev);
    prev = b.log_value;
    records.push_back(rec);
  }
  out.rel_error = abs_err_scaled;
  return out;
}

// Blocks [s0 2^j, s0 2^(j+1)] from s0 toward the infinite end on the same
// side of zero; |s0| >= 1. A tail h(s) ~ |s|^-p then has the exact block
// ratio 2^(1-p), and exponential tails die off super-geometrically.
Piece integrate_end(const LogDensity& log_h, double s0, const ImproperOptions& o,
                    std::vector<BlockRecord>& records) {
  Piece out;
  const double log_ceiling = std::log(o.divergence_ceiling);
  const double log_floor = std::log(o.divergence_floor);

  double log_ref = NAN;     // first non-zero block; ceiling and floor are relative to it
  double log_sum = -INFINITY;
  double quad_err = 0.0;    // summed relative quadrature errors, weighted
  std::vector<double> log_blocks;
  std::vector<double> ratios;
  std::vector<double> estimates;  // (sum + tail) / exp(log_ref)
  std::vector<double> aitken;

  for (int j = 0; j < o.max_blocks; ++j) {
    double a = std::ldexp(s0, j);
    double b = std::ldexp(s0, j + 1);
    double lo = std::min(a, b), hi = std::max(a, b);
    if (std::max(std::fabs(lo), std::fabs(hi)) > kMaxLogArgument) {
      out.status = IntegralStatus::Inconclusive;
      out.log_value = log_sum;
      out.diagnostic = "precision exhausted after " + std::to_string(j) + " blocks (|ln zeta| > " +
                       format_real(kMaxLogArgument) + ")";
      if (!ratios.empty()) out.diagnostic += ", last ratio " + format_real(ratios.back());
      return out;
    }
    auto blk = integrate_block(log_h, lo, hi, inner_tolerance(o));

    BlockRecord rec;
    rec.log_lo = lo;
    rec.log_hi = hi;
    rec.log_integral = blk.log_value;
    rec.integral = std::exp(blk.log_value);
    rec.error = rec.integral * blk.rel_error;

    if (blk.log_value == INFINITY) {
      rec.partial_sum = INFINITY;
      records.push_back(rec);
      out.status = IntegralStatus::Diverged;
      out.log_value = INFINITY;
      out.diagnostic = "block " + std::to_string(j) + " integral overflows";
      return out;
    }
    if (std::isnan(log_ref) && std::isfinite(blk.log_value)) log_ref = blk.log_value;
    double prev_sum = log_sum;
    log_sum = log_add(log_sum, blk.log_value);
    if (std::isfinite(log_sum)) {
      double scale_old = std::isfinite(prev_sum) ? std::exp(prev_sum - log_sum) : 0.0;
      double w = std::isfinite(blk.log_value) ? std::exp(blk.log_value - log_sum) : 0.0;
      quad_err = quad_err * scale_old + blk.rel_error * w;
    }
    double ratio = NAN;
    if (!log_blocks.empty()) {
      double p = log_blocks.back();
      if (blk.log_value == -INFINITY) {
        ratio = 0.0;
      } else if (p == -INFINITY) {
        ratio = INFINITY;
      } else {
        ratio = std::exp(blk.log_value - p);
      }
      ratios.push_back(ratio);
    }
    log_blocks.push_back(blk.log_value);
    rec.partial_sum = std::exp(log_sum);
    rec.ratio = ratio;
    records.push_back(rec);

    if (std::isnan(log_ref)) {
      // every block so far is exactly zero
      if (j + 1 >= o.convergence_run) {
        out.log_value = -INFINITY;
        out.diagnostic = "integrand vanishes on the first " + std::to_string(j + 1) + " blocks";
        return out;
      }
      continue;
    }

    if (log_sum - log_ref > log_ceiling) {
      out.status = IntegralStatus::Diverged;
      out.log_value = INFINITY;
      out.diagnostic = "partial sum exceeds " + format_real(o.divergence_ceiling) + " times the first block";
      return out;
    }

    // Divergence: a run of K blocks with non-negligible mass whose ratios
    // neither fall below 1 - band nor trend downward.
    const int K = o.divergence_run;
    if (static_cast<int>(log_blocks.size()) >= K && static_cast<int>(ratios.size()) >= K - 1) {
      bool run = true;
      for (int i = 0; i < K && run; ++i) {
        run = log_blocks[log_blocks.size() - 1 - i] >= log_ref + log_floor;
      }
      std::size_t first = ratios.size() - static_cast<std::size_t>(K - 1);
      for (std::size_t i = first; i < ratios.size() && run; ++i) {
        run = ratios[i] >= 1.0 - o.divergent_ratio_band;
      }
      if (run && ratios.back() >= ratios[first] - o.convergent_ratio_band) {
        out.status = IntegralStatus::Diverged;
        out.log_value = INFINITY;
        out.diagnostic = std::to_string(K) + " consecutive non-decaying blocks, last ratio " + format_real(ratio);
        return out;
      }
    }

    // Geometric tail estimate from the latest ratio.
    double sum_rel = std::exp(log_sum - log_ref);
    double est = NAN;
    if (!ratios.empty() && ratio < 1.0) {
      double tail = ratio == 0.0 ? 0.0 : std::exp(blk.log_value - log_ref) * ratio / (1.0 - ratio);
      est = sum_rel + tail;
    }
    estimates.push_back(est);
    double acc = NAN;
    std::size_t ne = estimates.size();
    if (ne >= 3 && std::isfinite(estimates[ne - 1]) && std::isfinite(estimates[ne - 2]) &&
        std::isfinite(estimates[ne - 3])) {
      double d1 = estimates[ne - 2] - estimates[ne - 3];
      double d2 = estimates[ne - 1] - estimates[ne - 2];
      if (d2 == 0.0) {
        acc = estimates[ne - 1];
      } else if (d2 != d1 && std::fabs(d2) < std::fabs(d1)) {
        acc = estimates[ne - 1] - d2 * d2 / (d2 - d1);
      }
    }
    aitken.push_back(acc);

    const int R = o.convergence_run;
    if (static_cast<int>(ratios.size()) >= R && std::isfinite(est) && ne >= 2 && std::isfinite(estimates[ne - 2])) {
      bool decaying = true;
      for (int i = 0; i < R && decaying; ++i) decaying = ratios[ratios.size() - 1 - i] <= 1.0 - o.convergent_ratio_band;
      if (decaying) {
        double value = est;
        double err = std::fabs(est - estimates[ne - 2]);
        std::size_t na = aitken.size();
        if (na >= 2 && std::isfinite(aitken[na - 1]) && std::isfinite(aitken[na - 2])) {
          double aerr = std::fabs(aitken[na - 1] - aitken[na - 2]);
          if (aerr < err) {
            value = aitken[na - 1];
            err = aerr;
          }
        }
        err += quad_err * sum_rel;
        if (err <= o.tol * value) {
          out.log_value = log_ref + std::log(value);
          out.rel_error = err / value;
          std::ostringstream d;
          d << "converged after " << (j + 1) << " blocks, last ratio " << format_real(ratio);
          out.diagnostic = d.str();
          return out;
        }
      }
    }
  }
  out.status = IntegralStatus::Inconclusive;
  out.log_value = log_sum;
  std::ostringstream d;
  d << "no decision after " << o.max_blocks << " blocks";
  if (!ratios.empty()) d << ", last ratio " << format_real(ratios.back());
  out.diagnostic = d.str();
  return out;
}

}  // namespace

IntegralVerdict integrate_log_density(const LogDensity& log_h, double log_lo, double log_hi,
                                      const ImproperOptions& options) {
  if (std::isnan(log_lo) || std::isnan(log_hi) || !(log_lo < log_hi)) {
    throw std::invalid_argument("integration bounds must satisfy lower < upper");
  }
  if (log_lo == INFINITY || log_hi == -INFINITY) throw std::invalid_argument("empty integration range");

  IntegralVerdict v;
  std::vector<Piece> pieces;
  std::vector<std::string> ends;
  const bool lo_inf = std::isinf(log_lo);
  const bool hi_inf = std::isinf(log_hi);

  if (!lo_inf && !hi_inf) {
    pieces.push_back(integrate_finite(log_h, log_lo, log_hi, options, v.upper_blocks));
    ends.push_back("");
  } else {
    // Finite middle stretch, then geometric blocks from |s| >= 1 outward.
    double mid_lo = lo_inf ? std::min(-1.0, log_hi) : log_lo;
    double mid_hi = hi_inf ? std::max(1.0, log_lo) : log_hi;
    if (lo_inf && !hi_inf && log_hi < -1.0) mid_lo = mid_hi = log_hi;
    if (hi_inf && !lo_inf && log_lo > 1.0) mid_lo = mid_hi = log_lo;
    if (mid_hi > mid_lo) {
      pieces.push_back(integrate_finite(log_h, mid_lo, mid_hi, options, lo_inf && !hi_inf ? v.lower_blocks : v.upper_blocks));
      ends.push_back("");
    }
    if (lo_inf) {
      pieces.push_back(integrate_end(log_h, mid_lo, options, v.lower_blocks));
      ends.push_back("lower");
    }
    if (hi_inf) {
      pieces.push_back(integrate_end(log_h, mid_hi, options, v.upper_blocks));
      ends.push_back("upper");
    }
  }

  // Divergence anywhere decides; otherwise any undecided piece makes the whole undecided.
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].status == IntegralStatus::Diverged) {
      v.status = IntegralStatus::Diverged;
      v.value = INFINITY;
      v.log_value = INFINITY;
      v.deciding_end = ends[i];
      v.diagnostic = pieces[i].diagnostic;
      return v;
    }
  }
  double log_total = -INFINITY;
  double abs_rel_err = 0.0;
  for (const auto& p : pieces) log_total = log_add(log_total, p.log_value);
  for (const auto& p : pieces) {
    if (std::isfinite(p.log_value) && std::isfinite(log_total)) abs_rel_err += p.rel_error * std::exp(p.log_value - log_total);
  }
  std::string diag;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!diag.empty()) diag += "; ";
    diag += (ends[i].empty() ? std::string("finite") : ends[i]) + ": " +
            (pieces[i].diagnostic.empty() ? "ok" : pieces[i].diagnostic);
  }
  v.diagnostic = diag;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].status == IntegralStatus::Inconclusive) {
      v.status = IntegralStatus::Inconclusive;
      v.deciding_end = ends[i];
      return v;
    }
  }
  v.status = IntegralStatus::Converged;
  v.log_value = log_total;
  v.value = std::exp(log_total);
  v.error_bound = abs_rel_err * v.value;
  return v;
}

IntegrandValue ko_integrand(const Nonlinearity& g, int m, double zeta) {
  if (m < 1) throw std::invalid_argument("operator order m must be positive");
  if (!(zeta > 0)) throw DomainError("the condition integrand needs zeta > 0");
  double gv = g.evaluate(zeta).value;
  if (gv == 0.0) return {INFINITY, true};
  if (gv < 0.0) throw DomainError("g is negative at zeta=" + format_real(zeta));
  double inv_m = 1.0 / m;
  return {std::pow(gv, -inv_m) * std::pow(zeta, inv_m - 1.0), false};
}

double ko_log_density(const Nonlinearity& g, int m, double s) {
  LogValue gv = g.evaluate_log(s);
  if (gv.sign == 0) return INFINITY;
  if (gv.sign < 0) throw DomainError("g is negative at zeta=exp(" + format_real(s) + ")");
  return (s - gv.log_abs) / m;
}

IntegralVerdict improper_integral_log(const Nonlinearity& g, int m, double log_lower, double log_upper,
                                      const ImproperOptions& options) {
  if (m < 1) throw std::invalid_argument("operator order m must be positive");
  return integrate_log_density([&](double s) { return ko_log_density(g, m, s); }, log_lower, log_upper, options);
}

IntegralVerdict improper_integral(const Nonlinearity& g, int m, double lower, double upper,
                                  const ImproperOptions& options) {
  if (!(lower >= 0)) throw std::invalid_argument("lower bound must be non-negative");
  if (!(upper > lower)) throw std::invalid_argument("integration bounds must satisfy lower < upper");
  double a = lower == 0 ? -INFINITY : std::log(lower);
  double b = std::isinf(upper) ? INFINITY : std::log(upper);
  return improper_integral_log(g, m, a, b, options);
}

IntegralVerdict big_G(const Nonlinearity& g, int m, double t, const ImproperOptions& options) {
  if (!(t > 0)) throw std::invalid_argument("G(t) needs t > 0");
  return improper_integral_log(g, m, std::log(t), INFINITY, options);
}

bool GTable::non_increasing() const {
  for (std::size_t i = 1; i < G_values.size(); ++i) {
    if (!(G_values[i] <= G_values[i - 1] * (1 + 1e-12))) return false;
  }
  return true;
}

std::string GTable::to_csv() const {
  std::string out = "t,G\n";
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    out += format_real(t_grid[i]) + "," + format_real(G_values[i]) + "\n";
  }
  return out;
}

GTable big_G_table(const Nonlinearity& g, int m, double t_min, double t_max, int count,
                   const ImproperOptions& options) {
  if (!(t_min > 0) || !(t_max > t_min)) throw std::invalid_argument("G table needs 0 < t_min < t_max");
  if (count < 2) throw std::invalid_argument("G table needs at least two points");
  GTable table;
  table.m = m;
  double a = std::log(t_min), b = std::log(t_max);
  for (int i = 0; i < count; ++i) {
    double t = i == 0 ? t_min : (i == count - 1 ? t_max : std::exp(a + (b - a) * i / (count - 1)));
    auto v = big_G(g, m, t, options);
    table.t_grid.push_back(t);
    table.statuses.push_back(v.status);
    table.G_values.push_back(v.converged() ? v.value : (v.diverged() ? INFINITY : NAN));
  }
  auto head = improper_integral_log(g, m, -INFINITY, a, options);
  table.zero_end = head.status;
  if (head.converged() && table.statuses.front() == IntegralStatus::Converged) {
    table.sup_G = head.value + table.G_values.front();
  }
  return table;
}

IntegralVerdict classical_ko(const Nonlinearity& g, const ImproperOptions& options) {
  // Inner integral of g over [1, zeta].
  auto inner = [&](double zeta) {
    auto q = integrate_adaptive([&](double x) { return g.evaluate(x).value; }, 1.0, zeta, 1e-13);
    return q.value;
  };

  // [1, 2] under zeta = 1 + v^2, which removes the inverse square-root singularity at 1.
  auto head = integrate_adaptive(
      [&](double v) {
        double I = inner(1.0 + v * v);
        if (!(I > 0)) throw DomainError("inner integral of g vanishes near 1");
        return 2.0 * v / std::sqrt(I);
      },
      0.0, 1.0, 1e-12);
  if (!std::isfinite(head.value)) {
    IntegralVerdict v;
    v.status = IntegralStatus::Diverged;
    v.value = v.log_value = INFINITY;
    v.diagnostic = "integrand not integrable near zeta=1";
    return v;
  }

  // Tail in s = ln zeta: h(s) = e^s (I(e^s))^(-1/2) with ln I computed in log form.
  const double s2 = std::log(2.0);
  const double log_I2 = std::log(inner(2.0));
  auto L = [&](double sigma) {
    LogValue gv = g.evaluate_log(sigma);
    if (gv.sign < 0) throw DomainError("g is negative");
    return gv.sign == 0 ? -INFINITY : gv.log_abs + sigma;
  };
  auto log_inner = [&](double s) {
    double Ls = L(s);
    // For non-decreasing g, exp(L(sigma) - L(s)) <= exp(sigma - s); mass further
    // than 50 below s and the head I(2) are below e^-50 relative.
    constexpr double kWindow = 50.0;
    bool truncate = s - kWindow > s2;
    double from = truncate ? s - kWindow : s2;
    auto q = integrate_adaptive([&](double sigma) { return std::exp(L(sigma) - Ls); }, from, s, 1e-13);
    long double log_part = Ls + std::log(static_cast<long double>(q.value));
    return truncate ? log_part : log_add(log_I2, log_part);
  };
  auto tail = integrate_log_density(
      [&](double s) { return static_cast<double>(s - 0.5L * log_inner(s)); }, s2, INFINITY, options);
  if (!tail.converged()) return tail;
  tail.value += head.value;
  tail.log_value = std::log(tail.value);
  tail.error_bound += head.abs_error;
  return tail;
}

}  // namespace liouville
