#include "liouville/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "liouville/format.hpp"

namespace liouville {

std::string to_string(ProfileStatus s) {
  switch (s) {
    case ProfileStatus::Global: return "Global";
    case ProfileStatus::BlowUp: return "BlowUp";
    case ProfileStatus::Aborted: return "Aborted";
  }
  return "Aborted";
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile RadialProfile::from_samples(int n, std::vector<double> grid, std::vector<double> u,
                                          std::vector<double> du) {
  if (grid.size() < 2 || u.size() != grid.size() || du.size() != grid.size()) {
    throw std::invalid_argument("profile samples need matching grid, u and u' of length >= 2");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("profile grid must be strictly increasing");
  }
  if (grid.front() != 0.0) throw std::invalid_argument("profile grid must start at r = 0");
  RadialProfile p;
  p.n = n;
  p.m = 2;
  p.local_error.assign(grid.size(), 0.0);
  p.grid = std::move(grid);
  p.cascade = {std::move(u)};
  p.slopes = {std::move(du)};
  p.status = ProfileStatus::Global;
  return p;
}

std::size_t RadialProfile::interval(double r) const {
  if (grid.size() < 2) throw std::logic_error("profile has fewer than two samples");
  if (r < 0.0 || r > grid.back() * (1.0 + 1e-12)) {
    throw std::out_of_range("radius " + format_real(r) + " lies outside the profile range [0, " +
                            format_real(grid.back()) + "]");
  }
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(i, grid.size() - 2);
}

double RadialProfile::v(int j, double r) const {
  std::size_t i = interval(r);
  const auto& y = cascade.at(static_cast<std::size_t>(j));
  const auto& d = slopes.at(static_cast<std::size_t>(j));
  double h = grid[i + 1] - grid[i];
  double t = (r - grid[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

double RadialProfile::dv(int j, double r) const {
  std::size_t i = interval(r);
  const auto& y = cascade.at(static_cast<std::size_t>(j));
  const auto& d = slopes.at(static_cast<std::size_t>(j));
  double h = grid[i + 1] - grid[i];
  double t = (r - grid[i]) / h;
  double t2 = t * t;
  double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1, d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
  return (d00 * y[i] + d01 * y[i + 1]) / h + d10 * d[i] + d11 * d[i + 1];
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace {

constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// fifth-order weights minus fourth-order weights
constexpr double kE[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

using State = std::vector<double>;

class RadialSystem {
 public:
  RadialSystem(const ProblemSpec& spec) : g_(spec.g), n_(spec.n), half_(spec.m / 2) {}

  int size() const { return 2 * half_; }

  double source(double u) const {
    double a = std::fabs(u);
    if (!std::isfinite(a) || a > g_.z_max()) return INFINITY;
    return g_.evaluate(a).value;
  }

  // F_j: right-hand side of Delta v_j.
  double forcing(const State& y, int j) const {
    return j + 1 < half_ ? y[static_cast<std::size_t>(2 * (j + 1))] : source(y[0]);
  }

  void rhs(double r, const State& y, State& dy) const {
    for (int j = 0; j < half_; ++j) {
      auto v = static_cast<std::size_t>(2 * j);
      dy[v] = y[v + 1];
      dy[v + 1] = forcing(y, j) - (n_ - 1) * y[v + 1] / r;
    }
  }

  int n() const { return n_; }
  int half() const { return half_; }

 private:
  const Nonlinearity& g_;
  int n_;
  int half_;
};

struct Step {
  State y;
  State err;
  State dy_end;
  bool finite = true;
};

Step dp45_step(const RadialSystem& sys, double r, const State& y, const State& dy0, double h) {
  const std::size_t N = y.size();
  std::array<State, 7> k;
  k[0] = dy0;
  State tmp(N);
  Step out;
  for (int s = 1; s < 7; ++s) {
    for (std::size_t i = 0; i < N; ++i) {
      double acc = y[i];
      for (int q = 0; q < s; ++q) acc += h * kA[s][q] * k[static_cast<std::size_t>(q)][i];
      tmp[i] = acc;
    }
    k[static_cast<std::size_t>(s)].assign(N, 0.0);
    sys.rhs(r + kC[s] * h, tmp, k[static_cast<std::size_t>(s)]);
  }
  out.y = tmp;  // stage 7 is evaluated at the fifth-order solution (FSAL)
  out.dy_end = k[6];
  out.err.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    double e = 0.0;
    for (int s = 0; s < 7; ++s) e += kE[s] * k[static_cast<std::size_t>(s)][i];
    out.err[i] = h * e;
    if (!std::isfinite(out.y[i]) || !std::isfinite(out.err[i]) || !std::isfinite(out.dy_end[i])) out.finite = false;
  }
  return out;
}

void record(RadialProfile& p, double r, const State& y, double err) {
  p.grid.push_back(r);
  for (int j = 0; j < p.half_m(); ++j) {
    p.cascade[static_cast<std::size_t>(j)].push_back(y[static_cast<std::size_t>(2 * j)]);
    p.slopes[static_cast<std::size_t>(j)].push_back(y[static_cast<std::size_t>(2 * j + 1)]);
  }
  p.local_error.push_back(err);
}

// Radius in (r0, r1] where the Hermite interpolant of |u| reaches `level`.
double crossing_radius(const RadialProfile& p, double level) {
  std::size_t i = p.grid.size() - 2;
  double lo = p.grid[i], hi = p.grid[i + 1];
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (std::fabs(p.u(mid)) < level) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Aitken extrapolation of the last three crossing radii.
std::optional<double> aitken_limit(const std::vector<double>& r) {
  if (r.size() < 3) return std::nullopt;
  double a = r[r.size() - 3], b = r[r.size() - 2], c = r[r.size() - 1];
  double d1 = b - a, d2 = c - b;
  if (d2 == d1) return std::nullopt;
  double lim = c - d2 * d2 / (d2 - d1);
  if (!std::isfinite(lim)) return std::nullopt;
  return std::max(lim, c);
}

}  // namespace

RadialProfile integrate_radial(const ProblemSpec& spec, double u0, double r_max, const IntegrationOptions& o) {
  spec.validate();
  if (spec.m % 2 != 0) throw std::invalid_argument("the radial simulator needs an even order m");
  if (!(r_max > 0)) throw std::invalid_argument("r_max must be positive");
  if (!std::isfinite(u0)) throw std::invalid_argument("u0 must be finite");

  RadialSystem sys(spec);
  const int half = sys.half();
  const std::size_t N = static_cast<std::size_t>(sys.size());

  RadialProfile p;
  p.n = spec.n;
  p.m = spec.m;
  p.cascade.resize(static_cast<std::size_t>(half));
  p.slopes.resize(static_cast<std::size_t>(half));

  State y(N, 0.0);
  y[0] = u0;
  for (int j = 1; j < half; ++j) {
    auto idx = static_cast<std::size_t>(j - 1);
    y[static_cast<std::size_t>(2 * j)] = idx < o.cascade_initial.size() ? o.cascade_initial[idx] : 0.0;
  }
  record(p, 0.0, y, 0.0);

  // Series start: v_j(h0) = v_j(0) + F_j(0) h0^2 / (2n), v_j'(h0) = F_j(0) h0 / n.
  const double h0 = std::min(o.series_step, r_max / 1000.0);
  {
    State y0 = y;
    for (int j = 0; j < half; ++j) {
      double F = sys.forcing(y0, j);
      auto v = static_cast<std::size_t>(2 * j);
      y[v] = y0[v] + F * h0 * h0 / (2.0 * spec.n);
      y[v + 1] = F * h0 / spec.n;
    }
  }
  double r = h0;
  double accumulated = 0.0;
  record(p, r, y, accumulated);

  std::vector<double> checkpoints;
  for (double c : o.checkpoints) {
    if (c > r && c < r_max) checkpoints.push_back(c);
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  std::size_t next_cp = 0;

  const double h_max = r_max * o.max_step_fraction;
  double h = std::min(h0, h_max);
  State dy(N);
  sys.rhs(r, y, dy);

  // |u| crossings of the doubling levels 2^i above the initial value
  bool blowup_phase = false;
  std::size_t phase_crossings = 0;
  int level_index = static_cast<int>(std::floor(std::log2(std::max(1.0, std::fabs(u0))))) + 1;
  std::vector<double> estimates;

  auto level = [&](int i) { return std::ldexp(1.0, i); };
  auto finish_blowup = [&](double radius, double lo, double hi, const std::string& why) {
    p.status = ProfileStatus::BlowUp;
    p.blowup_radius = radius;
    p.bracket_lo = lo;
    p.bracket_hi = hi;
    p.reason = why;
  };
  auto finish_from_crossings = [&](const std::string& why) {
    double lo = p.grid.back();
    if (estimates.empty()) {
      finish_blowup(lo, lo, lo + h, why);
      return;
    }
    double est = std::max(estimates.back(), lo);
    double spread = estimates.size() >= 2 ? std::fabs(estimates.back() - estimates[estimates.size() - 2]) : 0.0;
    finish_blowup(est, lo, est + spread, why);
  };

  for (std::size_t steps = 0; steps < o.max_steps; ++steps) {
    if (r >= r_max) {
      p.status = ProfileStatus::Global;
      p.reason = "reached r_max";
      return p;
    }
    double target = next_cp < checkpoints.size() ? checkpoints[next_cp] : r_max;
    h = std::min(h, h_max);
    bool clipped = false;
    if (r + h >= target) {
      h = target - r;
      clipped = true;
    }

    Step st;
    try {
      st = dp45_step(sys, r, y, dy, h);
    } catch (const DomainError&) {
      st.finite = false;
    }
    double err = 0.0;
    if (st.finite) {
      for (std::size_t i = 0; i < N; ++i) {
        double sc = o.atol + o.rtol * std::max(std::fabs(y[i]), std::fabs(st.y[i]));
        err = std::max(err, std::fabs(st.err[i]) / sc);
      }
    }
    if (st.finite && err <= 1.0) {
      r = clipped ? target : r + h;
      if (clipped && next_cp < checkpoints.size() && target == checkpoints[next_cp]) ++next_cp;
      y = st.y;
      dy = st.dy_end;
      accumulated += std::fabs(st.err[0]);
      record(p, r, y, accumulated);

      double au = std::fabs(y[0]);
      while (level_index < 1000 && au >= level(level_index)) {
        p.crossing_levels.push_back(level(level_index));
        p.crossing_radii.push_back(crossing_radius(p, level(level_index)));
        if (auto lim = aitken_limit(p.crossing_radii)) estimates.push_back(*lim);
        ++level_index;
        if (blowup_phase) ++phase_crossings;
      }
      if (!blowup_phase && au > o.blowup_ceiling && h < o.step_floor) blowup_phase = true;
      if (blowup_phase && phase_crossings >= 2 && estimates.size() >= 2) {
        double est = estimates.back();
        double hi = est + std::fabs(est - estimates[estimates.size() - 2]);
        if (hi - r <= o.blowup_radius_tol) {
          finish_from_crossings("u exceeded the ceiling with collapsing steps; bracket from doubling crossings");
          return p;
        }
      }
      if (blowup_phase && level_index >= 1000) {
        finish_from_crossings("doubling levels exhausted before the bracket reached the tolerance");
        return p;
      }
      double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (!clipped) h *= fac;
      else h = std::max(h, std::min(h * fac, h_max));
    } else {
      h *= st.finite ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.25;
    }

    if (h < 1e-14 * std::max(1.0, r)) {
      if (blowup_phase) {
        finish_from_crossings("step size underflow above the blow-up ceiling");
        return p;
      }
      // Faster-than-power growth collapses the step before u reaches the
      // ceiling; accept blow-up when |u / u'| pins the singularity.
      double scale = std::fabs(y[0] / y[1]);
      bool grew = p.crossing_radii.size() >= 4;
      if (grew && std::isfinite(scale) && 4.0 * scale <= o.blowup_radius_tol) {
        finish_blowup(r + scale, r, r + 4.0 * scale,
                      "step collapse below the ceiling with |u| at " + format_real(std::fabs(y[0])) +
                          "; bracket from the local scale |u/u'|");
      } else {
        p.status = ProfileStatus::Aborted;
        p.reason = "step size underflow at r=" + format_real(r) +
                   (grew ? " with u growing too slowly to pin a singularity" : " without growth of u");
      }
      return p;
    }
  }
  if (blowup_phase) {
    finish_from_crossings("step budget exhausted during blow-up refinement");
  } else {
    p.status = ProfileStatus::Aborted;
    p.reason = "step budget exhausted at r=" + format_real(r);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Explicit positive solution

Expr counterexample_profile(double k) {
  Expr r = Expr::variable();
  Expr rho = pow(Expr::constant(1.0) + r * r, 0.5);
  return exp(exp(Expr::constant(k) * rho));
}

double counterexample_overflow_radius(double k, double z_max) {
  double L = std::log(std::log(z_max)) / k;
  return L > 1.0 ? std::sqrt(L * L - 1.0) : 0.0;
}

namespace {

struct ScaledResidual {
  double scaled;
  double log_u;
};

// (Delta^h u)(r) / u(r) - c0 ln^nu(2 + u(r)) via jets of u / u(r) = exp(phi - phi(r)).
ScaledResidual scaled_residual(int half_m, int n, double nu, double c0, double k, double r) {
  Jet x = Jet::variable(r, 2 * half_m);
  Jet rho = sqrt(Jet::constant(1.0, x.order()) + x * x);
  Jet phi = exp(k * rho);
  double phi0 = phi.value();
  Jet shifted = phi;
  shifted.set_coefficient(0, 0.0);
  Jet w = exp(shifted);
  for (int i = 0; i < half_m; ++i) w = radial_laplacian(w, n, r);
  double log_term = phi0 + std::log1p(2.0 * std::exp(-phi0));  // ln(2 + u)
  return {w.value() - c0 * std::pow(log_term, nu), phi0};
}

double laplacian_ratio_jet(int n, double k, double r) {
  Jet x = Jet::variable(r, 2);
  Jet phi = exp(k * sqrt(Jet::constant(1.0, 2) + x * x));
  Jet shifted = phi;
  shifted.set_coefficient(0, 0.0);
  return radial_laplacian(exp(shifted), n, r).value();
}

double laplacian_ratio_fd(int n, double k, double r) {
  auto phi = [&](double s) { return std::exp(k * std::sqrt(1.0 + s * s)); };
  double phi0 = phi(r);
  double dphi = k * phi0 * r / std::sqrt(1.0 + r * r);
  double h = 1e-2 / std::max(1.0, std::fabs(dphi));
  auto w = [&](double s) { return std::exp(phi(s) - phi0); };
  auto D = [&](double step) {
    double wp = w(r + step), wm = w(r - step);
    return (wp - 2.0 + wm) / (step * step) + (n - 1) / r * (wp - wm) / (2.0 * step);
  };
  return (4.0 * D(0.5 * h) - D(h)) / 3.0;
}

CounterexampleReport evaluate_k(int half_m, int n, double nu, double c0, double k, const std::vector<double>& grid_in,
                                const CounterexampleOptions& o) {
  CounterexampleReport rep;
  rep.half_m = half_m;
  rep.n = n;
  rep.nu = nu;
  rep.c0 = c0;
  rep.k = k;
  rep.r_overflow = counterexample_overflow_radius(k, o.z_max);
  if (grid_in.empty()) {
    if (rep.r_overflow > 0) {
      for (int i = 0; i < o.default_grid_points; ++i) {
        rep.r_grid.push_back(rep.r_overflow * i / o.default_grid_points);
      }
    }
  } else {
    for (double r : grid_in) {
      if (r >= 0 && r < rep.r_overflow) rep.r_grid.push_back(r);
      else ++rep.dropped_points;
    }
  }
  double best = INFINITY;
  for (double r : rep.r_grid) {
    auto s = scaled_residual(half_m, n, nu, c0, k, r);
    rep.scaled_residual.push_back(s.scaled);
    double u = std::exp(s.log_u);
    rep.residual.push_back(s.scaled * u);
    if (s.scaled < best) {
      best = s.scaled;
      rep.argmin_r = r;
    }
  }
  if (!rep.r_grid.empty()) {
    rep.min_scaled_residual = best;
    rep.pass = best >= 0.0;
  }
  return rep;
}

}  // namespace

CounterexampleReport verify_counterexample(int half_m, int n, double nu, double c0, std::optional<double> k,
                                           const std::vector<double>& r_grid, const CounterexampleOptions& o) {
  if (half_m < 1) throw std::invalid_argument("half_m must be at least 1");
  if (2 * half_m > Jet::kMaxOrder) throw std::invalid_argument("polyharmonic order exceeds the jet order limit");
  if (n < 1) throw std::invalid_argument("dimension n must be at least 1");
  if (!(c0 > 0)) throw std::invalid_argument("c0 must be positive");
  if (k && !(*k > 0)) throw std::invalid_argument("k must be positive");

  CounterexampleReport rep;
  std::vector<double> tried;
  if (k) {
    rep = evaluate_k(half_m, n, nu, c0, *k, r_grid, o);
    tried.push_back(*k);
  } else {
    std::optional<CounterexampleReport> best;
    for (int i = 0;; ++i) {
      double kk = std::exp2(static_cast<double>(i) / o.ladder_steps);
      if (kk > o.k_max) break;
      tried.push_back(kk);
      auto cand = evaluate_k(half_m, n, nu, c0, kk, r_grid, o);
      if (cand.r_grid.empty()) break;  // larger k only shrinks the certified range further
      bool better = !best || cand.min_scaled_residual > best->min_scaled_residual;
      if (cand.pass) {
        best = std::move(cand);
        break;
      }
      if (better) best = std::move(cand);
    }
    if (best) rep = std::move(*best);
    else rep = evaluate_k(half_m, n, nu, c0, tried.front(), r_grid, o);
    rep.k_auto = true;
  }
  rep.k_tried = tried;

  if (rep.r_overflow > 0) {
    rep.fd_pass = true;
    for (double frac : {0.25, 0.5, 0.75}) {
      FiniteDifferenceCheck c;
      c.r = frac * rep.r_overflow;
      c.jet_value = laplacian_ratio_jet(n, rep.k, c.r);
      c.fd_value = laplacian_ratio_fd(n, rep.k, c.r);
      c.rel_error = std::fabs(c.jet_value - c.fd_value) / std::max(std::fabs(c.jet_value), 1e-300);
      c.pass = c.rel_error <= o.fd_tolerance;
      rep.fd_pass = rep.fd_pass && c.pass;
      rep.fd_checks.push_back(c);
    }
  }
  if (rep.r_grid.empty()) {
    rep.note = "no certified range: u(0) exceeds the evaluation ceiling for k=" + format_real(rep.k);
  } else {
    rep.note = "certified for k=" + format_real(rep.k) + " on the sampled grid in [0, " + format_real(rep.r_overflow) +
               "); beyond that u exceeds the evaluation ceiling";
  }
  return rep;
}

}  // namespace liouville
