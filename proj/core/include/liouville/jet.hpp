#pragma once

#include <array>
#include <vector>

#include "liouville/expression.hpp"

namespace liouville {

/// Truncated Taylor expansion f(x + h) = sum_k c_k h^k, k = 0..order.
///
/// Arithmetic follows the usual Taylor-mode recurrences, so results are
/// exact (up to rounding) for polynomial inputs within the order.
class Jet {
 public:
  static constexpr int kMaxOrder = 16;

  explicit Jet(int order = 0);

  static Jet constant(double c, int order);
  /// The identity function expanded at x.
  static Jet variable(double x, int order);

  int order() const noexcept { return order_; }
  double value() const noexcept { return c_[0]; }
  /// Taylor coefficient c_k = f^(k)(x) / k!.
  double coefficient(int k) const;
  void set_coefficient(int k, double v);
  /// k-th derivative f^(k)(x).
  double derivative(int k) const;
  /// f, f', ..., f^(order) at x.
  std::vector<double> derivatives() const;

  /// The expansion of f' (one order lower).
  Jet differentiate() const;
  /// Same coefficients truncated to a lower order.
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet exp(const Jet& a);
  /// Throws DomainError for a non-positive value.
  friend Jet log(const Jet& a);
  /// Real exponent; a zero base is only allowed for non-negative integer exponents.
  friend Jet pow(const Jet& a, double e);
  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

 private:
  int order_;
  std::array<double, kMaxOrder + 1> c_{};
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet pow(const Jet& a, double e);

/// Expands an expression in one variable at x to the given order.
Jet jet_eval(const Expr& expr, double x, int order);

/// Radial Laplacian f'' + (n-1) f'/r of a jet expanded at r >= 0. The
/// result has order two less. At r = 0 the regular limit is used, which
/// requires f'(0) = 0. Throws std::invalid_argument when order < 2.
Jet radial_laplacian(const Jet& f, int n, double r);

/// (Delta^half_m f)(r) for a closed-form radial profile f(r).
double apply_polyharmonic(const Expr& profile, int n, int half_m, double r);

}  // namespace liouville
