#include "liouville/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace liouville {

namespace {

void check_order(int order) {
  if (order < 0 || order > Jet::kMaxOrder) {
    throw std::invalid_argument("jet order must lie in [0, " + std::to_string(Jet::kMaxOrder) + "]");
  }
}

bool is_nonneg_integer(double e) { return e >= 0 && std::floor(e) == e; }

struct JetOps {
  double x;
  int order;
  Jet constant(double c) const { return Jet::constant(c, order); }
  Jet add(const Jet& a, const Jet& b) const { return a + b; }
  Jet mul(const Jet& a, const Jet& b) const { return a * b; }
  Jet pow(const Jet& a, double e) const { return liouville::pow(a, e); }
  Jet log(const Jet& a) const { return liouville::log(a); }
  Jet exp(const Jet& a) const { return liouville::exp(a); }
};

}  // namespace

Jet::Jet(int order) : order_(order) { check_order(order); }

Jet Jet::constant(double c, int order) {
  Jet j(order);
  j.c_[0] = c;
  return j;
}

Jet Jet::variable(double x, int order) {
  Jet j(order);
  j.c_[0] = x;
  if (order >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet::coefficient(int k) const {
  if (k < 0 || k > order_) throw std::out_of_range("jet coefficient index out of range");
  return c_[static_cast<std::size_t>(k)];
}

void Jet::set_coefficient(int k, double v) {
  if (k < 0 || k > order_) throw std::out_of_range("jet coefficient index out of range");
  c_[static_cast<std::size_t>(k)] = v;
}

double Jet::derivative(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return coefficient(k) * f;
}

std::vector<double> Jet::derivatives() const {
  std::vector<double> out;
  double f = 1.0;
  for (int k = 0; k <= order_; ++k) {
    if (k >= 2) f *= k;
    out.push_back(c_[static_cast<std::size_t>(k)] * f);
  }
  return out;
}

Jet Jet::differentiate() const {
  if (order_ < 1) throw std::invalid_argument("cannot differentiate a jet of order 0");
  Jet d(order_ - 1);
  for (int k = 0; k < order_; ++k) d.c_[k] = (k + 1) * c_[k + 1];
  return d;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw std::invalid_argument("cannot raise the order of a jet");
  Jet t(order);
  std::copy(c_.begin(), c_.begin() + order + 1, t.c_.begin());
  return t;
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
  for (int k = order_ + 1; k <= kMaxOrder; ++k) c_[k] = 0.0;
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
  for (int k = order_ + 1; k <= kMaxOrder; ++k) c_[k] = 0.0;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int k = 0; k <= order_; ++k) c_[k] *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(std::min(a.order_, b.order_));
  for (int k = 0; k <= r.order_; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
    r.c_[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.c_[0] == 0.0) throw DomainError("jet division by a zero value");
  Jet r(std::min(a.order_, b.order_));
  for (int k = 0; k <= r.order_; ++k) {
    double s = a.c_[k];
    for (int i = 1; i <= k; ++i) s -= b.c_[i] * r.c_[k - i];
    r.c_[k] = s / b.c_[0];
  }
  return r;
}

Jet exp(const Jet& a) {
  Jet r(a.order_);
  r.c_[0] = std::exp(a.c_[0]);
  for (int k = 1; k <= a.order_; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a.c_[i] * r.c_[k - i];
    r.c_[k] = s / k;
  }
  return r;
}

Jet log(const Jet& a) {
  if (!(a.c_[0] > 0.0)) throw DomainError("ln of a non-positive value");
  Jet r(a.order_);
  r.c_[0] = std::log(a.c_[0]);
  for (int k = 1; k <= a.order_; ++k) {
    double s = 0.0;
    for (int i = 1; i < k; ++i) s += i * r.c_[i] * a.c_[k - i];
    r.c_[k] = (a.c_[k] - s / k) / a.c_[0];
  }
  return r;
}

Jet pow(const Jet& a, double e) {
  const double a0 = a.c_[0];
  if (e == 0.0) return Jet::constant(1.0, a.order_);
  if (a0 == 0.0) {
    if (!is_nonneg_integer(e)) throw DomainError("non-integer or negative power of a jet with zero value");
    // exponentiation by squaring keeps the expansion exact at a zero base
    Jet result = Jet::constant(1.0, a.order_);
    Jet base = a;
    auto p = static_cast<unsigned long long>(e);
    while (p > 0) {
      if (p & 1ULL) result = result * base;
      p >>= 1;
      if (p > 0) base = base * base;
    }
    return result;
  }
  if (a0 < 0.0 && std::floor(e) != e) throw DomainError("fractional power of a negative value");
  Jet r(a.order_);
  r.c_[0] = std::pow(a0, e);
  for (int k = 1; k <= a.order_; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += ((e + 1.0) * i - k) * a.c_[i] * r.c_[k - i];
    r.c_[k] = s / (k * a0);
  }
  return r;
}

Jet jet_eval(const Expr& expr, double x, int order) {
  check_order(order);
  return expr.fold(Jet::variable(x, order), JetOps{x, order});
}

Jet radial_laplacian(const Jet& f, int n, double r) {
  if (f.order() < 2) throw std::invalid_argument("radial Laplacian needs a jet of order >= 2");
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (r < 0.0) throw std::invalid_argument("radial Laplacian needs r >= 0");
  const int out_order = f.order() - 2;
  Jet d1 = f.differentiate();
  Jet d2 = d1.differentiate();
  Jet drift(out_order);
  if (r == 0.0) {
    // f'(h)/h = sum_k f'_{k+1} h^k when f'(0) = 0
    double scale = std::fabs(d1.coefficient(0));
    double ref = std::fabs(f.value()) + std::fabs(d2.value()) + 1.0;
    if (scale > 1e-12 * ref) throw DomainError("radial Laplacian is singular at r=0 unless f'(0) = 0");
    for (int k = 0; k <= out_order; ++k) drift.set_coefficient(k, d1.coefficient(k + 1));
  } else {
    Jet inv(out_order);
    double p = 1.0 / r;
    for (int k = 0; k <= out_order; ++k) {
      inv.set_coefficient(k, (k % 2 == 0 ? 1.0 : -1.0) * p);
      p /= r;
    }
    drift = d1.truncated(out_order) * inv;
  }
  return d2.truncated(out_order) + static_cast<double>(n - 1) * drift;
}

double apply_polyharmonic(const Expr& profile, int n, int half_m, double r) {
  if (half_m < 0) throw std::invalid_argument("half_m must be non-negative");
  if (2 * half_m > Jet::kMaxOrder) throw std::invalid_argument("polyharmonic order exceeds the jet order limit");
  Jet f = jet_eval(profile, r, 2 * half_m);
  for (int i = 0; i < half_m; ++i) f = radial_laplacian(f, n, r);
  return f.value();
}

}  // namespace liouville
