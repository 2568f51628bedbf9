#include "liouville/expression.hpp"

#include <charconv>
#include <cctype>
#include <limits>
#include <optional>

namespace liouville {

namespace {

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string out(buf, res.ptr);
  if (v < 0) return "(" + out + ")";
  return out;
}

}  // namespace

Expr::Expr() : node_(std::make_shared<const Node>(Node{NodeKind::Constant, 0.0, nullptr, nullptr})) {}

Expr Expr::constant(double c) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Constant, c, nullptr, nullptr}));
}

Expr Expr::variable() {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Variable, 0.0, nullptr, nullptr}));
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{NodeKind::Sum, 0.0, a.node_, b.node_}));
}

Expr operator*(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{NodeKind::Product, 0.0, a.node_, b.node_}));
}

Expr pow(const Expr& base, double exponent) {
  return Expr(
      std::make_shared<const Expr::Node>(Expr::Node{NodeKind::Power, exponent, base.node_, nullptr}));
}

Expr log(const Expr& arg) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{NodeKind::Log, 0.0, arg.node_, nullptr}));
}

Expr exp(const Expr& arg) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{NodeKind::Exp, 0.0, arg.node_, nullptr}));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }
double Expr::number() const noexcept { return node_->number; }

Expr Expr::lhs() const {
  if (!node_->a) throw std::logic_error("expression node has no operand");
  return Expr(node_->a);
}

Expr Expr::rhs() const {
  if (!node_->b) throw std::logic_error("expression node has no second operand");
  return Expr(node_->b);
}

bool Expr::depends_on_variable() const noexcept {
  switch (kind()) {
    case NodeKind::Constant: return false;
    case NodeKind::Variable: return true;
    case NodeKind::Sum:
    case NodeKind::Product: return Expr(node_->a).depends_on_variable() || Expr(node_->b).depends_on_variable();
    default: return Expr(node_->a).depends_on_variable();
  }
}

Expr Expr::substitute(const Expr& inner) const {
  switch (kind()) {
    case NodeKind::Constant: return *this;
    case NodeKind::Variable: return inner;
    case NodeKind::Sum: return lhs().substitute(inner) + rhs().substitute(inner);
    case NodeKind::Product: return lhs().substitute(inner) * rhs().substitute(inner);
    case NodeKind::Power: return pow(lhs().substitute(inner), number());
    case NodeKind::Log: return log(lhs().substitute(inner));
    case NodeKind::Exp: return exp(lhs().substitute(inner));
  }
  throw std::logic_error("unreachable expression kind");
}

std::string Expr::render(std::string_view variable_name) const {
  switch (kind()) {
    case NodeKind::Constant: return format_number(number());
    case NodeKind::Variable: return std::string(variable_name);
    case NodeKind::Sum: return "(" + lhs().render(variable_name) + " + " + rhs().render(variable_name) + ")";
    case NodeKind::Product: return "(" + lhs().render(variable_name) + " * " + rhs().render(variable_name) + ")";
    case NodeKind::Power: return "(" + lhs().render(variable_name) + " ^ " + format_number(number()) + ")";
    case NodeKind::Log: return "ln(" + lhs().render(variable_name) + ")";
    case NodeKind::Exp: return "exp(" + lhs().render(variable_name) + ")";
  }
  throw std::logic_error("unreachable expression kind");
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Constant: return a.number() == b.number();
    case NodeKind::Variable: return true;
    case NodeKind::Sum:
    case NodeKind::Product: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case NodeKind::Power: return a.number() == b.number() && a.lhs() == b.lhs();
    case NodeKind::Log:
    case NodeKind::Exp: return a.lhs() == b.lhs();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct DoubleOps {
  double constant(double c) const { return c; }
  double add(double a, double b) const { return a + b; }
  double mul(double a, double b) const { return a * b; }
  double pow(double a, double e) const {
    if (a < 0 && !is_integer(e)) throw DomainError("fractional power of a negative value");
    if (a == 0 && e < 0) return std::numeric_limits<double>::infinity();
    return std::pow(a, e);
  }
  double log(double a) const {
    if (!(a > 0)) throw DomainError("ln of a non-positive value");
    return std::log(a);
  }
  double exp(double a) const { return std::exp(a); }
};

long double log_add(long double a, long double b) {
  // log(e^a + e^b) without overflow
  if (a < b) std::swap(a, b);
  if (a == -INFINITY) return -INFINITY;
  if (a == INFINITY) return INFINITY;
  return a + std::log1p(std::exp(b - a));
}

struct LogOps {
  LogValue constant(double c) const { return LogValue::from_linear(c); }

  LogValue add(LogValue a, LogValue b) const {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.sign == b.sign) return {a.sign, log_add(a.log_abs, b.log_abs)};
    if (a.log_abs < b.log_abs) std::swap(a, b);
    if (a.log_abs == b.log_abs) return {};
    if (a.log_abs == INFINITY) return a;
    return {a.sign, a.log_abs + std::log1p(-std::exp(b.log_abs - a.log_abs))};
  }

  LogValue mul(LogValue a, LogValue b) const {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.sign * b.sign, a.log_abs + b.log_abs};
  }

  LogValue pow(LogValue a, double e) const {
    if (e == 0) return {1, 0.0L};
    if (a.sign == 0) {
      if (e > 0) return {};
      return {1, INFINITY};
    }
    int sign = 1;
    if (a.sign < 0) {
      if (!is_integer(e)) throw DomainError("fractional power of a negative value");
      sign = std::fmod(std::fabs(e), 2.0) == 1.0 ? -1 : 1;
    }
    return {sign, static_cast<long double>(e) * a.log_abs};
  }

  LogValue log(LogValue a) const {
    if (a.sign <= 0) throw DomainError("ln of a non-positive value");
    // ln(value) = a.log_abs, re-expressed in sign/log form
    return LogValue::from_linear(a.log_abs);
  }

  LogValue exp(LogValue a) const {
    if (a.sign == 0) return {1, 0.0L};
    long double v = a.sign * std::exp(a.log_abs);
    if (std::isnan(v)) throw DomainError("exp of NaN");
    if (v == -INFINITY) return {};
    return {1, v};
  }
};

}  // namespace

LogValue LogValue::from_linear(long double v) {
  if (std::isnan(v)) throw DomainError("NaN in log-domain conversion");
  if (v == 0) return {};
  return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
}

double LogValue::linear() const {
  if (sign == 0) return 0.0;
  return static_cast<double>(sign * std::exp(log_abs));
}

double evaluate(const Expr& e, double x) {
  double v = e.fold(x, DoubleOps{});
  if (std::isnan(v)) throw DomainError("expression evaluates to NaN");
  return v;
}

LogValue evaluate_log(const Expr& e, long double log_x) {
  LogValue v = e.fold(LogValue{1, log_x}, LogOps{});
  if (std::isnan(v.log_abs)) throw DomainError("expression evaluates to NaN");
  return v;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct LowerBound {
  double value;      // every value of the subexpression is >= value
  bool positive;     // and strictly > 0
};

LowerBound lower_bound(const Expr& e) {
  constexpr double kNoBound = -std::numeric_limits<double>::infinity();
  switch (e.kind()) {
    case NodeKind::Constant: return {e.number(), e.number() > 0};
    case NodeKind::Variable: return {0.0, false};
    case NodeKind::Sum: {
      auto a = lower_bound(e.lhs());
      auto b = lower_bound(e.rhs());
      double v = a.value + b.value;
      return {v, v > 0 || (v >= 0 && (a.positive || b.positive))};
    }
    case NodeKind::Product: {
      auto a = lower_bound(e.lhs());
      auto b = lower_bound(e.rhs());
      if (a.value >= 0 && b.value >= 0) return {a.value * b.value, a.positive && b.positive};
      return {kNoBound, false};
    }
    case NodeKind::Power: {
      auto a = lower_bound(e.lhs());
      double p = e.number();
      if (a.positive) return {p > 0 ? std::pow(a.value, p) : 0.0, true};
      if (a.value >= 0 && p > 0) return {std::pow(a.value, p), false};
      if (is_integer(p) && std::fmod(p, 2.0) == 0.0) return {0.0, false};
      return {kNoBound, false};
    }
    case NodeKind::Log: {
      auto a = lower_bound(e.lhs());
      if (a.value >= 1) return {std::log(a.value), a.value > 1};
      return {kNoBound, false};
    }
    case NodeKind::Exp: {
      auto a = lower_bound(e.lhs());
      return {a.value == kNoBound ? 0.0 : std::exp(a.value), true};
    }
  }
  return {kNoBound, false};
}

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts) : src_(src), opts_(opts) {}

  ParseResult run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return {e, std::move(warnings_)};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+')) {
        e = e + parse_product();
      } else if (accept('-')) {
        e = e + negate(parse_product());
      } else {
        return e;
      }
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = e * parse_unary();
      } else if (accept('/')) {
        e = e * power(parse_unary(), -1.0);
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return negate(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    std::size_t at = pos_;
    if (accept('^')) {
      Expr exponent = parse_unary();
      if (exponent.depends_on_variable()) {
        pos_ = at;
        fail("exponent must not depend on the variable");
      }
      return power(base, evaluate(exponent, 0.0));
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("expected an operand");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    double v = 0;
    auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - src_.data());
    return Expr::constant(v);
  }

  Expr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == opts_.variable) return Expr::variable();
    if (auto it = opts_.parameters.find(name); it != opts_.parameters.end()) return Expr::constant(it->second);
    if (name == "ln" || name == "exp" || name == "sqrt") {
      if (!accept('(')) fail("expected '(' after " + std::string(name));
      Expr arg = parse_sum();
      if (!accept(')')) fail("expected ')'");
      if (name == "ln") return log(arg);
      if (name == "exp") return exp(arg);
      return power(arg, 0.5);
    }
    pos_ = start;
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  Expr negate(const Expr& e) {
    if (e.kind() == NodeKind::Constant) return Expr::constant(-e.number());
    return Expr::constant(-1.0) * e;
  }

  Expr power(const Expr& base, double p) {
    auto lb = lower_bound(base);
    bool warn = false;
    if (p < 0) {
      warn = !lb.positive;
    } else if (!is_integer(p)) {
      warn = lb.value < 0;
    }
    if (warn) {
      warnings_.push_back("exponent " + format_number(p) + " applied to " + base.render(opts_.variable) +
                          ", which is not guaranteed positive");
    }
    return pow(base, p);
  }

  std::string_view src_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace

ParseResult parse_expression(std::string_view source, const ParseOptions& options) {
  return Parser(source, options).run();
}

}  // namespace liouville
