#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace liouville {

/// Raised by the expression parser. `offset()` is the 0-based byte offset
/// into the source text where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised when an expression is evaluated outside its domain (ln of a
/// non-positive value, fractional power of a negative base, NaN results).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class NodeKind { Constant, Variable, Sum, Product, Power, Log, Exp };

/// Immutable expression tree over one real variable.
///
/// The node set is closed: constants, the variable, binary sums and
/// products, powers with a constant real exponent, natural logarithm and
/// exponential. Subtraction, division and sqrt are sugar handled by the
/// parser. Copies share structure.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double c);
  static Expr variable();

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& base, double exponent);
  friend Expr log(const Expr& arg);
  friend Expr exp(const Expr& arg);

  NodeKind kind() const noexcept;
  /// Constant value for Constant nodes, exponent for Power nodes.
  double number() const noexcept;
  /// First operand (Sum, Product, Power base, Log, Exp argument).
  Expr lhs() const;
  /// Second operand (Sum, Product).
  Expr rhs() const;

  bool depends_on_variable() const noexcept;

  /// Replaces the variable by `inner`, e.g. g(zeta) -> g(zeta / 4).
  Expr substitute(const Expr& inner) const;

  /// Canonical text: fully parenthesised, shortest round-trip numbers.
  std::string render(std::string_view variable_name = "zeta") const;

  /// Structural equality with exact number comparison.
  friend bool operator==(const Expr& a, const Expr& b);

  /// Fold the tree bottom-up with a user algebra. `ops` must provide
  /// constant(double), add(T,T), mul(T,T), pow(T,double), log(T), exp(T).
  template <class T, class Ops>
  T fold(const T& x, const Ops& ops) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  NodeKind kind;
  double number = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

template <class T, class Ops>
T Expr::fold(const T& x, const Ops& ops) const {
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::Constant: return ops.constant(n.number);
    case NodeKind::Variable: return x;
    case NodeKind::Sum: return ops.add(Expr(n.a).fold(x, ops), Expr(n.b).fold(x, ops));
    case NodeKind::Product: return ops.mul(Expr(n.a).fold(x, ops), Expr(n.b).fold(x, ops));
    case NodeKind::Power: return ops.pow(Expr(n.a).fold(x, ops), n.number);
    case NodeKind::Log: return ops.log(Expr(n.a).fold(x, ops));
    case NodeKind::Exp: return ops.exp(Expr(n.a).fold(x, ops));
  }
  throw std::logic_error("unreachable expression kind");
}

/// Plain double evaluation; throws DomainError.
double evaluate(const Expr& e, double x);

/// Sign-and-log-magnitude number: value = sign * exp(log_abs).
/// Lets integrands be evaluated at zeta = e^s for |s| far beyond the
/// double range of zeta itself. The magnitude is carried in extended
/// precision because callers subtract nearly equal logarithms
/// (ln g(e^s) - s for g close to linear) at large s.
struct LogValue {
  int sign = 0;  // -1, 0, +1
  long double log_abs = -INFINITY;

  static LogValue from_linear(long double v);
  double linear() const;
};

/// Evaluates `e` at x = exp(log_x) entirely in the log domain.
LogValue evaluate_log(const Expr& e, long double log_x);

struct ParseOptions {
  std::string variable = "zeta";
  /// Named constants substituted at parse time (used for sweeps over
  /// exponents such as `lambda` or `nu`).
  std::map<std::string, double, std::less<>> parameters;
};

struct ParseResult {
  Expr expr;
  std::vector<std::string> warnings;
};

/// Grammar: infix + - * / ^ with the usual precedence (^ binds tightest
/// and is right associative, unary minus binds looser than ^), parentheses,
/// decimal literals, functions ln, exp, sqrt, and the variable.
/// Exponents must be free of the variable.
ParseResult parse_expression(std::string_view source, const ParseOptions& options = {});

}  // namespace liouville
