#pragma once

// Arithmetic expression trees in the chart variables u1, u2, u3.
//
// Grammar (standard precedence, ^ binds tighter than unary minus and is
// right-associative; the exponent must fold to an integer constant):
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := ('-' | '+') unary | power
//   power    := primary ('^' exponent)?
//   exponent := ('-' | '+')? power
//   primary  := number | 'pi' | 'u1' | 'u2' | 'u3'
//             | ('sqrt' | 'sin' | 'cos' | 'exp') '(' expr ')' | '(' expr ')'

#include <array>
#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "ddvv/errors.hpp"
#include "ddvv/jet.hpp"

namespace ddvv {

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

enum class ExprKind { variable, literal, add, sub, mul, div, pow, neg, sqrt, sin, cos, exp };

struct ExprNode {
  ExprKind kind;
  int variable = 0;      // 0..2 for ExprKind::variable
  double literal = 0.0;  // ExprKind::literal (pi is folded to its value)
  int exponent = 0;      // ExprKind::pow
  Expr lhs, rhs;         // children; unary nodes use lhs only
  std::string source;    // literal spelling, kept for printing ("pi", "1e-3")
};

namespace detail {

inline Expr make_node(ExprKind kind, Expr lhs = nullptr, Expr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

inline int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::add:
    case ExprKind::sub: return 1;
    case ExprKind::mul:
    case ExprKind::div: return 2;
    case ExprKind::neg: return 3;
    case ExprKind::pow: return 4;
    default: return 5;
  }
}

inline void print(std::ostream& os, const ExprNode& n) {
  auto child = [&](const Expr& c, bool paren) {
    if (paren) os << '(';
    print(os, *c);
    if (paren) os << ')';
  };
  const int p = precedence(n.kind);
  switch (n.kind) {
    case ExprKind::variable: os << 'u' << (n.variable + 1); break;
    case ExprKind::literal:
      if (!n.source.empty()) {
        os << n.source;
      } else {
        std::ostringstream s;
        s.precision(17);
        s << n.literal;
        os << s.str();
      }
      break;
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div: {
      const char op = n.kind == ExprKind::add ? '+' : n.kind == ExprKind::sub ? '-' : n.kind == ExprKind::mul ? '*' : '/';
      child(n.lhs, precedence(n.lhs->kind) < p);
      os << ' ' << op << ' ';
      // Left-associative parsing: an equal-precedence right operand keeps its
      // parentheses so the printed text reparses to the same tree.
      child(n.rhs, precedence(n.rhs->kind) <= p);
      break;
    }
    case ExprKind::pow:
      child(n.lhs, precedence(n.lhs->kind) <= p);
      os << '^' << n.exponent;
      break;
    case ExprKind::neg:
      os << '-';
      child(n.lhs, precedence(n.lhs->kind) < p);
      break;
    case ExprKind::sqrt: os << "sqrt"; child(n.lhs, true); break;
    case ExprKind::sin: os << "sin"; child(n.lhs, true); break;
    case ExprKind::cos: os << "cos"; child(n.lhs, true); break;
    case ExprKind::exp: os << "exp"; child(n.lhs, true); break;
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::ostringstream os;
  detail::print(os, *e);
  return os.str();
}

namespace detail {

// Same repeated-squaring sequence as pow(Jet, int), so order-0 jets and
// reals agree bit for bit.
inline double int_power(double a, int k) {
  if (k < 0) return 1.0 / int_power(a, -k);
  double result = 1.0, base = a;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

template <class T>
T eval_node(const ExprNode& n, const std::array<T, 3>& u) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  switch (n.kind) {
    case ExprKind::variable: return u[n.variable];
    case ExprKind::literal: return T{} + n.literal;
    case ExprKind::add: return eval_node(*n.lhs, u) + eval_node(*n.rhs, u);
    case ExprKind::sub: return eval_node(*n.lhs, u) - eval_node(*n.rhs, u);
    case ExprKind::mul: return eval_node(*n.lhs, u) * eval_node(*n.rhs, u);
    case ExprKind::neg: return -eval_node(*n.lhs, u);
    case ExprKind::div: {
      const T num = eval_node(*n.lhs, u);
      const T den = eval_node(*n.rhs, u);
      if (value_of(den) == 0.0)
        throw EvalError("division by zero in '" + to_string(std::make_shared<ExprNode>(n)) + "'");
      return num / den;
    }
    case ExprKind::pow: {
      const T base = eval_node(*n.lhs, u);
      if (n.exponent < 0 && value_of(base) == 0.0)
        throw EvalError("negative power of zero in '" + to_string(std::make_shared<ExprNode>(n)) + "'");
      if constexpr (std::is_same_v<T, double>) {
        return detail::int_power(base, n.exponent);
      } else {
        return pow(base, n.exponent);
      }
    }
    case ExprKind::sqrt: {
      const T arg = eval_node(*n.lhs, u);
      const double a0 = value_of(arg);
      // Jets need a strictly positive base point; reals tolerate sqrt(0).
      if (a0 < 0.0 || (a0 == 0.0 && !std::is_same_v<T, double>))
        throw EvalError("sqrt of non-positive value in '" + to_string(std::make_shared<ExprNode>(n)) + "'");
      return sqrt(arg);
    }
    case ExprKind::sin: return sin(eval_node(*n.lhs, u));
    case ExprKind::cos: return cos(eval_node(*n.lhs, u));
    case ExprKind::exp: return exp(eval_node(*n.lhs, u));
  }
  throw EvalError("unknown expression node");
}

}  // namespace detail

/// Evaluates an expression over reals or jets (any scalar with the usual
/// arithmetic and sqrt/sin/cos/exp/pow(int) overloads).
template <class T>
T evaluate(const Expr& e, const std::array<T, 3>& u) {
  return detail::eval_node(*e, u);
}

namespace detail {

class ExprParser {
public:
  ExprParser(std::string_view text, int line, int column_offset)
      : text_(text), line_(line), col0_(column_offset) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_) + ", column " +
                     std::to_string(col0_ + static_cast<int>(pos_) + 1) + ": " + msg);
  }
  [[noreturn]] void fail_at_end(const std::string& msg) {
    pos_ = text_.size();
    fail(msg + " at end of input");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      Expr rhs = parse_term();
      lhs = make_node(c == '+' ? ExprKind::add : ExprKind::sub, lhs, rhs);
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      Expr rhs = parse_unary();
      lhs = make_node(c == '*' ? ExprKind::mul : ExprKind::div, lhs, rhs);
    }
  }

  Expr parse_unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return make_node(ExprKind::neg, parse_unary());
    }
    if (c == '+') {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek() != '^') return base;
    ++pos_;
    const std::size_t exponent_pos = pos_;
    bool negative = false;
    char c = peek();
    if (c == '-' || c == '+') {
      negative = c == '-';
      ++pos_;
    }
    Expr ex = parse_power();
    double k = 0.0;
    try {
      k = evaluate(ex, std::array<double, 3>{NAN, NAN, NAN});
    } catch (const EvalError&) {
      k = NAN;
    }
    if (negative) k = -k;
    if (!std::isfinite(k) || std::abs(k - std::round(k)) > 1e-12 || std::abs(k) > 64) {
      pos_ = exponent_pos;
      fail("exponent must be an integer constant");
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::pow;
    n->lhs = base;
    n->exponent = static_cast<int>(std::lround(k));
    return n;
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
        pos_ = q;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string spelling(text_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(spelling, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != spelling.size() || spelling.find('.') != spelling.rfind('.')) {
      pos_ = start;
      fail("malformed number '" + spelling + "'");
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::literal;
    n->literal = v;
    n->source = spelling;
    return n;
  }

  Expr parse_primary() {
    const char c = peek();
    if (c == '\0') fail_at_end("expected an operand");
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (peek() != ')') {
        if (pos_ >= text_.size()) fail_at_end("expected ')'");
        fail("expected ')'");
      }
      ++pos_;
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string id(text_.substr(start, pos_ - start));
      if (id == "u1" || id == "u2" || id == "u3") {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::variable;
        n->variable = id[1] - '1';
        return n;
      }
      if (id == "pi") {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::literal;
        n->literal = std::numbers::pi;
        n->source = "pi";
        return n;
      }
      ExprKind fn;
      if (id == "sqrt") fn = ExprKind::sqrt;
      else if (id == "sin") fn = ExprKind::sin;
      else if (id == "cos") fn = ExprKind::cos;
      else if (id == "exp") fn = ExprKind::exp;
      else {
        throw NameError("line " + std::to_string(line_) + ", column " +
                        std::to_string(col0_ + static_cast<int>(start) + 1) + ": unknown identifier '" + id + "'");
      }
      if (peek() != '(') fail("expected '(' after function '" + id + "'");
      ++pos_;
      Expr arg = parse_expr();
      if (peek() != ')') {
        if (pos_ >= text_.size()) fail_at_end("expected ')'");
        fail("expected ')'");
      }
      ++pos_;
      return make_node(fn, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses one expression. `line` and `column_offset` only affect error messages.
inline Expr parse_expression(std::string_view text, int line = 1, int column_offset = 0) {
  return detail::ExprParser(text, line, column_offset).parse_all();
}

/// Whether the expression mentions any chart variable.
inline bool uses_variables(const Expr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::variable) return true;
  return uses_variables(e->lhs) || uses_variables(e->rhs);
}

}  // namespace ddvv
