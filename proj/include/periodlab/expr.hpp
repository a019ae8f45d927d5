#pragma once

/**
 * @file expr.hpp
 * @brief One-variable expression front-end: lexer, parser, printer, evaluator.
 *
 * Grammar (whitespace insignificant):
 *
 *     expr   := term (('+'|'-') term)*
 *     term   := factor (('*'|'/') factor)*
 *     factor := '-' factor | power
 *     power  := atom ('^' uint)?
 *     atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
 *     func   := sin | cos | exp | sqrt | atan
 *
 * Trees are immutable and share structure, so copies are cheap and safe to
 * read from any thread.
 */

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "periodlab/error.hpp"

namespace periodlab {

// =============================================================================
// Tokens
// =============================================================================

enum class TokenKind { number, identifier, op, lparen, rparen };

struct Token {
  TokenKind kind;
  std::string text;
  double value = 0.0;  // numbers only
  std::size_t offset = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

namespace detail {

inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace detail

/// Splits source text into numbers, identifiers, operators and parentheses.
/// Numbers are decimal literals with an optional exponent part.
inline std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    const char c = source[i];
    if (detail::is_space(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (detail::is_digit(c) || c == '.') {
      bool digits = false;
      while (i < n && detail::is_digit(source[i])) { ++i; digits = true; }
      if (i < n && source[i] == '.') {
        ++i;
        while (i < n && detail::is_digit(source[i])) { ++i; digits = true; }
      }
      if (!digits) throw ParseError(Errc::malformed_number, start, "number without digits");
      if (i < n && (source[i] == 'e' || source[i] == 'E')) {
        ++i;
        if (i < n && (source[i] == '+' || source[i] == '-')) ++i;
        bool exp_digits = false;
        while (i < n && detail::is_digit(source[i])) { ++i; exp_digits = true; }
        if (!exp_digits) throw ParseError(Errc::malformed_number, start, "empty exponent");
      }
      if (i < n && (source[i] == '.' || detail::is_alpha(source[i]))) {
        throw ParseError(Errc::malformed_number, start,
                         "unexpected '" + std::string(1, source[i]) + "' in number");
      }
      const std::string text(source.substr(start, i - start));
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ParseError(Errc::malformed_number, start, "unrepresentable literal '" + text + "'");
      }
      tokens.push_back({TokenKind::number, text, value, start});
      continue;
    }
    if (detail::is_alpha(c)) {
      while (i < n && (detail::is_alpha(source[i]) || detail::is_digit(source[i]))) ++i;
      tokens.push_back({TokenKind::identifier, std::string(source.substr(start, i - start)), 0.0, start});
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        tokens.push_back({TokenKind::op, std::string(1, c), 0.0, start});
        break;
      case '(':
        tokens.push_back({TokenKind::lparen, "(", 0.0, start});
        break;
      case ')':
        tokens.push_back({TokenKind::rparen, ")", 0.0, start});
        break;
      default:
        throw ParseError(Errc::illegal_character, start, "illegal character '" + std::string(1, c) + "'");
    }
    ++i;
  }
  return tokens;
}

// =============================================================================
// Syntax tree
// =============================================================================

enum class NodeKind { constant, variable, negate, add, subtract, multiply, divide, power, function };
enum class Function { sin, cos, exp, sqrt, atan };

constexpr std::string_view to_string(Function fn) noexcept {
  switch (fn) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::exp: return "exp";
    case Function::sqrt: return "sqrt";
    case Function::atan: return "atan";
  }
  return "?";
}

inline std::optional<Function> function_from_name(std::string_view name) noexcept {
  static constexpr std::array<Function, 5> all{Function::sin, Function::cos, Function::exp,
                                               Function::sqrt, Function::atan};
  for (Function fn : all) {
    if (to_string(fn) == name) return fn;
  }
  return std::nullopt;
}

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;      // constant
  unsigned exponent = 0;   // power
  Function function = Function::sin;
  std::shared_ptr<const Node> lhs;  // unary operand / left operand / power base
  std::shared_ptr<const Node> rhs;
};

class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  /// Negative values are stored as negate(constant(|v|)) so every tree the
  /// builders produce is also one the parser could have produced.
  static Expr constant(double v) {
    if (!std::isfinite(v)) throw Error(Errc::domain_error, "non-finite constant");
    if (std::signbit(v) && v != 0.0) return -constant(-v);
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->value = v == 0.0 ? 0.0 : v;
    return Expr(std::move(n));
  }

  static Expr variable() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    return Expr(std::move(n));
  }

  static Expr apply(Function fn, const Expr& arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::function;
    n->function = fn;
    n->lhs = arg.node_;
    return Expr(std::move(n));
  }

  static Expr power(const Expr& base, unsigned exponent) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::power;
    n->exponent = exponent;
    n->lhs = base.node_;
    return Expr(std::move(n));
  }

  friend Expr operator-(const Expr& operand) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::negate;
    n->lhs = operand.node_;
    return Expr(std::move(n));
  }
  friend Expr operator+(const Expr& a, const Expr& b) { return binary(NodeKind::add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(NodeKind::subtract, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(NodeKind::multiply, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(NodeKind::divide, a, b); }

  [[nodiscard]] const Node& node() const noexcept { return *node_; }
  [[nodiscard]] NodeKind kind() const noexcept { return node_->kind; }
  [[nodiscard]] Expr lhs() const { return Expr(node_->lhs); }
  [[nodiscard]] Expr rhs() const { return Expr(node_->rhs); }

  [[nodiscard]] bool is_constant(double v) const noexcept {
    return node_->kind == NodeKind::constant && node_->value == v;
  }

  friend bool operator==(const Expr& a, const Expr& b) noexcept { return same_tree(*a.node_, *b.node_); }

  [[nodiscard]] std::string to_string() const;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr binary(NodeKind kind, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return Expr(std::move(n));
  }

  static bool same_tree(const Node& a, const Node& b) noexcept {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case NodeKind::constant: return a.value == b.value;
      case NodeKind::variable: return true;
      case NodeKind::negate: return same_tree(*a.lhs, *b.lhs);
      case NodeKind::power: return a.exponent == b.exponent && same_tree(*a.lhs, *b.lhs);
      case NodeKind::function: return a.function == b.function && same_tree(*a.lhs, *b.lhs);
      default: return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
    }
  }

  std::shared_ptr<const Node> node_;
};

// =============================================================================
// Parser
// =============================================================================

namespace detail {

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t source_size)
      : tokens_(std::move(tokens)), end_offset_(source_size) {}

  Expr parse_all() {
    Expr e = expr();
    if (pos_ < tokens_.size()) {
      const Token& t = tokens_[pos_];
      if (t.kind == TokenKind::rparen) {
        throw ParseError(Errc::unbalanced_parentheses, t.offset, "unmatched ')'");
      }
      throw ParseError(Errc::unexpected_token, t.offset, "unexpected '" + t.text + "'");
    }
    return e;
  }

 private:
  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

  bool peek_op(char op) const {
    const Token* t = peek();
    return t != nullptr && t->kind == TokenKind::op && t->text[0] == op;
  }

  [[noreturn]] void fail_here(const std::string& what) const {
    const Token* t = peek();
    if (t == nullptr) throw ParseError(Errc::unexpected_token, end_offset_, what + ", got end of input");
    throw ParseError(Errc::unexpected_token, t->offset, what + ", got '" + t->text + "'");
  }

  Expr expr() {
    Expr lhs = term();
    while (peek_op('+') || peek_op('-')) {
      const char op = tokens_[pos_++].text[0];
      Expr rhs = term();
      lhs = op == '+' ? lhs + rhs : lhs - rhs;
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (peek_op('*') || peek_op('/')) {
      const char op = tokens_[pos_++].text[0];
      Expr rhs = factor();
      lhs = op == '*' ? lhs * rhs : lhs / rhs;
    }
    return lhs;
  }

  Expr factor() {
    if (peek_op('-')) {
      ++pos_;
      return -factor();
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (peek_op('^')) {
      ++pos_;
      const Token* t = peek();
      if (t == nullptr || t->kind != TokenKind::number) fail_here("expected unsigned integer exponent");
      const double v = t->value;
      if (v < 0.0 || v != std::floor(v) || v > 1024.0 || t->text.find_first_of(".eE") != std::string::npos) {
        fail_here("expected unsigned integer exponent");
      }
      ++pos_;
      return Expr::power(base, static_cast<unsigned>(v));
    }
    return base;
  }

  Expr atom() {
    const Token* t = peek();
    if (t == nullptr) fail_here("expected operand");
    switch (t->kind) {
      case TokenKind::number:
        ++pos_;
        return Expr::constant(t->value);
      case TokenKind::lparen: {
        const std::size_t open = t->offset;
        ++pos_;
        Expr inner = expr();
        close_paren(open);
        return inner;
      }
      case TokenKind::identifier: {
        if (t->text == "x") {
          ++pos_;
          return Expr::variable();
        }
        const auto fn = function_from_name(t->text);
        if (!fn) throw ParseError(Errc::unknown_identifier, t->offset, "unknown identifier '" + t->text + "'");
        ++pos_;
        const Token* open = peek();
        if (open == nullptr || open->kind != TokenKind::lparen) fail_here("expected '(' after " + t->text);
        ++pos_;
        Expr arg = expr();
        close_paren(open->offset);
        return Expr::apply(*fn, arg);
      }
      default:
        fail_here("expected operand");
    }
  }

  void close_paren(std::size_t open_offset) {
    const Token* t = peek();
    if (t == nullptr) throw ParseError(Errc::unbalanced_parentheses, open_offset, "unclosed '('");
    if (t->kind != TokenKind::rparen) fail_here("expected ')'");
    ++pos_;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_offset_;
};

}  // namespace detail

inline Expr parse(std::string_view source) {
  detail::Parser parser(tokenize(source), source.size());
  return parser.parse_all();
}

// =============================================================================
// Printer
// =============================================================================

namespace detail {

// Binding strength of each node kind, mirroring the grammar's nonterminals.
inline int level(const Node& n) noexcept {
  switch (n.kind) {
    case NodeKind::add: case NodeKind::subtract: return 1;
    case NodeKind::multiply: case NodeKind::divide: return 2;
    case NodeKind::negate: return 3;
    case NodeKind::power: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline void print(const Node& n, int min_level, std::string& out) {
  const bool wrap = level(n) < min_level;
  if (wrap) out += '(';
  switch (n.kind) {
    case NodeKind::constant: out += format_number(n.value); break;
    case NodeKind::variable: out += 'x'; break;
    case NodeKind::negate:
      out += '-';
      print(*n.lhs, 3, out);
      break;
    case NodeKind::add:
    case NodeKind::subtract:
      print(*n.lhs, 1, out);
      out += n.kind == NodeKind::add ? " + " : " - ";
      print(*n.rhs, 2, out);
      break;
    case NodeKind::multiply:
    case NodeKind::divide:
      print(*n.lhs, 2, out);
      out += n.kind == NodeKind::multiply ? '*' : '/';
      print(*n.rhs, 3, out);
      break;
    case NodeKind::power:
      print(*n.lhs, 5, out);
      out += '^';
      out += std::to_string(n.exponent);
      break;
    case NodeKind::function:
      out += to_string(n.function);
      out += '(';
      print(*n.lhs, 1, out);
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

}  // namespace detail

/// Minimal-parenthesis rendering; parse(e.to_string()) == e.
inline std::string Expr::to_string() const {
  std::string out;
  detail::print(*node_, 1, out);
  return out;
}

// =============================================================================
// Evaluation
// =============================================================================

inline double checked_divide(double a, double b) {
  if (b == 0.0) throw Error(Errc::domain_error, "division by zero");
  return a / b;
}

inline double int_power(double base, unsigned n) {
  double r = 1.0;
  for (unsigned i = 0; i < n; ++i) r *= base;
  return r;
}

inline double apply_function(Function fn, double v) {
  switch (fn) {
    case Function::sin: return std::sin(v);
    case Function::cos: return std::cos(v);
    case Function::exp: return std::exp(v);
    case Function::sqrt:
      if (v < 0.0) throw Error(Errc::domain_error, "sqrt of negative argument");
      return std::sqrt(v);
    case Function::atan: return std::atan(v);
  }
  return 0.0;
}

/// Generic tree walk. `make_constant` lifts a double into T; the arithmetic
/// seams (checked_divide, int_power, apply_function) are found by overload
/// resolution or ADL for T.
template <class T, class MakeConstant>
T evaluate(const Node& n, const T& x, const MakeConstant& make_constant) {
  switch (n.kind) {
    case NodeKind::constant: return make_constant(n.value);
    case NodeKind::variable: return x;
    case NodeKind::negate: return -evaluate(*n.lhs, x, make_constant);
    case NodeKind::add: return evaluate(*n.lhs, x, make_constant) + evaluate(*n.rhs, x, make_constant);
    case NodeKind::subtract: return evaluate(*n.lhs, x, make_constant) - evaluate(*n.rhs, x, make_constant);
    case NodeKind::multiply: return evaluate(*n.lhs, x, make_constant) * evaluate(*n.rhs, x, make_constant);
    case NodeKind::divide:
      return checked_divide(evaluate(*n.lhs, x, make_constant), evaluate(*n.rhs, x, make_constant));
    case NodeKind::power: return int_power(evaluate(*n.lhs, x, make_constant), n.exponent);
    case NodeKind::function: return apply_function(n.function, evaluate(*n.lhs, x, make_constant));
  }
  return make_constant(0.0);
}

inline double eval(const Expr& e, double x) {
  const double v = evaluate(e.node(), x, [](double c) { return c; });
  if (!std::isfinite(v)) throw Error(Errc::domain_error, "non-finite value at x = " + detail::format_number(x));
  return v;
}

}  // namespace periodlab
