#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/expr.hpp"
#include "periodlab/quadrature.hpp"

namespace periodlab {

/// Dense real polynomial, coefficient k multiplies x^k.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(std::size_t degree, double coeff = 1.0) {
    std::vector<double> c(degree + 1, 0.0);
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }

  [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return c_; }
  [[nodiscard]] double coefficient(std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0.0; }
  [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
  [[nodiscard]] std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }

  [[nodiscard]] double operator()(double x) const noexcept {
    double r = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
    return r;
  }

  [[nodiscard]] Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  /// Primitive with zero constant term.
  [[nodiscard]] Polynomial antiderivative() const {
    if (c_.empty()) return {};
    std::vector<double> p(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) p[k + 1] = c_[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(p));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coefficient(k) + b.coefficient(k);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<double> c(a.c_);
    for (double& v : c) v = -v;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(double s, const Polynomial& a) { return Polynomial({s}) * a; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Sum of c_k*x^k terms in ascending degree; unit coefficients are elided.
  [[nodiscard]] Expr to_expr() const {
    std::optional<Expr> acc;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const double v = c_[k];
      if (v == 0.0) continue;
      const double mag = std::abs(v);
      Expr term = k == 0 ? Expr::constant(mag)
                 : k == 1 ? Expr::variable()
                          : Expr::power(Expr::variable(), static_cast<unsigned>(k));
      if (k > 0 && mag != 1.0) term = Expr::constant(mag) * term;
      if (!acc) {
        acc = v < 0.0 ? -term : term;
      } else {
        acc = v < 0.0 ? *acc - term : *acc + term;
      }
    }
    return acc ? *acc : Expr::constant(0.0);
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

/// Structural polynomial extraction: constants, x, +, -, *, integer powers and
/// division by a constant. Any function node makes the tree non-polynomial.
inline std::optional<Polynomial> as_polynomial(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::constant: return Polynomial({n.value});
    case NodeKind::variable: return Polynomial({0.0, 1.0});
    case NodeKind::negate: {
      auto p = as_polynomial(e.lhs());
      if (!p) return std::nullopt;
      return -*p;
    }
    case NodeKind::add:
    case NodeKind::subtract:
    case NodeKind::multiply: {
      auto a = as_polynomial(e.lhs());
      if (!a) return std::nullopt;
      auto b = as_polynomial(e.rhs());
      if (!b) return std::nullopt;
      if (n.kind == NodeKind::add) return *a + *b;
      if (n.kind == NodeKind::subtract) return *a - *b;
      return *a * *b;
    }
    case NodeKind::divide: {
      auto a = as_polynomial(e.lhs());
      if (!a) return std::nullopt;
      auto b = as_polynomial(e.rhs());
      if (!b || b->degree() != 0 || b->is_zero()) return std::nullopt;
      return (1.0 / b->coefficient(0)) * *a;
    }
    case NodeKind::power: {
      auto base = as_polynomial(e.lhs());
      if (!base) return std::nullopt;
      Polynomial r({1.0});
      for (unsigned i = 0; i < n.exponent; ++i) r = r * *base;
      return r;
    }
    case NodeKind::function: return std::nullopt;
  }
  return std::nullopt;
}

/// Polynomial primitive with zero constant term, rendered term by term as
/// a_k*x^(k+1)/(k+1). Throws NotPolynomial for any non-polynomial tree.
inline Expr poly_antiderivative(const Expr& e) {
  const auto p = as_polynomial(e);
  if (!p) throw Error(Errc::not_polynomial, "'" + e.to_string() + "' is not a polynomial");
  std::optional<Expr> acc;
  const auto& c = p->coefficients();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    const double mag = std::abs(c[k]);
    Expr term = k == 0 ? Expr::variable() : Expr::power(Expr::variable(), static_cast<unsigned>(k + 1));
    if (mag != 1.0) term = Expr::constant(mag) * term;
    if (k > 0) term = term / Expr::constant(static_cast<double>(k + 1));
    if (!acc) {
      acc = c[k] < 0.0 ? -term : term;
    } else {
      acc = c[k] < 0.0 ? *acc - term : *acc + term;
    }
  }
  return acc ? *acc : Expr::constant(0.0);
}

/// Moment polynomial M(x) = int_0^x s p(s) ds of a polynomial p.
inline Polynomial moment_polynomial(const Polynomial& p) { return (Polynomial({0.0, 1.0}) * p).antiderivative(); }

/// int_0^x s f(s) ds. Exact for polynomial f, adaptive Gauss-Kronrod
/// (relative tolerance 1e-12) otherwise.
inline double moment_integral(const Expr& f, double x) {
  if (const auto p = as_polynomial(f)) return moment_polynomial(*p)(x);
  return quadrature::adaptive_gauss_kronrod([&](double s) { return s * eval(f, s); }, 0.0, x);
}

}  // namespace periodlab
