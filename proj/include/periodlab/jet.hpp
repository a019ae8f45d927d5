#pragma once

/**
 * @file jet.hpp
 * @brief Truncated Taylor arithmetic ("jets") for exact derivatives of Expr.
 *
 * A jet of order N at base point x0 stores c[k] = h^(k)(x0) / k! for
 * k = 0..N. Products are truncated Cauchy products, quotients are solved
 * recursively, and the elementary functions use the usual ODE-style
 * recurrences (e.g. k e_k = sum_j j a_j e_{k-j} for e = exp(a)).
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/expr.hpp"

namespace periodlab {

inline constexpr int default_jet_order = 4;

class Jet {
 public:
  Jet(double base, std::vector<double> coeffs) : base_(base), c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("jet needs at least one coefficient");
  }

  static Jet constant(double base, int order, double value) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = value;
    return Jet(base, std::move(c));
  }

  [[nodiscard]] double base() const noexcept { return base_; }
  [[nodiscard]] int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] double value() const noexcept { return c_[0]; }
  [[nodiscard]] double operator[](std::size_t k) const { return c_.at(k); }
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return c_; }

  /// k-th derivative at the base point, k! * c[k].
  [[nodiscard]] double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return fact * c_.at(static_cast<std::size_t>(k));
  }

  friend Jet operator-(const Jet& a) {
    std::vector<double> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = -a.c_[k];
    return Jet(a.base_, std::move(c));
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    std::vector<double> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.c_[k] + b.c_[k];
    return Jet(a.base_, std::move(c));
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    std::vector<double> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.c_[k] - b.c_[k];
    return Jet(a.base_, std::move(c));
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    const std::size_t n = a.c_.size();
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      c[k] = s;
    }
    return Jet(a.base_, std::move(c));
  }

  friend Jet operator*(double s, const Jet& a) {
    std::vector<double> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = s * a.c_[k];
    return Jet(a.base_, std::move(c));
  }

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  static void check_compatible(const Jet& a, const Jet& b) {
    if (a.base_ != b.base_ || a.c_.size() != b.c_.size()) {
      throw std::invalid_argument("jet arithmetic needs equal base and order");
    }
  }

  double base_;
  std::vector<double> c_;
};

/// Jet of the identity at x0: (x0, 1, 0, ..., 0).
inline Jet seed(double x0, int order) {
  if (order < 0) throw std::invalid_argument("jet order must be nonnegative");
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = x0;
  if (order >= 1) c[1] = 1.0;
  return Jet(x0, std::move(c));
}

inline Jet checked_divide(const Jet& a, const Jet& b) {
  if (a.base() != b.base() || a.order() != b.order()) {
    throw std::invalid_argument("jet arithmetic needs equal base and order");
  }
  const double b0 = b[0];
  if (b0 == 0.0) throw Error(Errc::domain_error, "division by a jet with zero constant term");
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  std::vector<double> q(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = a[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b[j] * q[k - j];
    q[k] = s / b0;
  }
  return Jet(a.base(), std::move(q));
}

inline Jet int_power(const Jet& base, unsigned n) {
  Jet r = Jet::constant(base.base(), base.order(), 1.0);
  for (unsigned i = 0; i < n; ++i) r = r * base;
  return r;
}

namespace detail {

inline std::pair<Jet, Jet> sin_cos(const Jet& a) {
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  std::vector<double> s(n, 0.0), c(n, 0.0);
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double ja = static_cast<double>(j) * a[j];
      ss += ja * c[k - j];
      cc -= ja * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = cc / static_cast<double>(k);
  }
  return {Jet(a.base(), std::move(s)), Jet(a.base(), std::move(c))};
}

inline Jet exp(const Jet& a) {
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  std::vector<double> e(n, 0.0);
  e[0] = std::exp(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return Jet(a.base(), std::move(e));
}

inline Jet sqrt(const Jet& a) {
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  if (a[0] < 0.0) throw Error(Errc::domain_error, "sqrt of negative argument");
  if (a[0] == 0.0 && n > 1) throw Error(Errc::domain_error, "sqrt is not differentiable at 0");
  std::vector<double> r(n, 0.0);
  r[0] = std::sqrt(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = a[k];
    for (std::size_t j = 1; j < k; ++j) s -= r[j] * r[k - j];
    r[k] = s / (2.0 * r[0]);
  }
  return Jet(a.base(), std::move(r));
}

// atan(a)' = a' / (1 + a^2): divide the shifted derivative series and integrate.
inline Jet atan(const Jet& a) {
  const std::size_t n = static_cast<std::size_t>(a.order()) + 1;
  std::vector<double> u(n, 0.0);
  u[0] = std::atan(a[0]);
  if (n > 1) {
    std::vector<double> da(n - 1), low(n - 1);
    for (std::size_t m = 0; m + 1 < n; ++m) {
      da[m] = static_cast<double>(m + 1) * a[m + 1];
      low[m] = a[m];
    }
    const Jet lowered(a.base(), std::move(low));
    const Jet denom = Jet::constant(a.base(), lowered.order(), 1.0) + lowered * lowered;
    const Jet q = checked_divide(Jet(a.base(), std::move(da)), denom);
    for (std::size_t k = 1; k < n; ++k) u[k] = q[k - 1] / static_cast<double>(k);
  }
  return Jet(a.base(), std::move(u));
}

}  // namespace detail

inline Jet apply_function(Function fn, const Jet& a) {
  switch (fn) {
    case Function::sin: return detail::sin_cos(a).first;
    case Function::cos: return detail::sin_cos(a).second;
    case Function::exp: return detail::exp(a);
    case Function::sqrt: return detail::sqrt(a);
    case Function::atan: return detail::atan(a);
  }
  return a;
}

inline Jet eval_jet(const Expr& e, double x0, int order = default_jet_order) {
  const Jet x = seed(x0, order);
  Jet r = evaluate(e.node(), x, [&](double c) { return Jet::constant(x0, order, c); });
  for (double v : r.coefficients()) {
    if (!std::isfinite(v)) throw Error(Errc::domain_error, "non-finite Taylor coefficient");
  }
  return r;
}

/// [h(x0), h'(x0), ..., h^(k)(x0)].
inline std::vector<double> derivatives_at(const Expr& e, double x0, int k) {
  if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
  const Jet j = eval_jet(e, x0, k);
  std::vector<double> d(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) d[static_cast<std::size_t>(i)] = j.derivative(i);
  return d;
}

}  // namespace periodlab
