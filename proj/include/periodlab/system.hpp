#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "periodlab/error.hpp"
#include "periodlab/expr.hpp"
#include "periodlab/jet.hpp"
#include "periodlab/polynomial.hpp"

namespace periodlab {

inline constexpr double origin_tolerance = 1e-12;

/// Validated Lienard pair for x'' + f(x) x' + g(x) = 0 with the derivative
/// data at the origin cached. Immutable once built.
class SystemSpec {
 public:
  [[nodiscard]] const Expr& f() const noexcept { return f_; }
  [[nodiscard]] const Expr& g() const noexcept { return g_; }
  [[nodiscard]] const std::optional<Polynomial>& f_polynomial() const noexcept { return f_poly_; }
  [[nodiscard]] const std::optional<Polynomial>& g_polynomial() const noexcept { return g_poly_; }

  [[nodiscard]] double f0() const noexcept { return f0_; }
  [[nodiscard]] double fp0() const noexcept { return fp0_; }
  [[nodiscard]] double fpp0() const noexcept { return fpp0_; }
  [[nodiscard]] double gp0() const noexcept { return gp0_; }
  [[nodiscard]] double gpp0() const noexcept { return gpp0_; }
  [[nodiscard]] double gppp0() const noexcept { return gppp0_; }
  [[nodiscard]] bool is_conservative() const noexcept { return conservative_; }
  [[nodiscard]] bool is_polynomial() const noexcept { return f_poly_.has_value() && g_poly_.has_value(); }

  double eval_f(double x) const { return f_poly_ ? (*f_poly_)(x) : eval(f_, x); }
  double eval_g(double x) const { return g_poly_ ? (*g_poly_)(x) : eval(g_, x); }

  /// M(x) = int_0^x s f(s) ds.
  double moment(double x) const {
    if (conservative_) return 0.0;
    if (moment_poly_) return (*moment_poly_)(x);
    return moment_integral(f_, x);
  }

  friend SystemSpec make_system(const Expr& f, const Expr& g);

 private:
  SystemSpec() = default;

  Expr f_;
  Expr g_;
  std::optional<Polynomial> f_poly_;
  std::optional<Polynomial> g_poly_;
  std::optional<Polynomial> moment_poly_;
  double f0_ = 0.0, fp0_ = 0.0, fpp0_ = 0.0;
  double gp0_ = 0.0, gpp0_ = 0.0, gppp0_ = 0.0;
  bool conservative_ = false;
};

/// Checks f(0) = g(0) = 0 and g'(0) > 0 and caches jet-derived derivatives.
inline SystemSpec make_system(const Expr& f, const Expr& g) {
  SystemSpec s;
  s.f_ = f;
  s.g_ = g;
  const Jet fj = eval_jet(f, 0.0, default_jet_order);
  const Jet gj = eval_jet(g, 0.0, default_jet_order);
  if (std::abs(fj.value()) > origin_tolerance) {
    throw Error(Errc::not_at_origin, "f(0) = " + detail::format_number(fj.value()) + " must vanish");
  }
  if (std::abs(gj.value()) > origin_tolerance) {
    throw Error(Errc::not_at_origin, "g(0) = " + detail::format_number(gj.value()) + " must vanish");
  }
  s.f0_ = fj.derivative(0);
  s.fp0_ = fj.derivative(1);
  s.fpp0_ = fj.derivative(2);
  s.gp0_ = gj.derivative(1);
  s.gpp0_ = gj.derivative(2);
  s.gppp0_ = gj.derivative(3);
  if (!(s.gp0_ > 0.0)) {
    throw Error(Errc::nonpositive_stiffness, "g'(0) = " + detail::format_number(s.gp0_) + " must be positive");
  }
  s.f_poly_ = as_polynomial(f);
  s.g_poly_ = as_polynomial(g);
  if (f.is_constant(0.0) || (s.f_poly_ && s.f_poly_->is_zero())) {
    s.conservative_ = true;
  } else if (!s.f_poly_) {
    // Non-polynomial trees such as 0*sin(x): zero jet plus zero samples.
    bool zero = true;
    for (double c : fj.coefficients()) zero = zero && c == 0.0;
    for (double x : {-1.0, -0.5, 0.5, 1.0}) {
      try {
        zero = zero && eval(f, x) == 0.0;
      } catch (const Error&) {
        zero = false;
      }
    }
    s.conservative_ = zero;
  }
  if (s.f_poly_) s.moment_poly_ = moment_polynomial(*s.f_poly_);
  return s;
}

inline SystemSpec validate_system(std::string_view f_source, std::string_view g_source) {
  return make_system(parse(f_source), parse(g_source));
}

}  // namespace periodlab
