#pragma once

/**
 * @file lienard.hpp
 * @brief Return map, period curve and Sabatini function of x'' + f(x)x' + g(x) = 0.
 *
 * Orbits are integrated in the rescaled phase plane
 *
 *     x' = -sqrt(g1) * y,    y' = g(x)/sqrt(g1) - f(x) * y,     g1 = g'(0),
 *
 * which is the Lienard equation with y = -x'/sqrt(g1). Time is not rescaled,
 * so the first-return time is the period itself. Starting from (c, 0) the
 * orbit turns counterclockwise; a return is the first upward crossing of the
 * positive x-axis after a downward crossing of the negative x-axis.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "periodlab/conservative.hpp"
#include "periodlab/error.hpp"
#include "periodlab/expr.hpp"
#include "periodlab/jet.hpp"
#include "periodlab/local.hpp"
#include "periodlab/ode.hpp"
#include "periodlab/parallel.hpp"
#include "periodlab/polynomial.hpp"
#include "periodlab/system.hpp"

namespace periodlab {

inline constexpr double default_integrator_tolerance = 1e-10;
inline constexpr double event_tolerance = 1e-12;
inline constexpr double closed_orbit_guard = 100.0;  // |phi| <= guard * tol

struct PhaseState {
  double x;
  double y;
  double t;
};

/// (x', y') of the rescaled system.
inline std::pair<double, double> vector_field(const SystemSpec& sys, const PhaseState& s) {
  const double root = std::sqrt(sys.gp0());
  return {-root * s.y, sys.eval_g(s.x) / root - sys.eval_f(s.x) * s.y};
}

namespace detail {

inline auto lienard_rhs(const SystemSpec& sys) {
  return [&sys](double t, const ode::State<2>& y) {
    const auto [dx, dy] = vector_field(sys, {y[0], y[1], t});
    return ode::State<2>{dx, dy};
  };
}

}  // namespace detail

struct StepOutcome {
  PhaseState state;
  double h_next;
};

/// One accepted Dormand-Prince step (rtol = tol, atol = 1e-2*tol).
inline StepOutcome integrate_step(const SystemSpec& sys, const PhaseState& s, double h_try, double tol) {
  ode::DormandPrince54<2> stepper(tol, 1e-2 * tol);
  const auto step = stepper.step(detail::lienard_rhs(sys), s.t, ode::State<2>{s.x, s.y}, h_try);
  return {{step.y[0], step.y[1], step.t}, step.h_next};
}

// =============================================================================
// Amplitude domain
// =============================================================================

/// Amplitudes accepted by the return map: (0, amplitude_cap], with orbits
/// confined to |x|, |y| <= bounding_box.
struct LienardDomain {
  double domain_cap = default_well_cap;
  double amplitude_cap = 0.0;
  double bounding_box = 0.0;
};

/// Half the distance from 0 to the nearer side of the central well of g,
/// measured on the boundary orbit of the conservative well and never
/// exceeding half the distance to a zero of g or to the domain cap.
inline LienardDomain lienard_domain(const SystemSpec& sys, double domain_cap = default_well_cap) {
  const Well well(sys.g(), domain_cap);
  const WellRange& r = well.range();
  const double reach = std::min({-r.a_min, r.b_max, -r.left_edge, r.right_edge});
  LienardDomain d;
  d.domain_cap = domain_cap;
  d.amplitude_cap = 0.5 * reach;
  d.bounding_box = 10.0 * d.amplitude_cap;
  return d;
}

// =============================================================================
// Return map
// =============================================================================

struct ReturnMapResult {
  double c;
  double T;
  double phi;  // x(T) - c
  int steps;
  double tolerance;
};

inline ReturnMapResult return_map(const SystemSpec& sys, double c, const LienardDomain& domain,
                                  double tol = default_integrator_tolerance) {
  if (!(c > 0.0) || c > domain.amplitude_cap) {
    throw Error(Errc::amplitude_out_of_range, "amplitude " + detail::format_number(c) + " outside (0, " +
                                                  detail::format_number(domain.amplitude_cap) + "]");
  }
  const auto rhs = detail::lienard_rhs(sys);
  const double T0 = 2.0 * std::numbers::pi / std::sqrt(sys.gp0());
  const double t_limit = 10.0 * T0;
  ode::DormandPrince54<2> stepper(tol, 1e-2 * tol);

  ode::State<2> y{c, 0.0};
  double t = 0.0;
  double h = T0 / 64.0;
  bool crossed_left = false;
  int steps = 0;
  for (;;) {
    const auto s = stepper.step(rhs, t, y, h);
    ++steps;
    const ode::State<2>& next = s.y;
    if (!std::isfinite(next[0]) || !std::isfinite(next[1]) || std::abs(next[0]) > domain.bounding_box ||
        std::abs(next[1]) > domain.bounding_box) {
      throw Error(Errc::no_return, "orbit from c = " + detail::format_number(c) + " left the bounding box");
    }
    if (!crossed_left && y[1] > 0.0 && next[1] <= 0.0 && next[0] < 0.0) crossed_left = true;
    if (crossed_left && y[1] < 0.0 && next[1] >= 0.0 && next[0] > 0.0) {
      // Bisect the substep length on the sign of y.
      double lo = 0.0, hi = s.h_used, at = s.h_used;
      ode::State<2> hit = next;
      for (int it = 0; it < 200 && std::abs(hit[1]) > event_tolerance; ++it) {
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (t + hi)) break;
        at = 0.5 * (lo + hi);
        hit = ode::dopri_step<2>(rhs, t, y, at).y;
        if (hit[1] < 0.0) lo = at; else hi = at;
      }
      return {c, t + at, hit[0] - c, steps, tol};
    }
    y = next;
    t = s.t;
    h = s.h_next;
    if (t > t_limit) {
      throw Error(Errc::no_return, "no return from c = " + detail::format_number(c) + " before t = " +
                                       detail::format_number(t_limit));
    }
  }
}

inline ReturnMapResult return_map(const SystemSpec& sys, double c, double tol = default_integrator_tolerance) {
  return return_map(sys, c, lienard_domain(sys), tol);
}

// =============================================================================
// Period curve
// =============================================================================

struct LienardCurveOptions {
  double tol = default_integrator_tolerance;
  double domain_cap = default_well_cap;
  bool check_center_condition = true;  // reject systems failing the origin test first
};

/// True when the cached derivatives pass the center test at the origin.
inline bool passes_center_condition(const SystemSpec& sys) {
  const double v = lemma2_center(sys).lemma2_value;
  return std::abs(v) <= 1e-9 * std::max(1.0, std::abs(v));
}

inline PeriodCurve period_curve_lienard(const SystemSpec& sys, double c_lo, double c_hi, int n,
                                        const LienardCurveOptions& opt = {}) {
  if (n < 2) throw Error(Errc::too_few_samples, "a period curve needs at least 2 samples");
  if (!(c_lo > 0.0) || !(c_lo < c_hi)) throw Error(Errc::amplitude_out_of_range, "empty amplitude range");
  if (opt.check_center_condition && !passes_center_condition(sys)) {
    const double v = lemma2_center(sys).lemma2_value;
    throw NotACenterError(c_lo, std::numeric_limits<double>::quiet_NaN(),
                          "center condition at the origin fails (f'(0)g''(0) - 2g'(0)f''(0) = " +
                              detail::format_number(v) + ")");
  }
  const LienardDomain domain = lienard_domain(sys, opt.domain_cap);
  const auto amplitudes = geometric_grid(c_lo, c_hi, n);
  const auto results = detail::parallel_map(amplitudes.size(), [&](std::size_t i) {
    return return_map(sys, amplitudes[i], domain, opt.tol);
  });
  PeriodCurve curve;
  curve.parameterization = Parameterization::amplitude;
  curve.method = CurveMethod::return_map;
  curve.tolerance = closed_orbit_guard * opt.tol;
  for (const auto& r : results) {
    if (std::abs(r.phi) > closed_orbit_guard * opt.tol) {
      throw NotACenterError(r.c, r.phi,
                            "orbit from c = " + detail::format_number(r.c) + " does not close (phi = " +
                                detail::format_number(r.phi) + ")");
    }
    curve.samples.push_back({r.c, r.T, r.phi});
  }
  return curve;
}

// =============================================================================
// Sabatini function and sigma
// =============================================================================

/// C(x) = g(x)/g1 - M(x)^2/(g1*x^3), M(x) = int_0^x s f(s) ds.
///
/// Near 0 the direct formula cancels, so for |x| <= x_switch the Taylor
/// polynomial of C through x^6 is used instead, built from jets of f and g.
class SabatiniFunction {
 public:
  static constexpr int series_order = 6;

  explicit SabatiniFunction(const SystemSpec& sys, double half_width = 1.0)
      : sys_(&sys), x_switch_(1e-2 * half_width) {
    const Jet fj = eval_jet(sys.f(), 0.0, series_order + 2);
    const Jet gj = eval_jet(sys.g(), 0.0, series_order + 1);
    // M has coefficient f_j/(j+2) at x^(j+2).
    std::vector<double> m(static_cast<std::size_t>(series_order) + 5, 0.0);
    for (std::size_t j = 0; j + 2 < m.size() && j < fj.coefficients().size(); ++j) {
      m[j + 2] = fj[j] / static_cast<double>(j + 2);
    }
    const Polynomial m2 = Polynomial(m) * Polynomial(m);
    for (int k = 0; k <= series_order; ++k) {
      const double gk = static_cast<std::size_t>(k) < gj.coefficients().size() ? gj[static_cast<std::size_t>(k)] : 0.0;
      series_[static_cast<std::size_t>(k)] = (gk - m2.coefficient(static_cast<std::size_t>(k + 3))) / sys.gp0();
    }
  }

  [[nodiscard]] double x_switch() const noexcept { return x_switch_; }

  [[nodiscard]] double operator()(double x) const { return std::abs(x) <= x_switch_ ? series(x) : direct(x); }

  [[nodiscard]] double direct(double x) const {
    if (x == 0.0) return 0.0;
    const double m = sys_->moment(x);
    return sys_->eval_g(x) / sys_->gp0() - m * m / (sys_->gp0() * x * x * x);
  }

  [[nodiscard]] double series(double x) const {
    double r = 0.0;
    for (std::size_t k = series_.size(); k-- > 0;) r = r * x + series_[k];
    return r;
  }

  /// Taylor coefficients of C at 0, index k multiplies x^k.
  [[nodiscard]] const std::array<double, series_order + 1>& series_coefficients() const noexcept {
    return series_;
  }

 private:
  const SystemSpec* sys_;
  double x_switch_;
  std::array<double, series_order + 1> series_{};
};

inline double sabatini_C(const SystemSpec& sys, double x, double half_width = 1.0) {
  return SabatiniFunction(sys, half_width)(x);
}

/// sigma(x) = 2x^2 f M/g1 - 4M^2/g1 + x^3 gn - x^4 gn',  gn = g/g1 - x.
inline double sigma(const SystemSpec& sys, double x) {
  const double g1 = sys.gp0();
  const double m = sys.moment(x);
  const double f = sys.eval_f(x);
  double g = 0.0, gp = 0.0;
  if (const auto& p = sys.g_polynomial()) {
    g = (*p)(x);
    gp = p->derivative()(x);
  } else {
    const Jet gj = eval_jet(sys.g(), x, 1);
    g = gj[0];
    gp = gj[1];
  }
  const double gn = g / g1 - x;
  const double gn_prime = gp / g1 - 1.0;
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;
  return 2.0 * x2 * f * m / g1 - 4.0 * m * m / g1 + x3 * gn - x4 * gn_prime;
}

/// max |C(x) - x| over the grid (0 is skipped).
inline double isochronicity_residual(const SystemSpec& sys, const std::vector<double>& grid, double half_width = 1.0) {
  const SabatiniFunction C(sys, half_width);
  double worst = 0.0;
  for (double x : grid) {
    if (x == 0.0) continue;
    worst = std::max(worst, std::abs(C(x) - x));
  }
  return worst;
}

// =============================================================================
// Rayleigh reduction
// =============================================================================

namespace detail {

// Product that drops unit factors, keeping derivative trees readable.
inline Expr times(const Expr& a, const Expr& b) {
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return a * b;
}

}  // namespace detail

/// Symbolic derivative by the usual rules; only unit factors are simplified.
inline Expr differentiate(const Expr& e) {
  using detail::times;
  const Node& n = e.node();
  const Expr one = Expr::constant(1.0);
  switch (n.kind) {
    case NodeKind::constant: return Expr::constant(0.0);
    case NodeKind::variable: return one;
    case NodeKind::negate: return -differentiate(e.lhs());
    case NodeKind::add: return differentiate(e.lhs()) + differentiate(e.rhs());
    case NodeKind::subtract: return differentiate(e.lhs()) - differentiate(e.rhs());
    case NodeKind::multiply:
      return times(differentiate(e.lhs()), e.rhs()) + times(e.lhs(), differentiate(e.rhs()));
    case NodeKind::divide:
      return (times(differentiate(e.lhs()), e.rhs()) - times(e.lhs(), differentiate(e.rhs()))) /
             Expr::power(e.rhs(), 2);
    case NodeKind::power: {
      if (n.exponent == 0) return Expr::constant(0.0);
      if (n.exponent == 1) return differentiate(e.lhs());
      const Expr base = n.exponent == 2 ? e.lhs() : Expr::power(e.lhs(), n.exponent - 1);
      return times(Expr::constant(static_cast<double>(n.exponent)) * base, differentiate(e.lhs()));
    }
    case NodeKind::function: {
      const Expr u = e.lhs();
      const Expr du = differentiate(u);
      switch (n.function) {
        case Function::sin: return times(Expr::apply(Function::cos, u), du);
        case Function::cos: return -times(Expr::apply(Function::sin, u), du);
        case Function::exp: return times(Expr::apply(Function::exp, u), du);
        case Function::sqrt: return du / (Expr::constant(2.0) * Expr::apply(Function::sqrt, u));
        case Function::atan: return du / (one + Expr::power(u, 2));
      }
    }
  }
  return Expr::constant(0.0);
}

struct RayleighReduction {
  SystemSpec system;
  bool monotone_increasing_applies;  // F even through order 3 with F''(0) != 0
  std::string reason;
};

/// x'' + F(x') + x = 0 differentiated once: y = x' obeys y'' + F'(y) y' + y = 0,
/// a Lienard system with f = F' and g = x.
inline RayleighReduction rayleigh_to_lienard(const Expr& F) {
  const Jet Fj = eval_jet(F, 0.0, 3);
  if (std::abs(Fj[0]) > origin_tolerance) {
    throw Error(Errc::not_at_origin, "F(0) = " + detail::format_number(Fj[0]) + " must vanish");
  }
  const auto poly = as_polynomial(F);
  const Expr f = poly ? poly->derivative().to_expr() : differentiate(F);
  RayleighReduction out{make_system(f, Expr::variable()), false, ""};
  const bool even = Fj[1] == 0.0 && Fj[3] == 0.0;
  const bool curved = Fj.derivative(2) != 0.0;
  out.monotone_increasing_applies = even && curved;
  if (out.monotone_increasing_applies) {
    out.reason = "F even with F''(0) = " + detail::format_number(Fj.derivative(2)) + ": period increases near 0";
  } else if (!even) {
    out.reason = "F has an odd part through order 3";
  } else {
    out.reason = "F''(0) = 0";
  }
  return out;
}

}  // namespace periodlab
