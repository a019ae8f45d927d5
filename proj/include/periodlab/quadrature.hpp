#pragma once

/**
 * @file quadrature.hpp
 * @brief Integration rules used by the potential, moment and period integrals.
 *
 *  - adaptive_gauss_kronrod: 7/15-point Gauss-Kronrod pair with recursive
 *    bisection, for smooth integrands.
 *  - gauss_legendre_10: fixed 10-point rule for short smooth panels.
 *  - tanh_sinh_endpoint: double-exponential rule for integrals of the form
 *    int_0^L h(d) dd with an integrable singularity at d = 0. The integrand
 *    receives the distance d from the singular endpoint directly, so no
 *    precision is lost forming (endpoint - x) near the singularity.
 */

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "periodlab/error.hpp"

namespace periodlab::quadrature {

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss7_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr std::array<double, 5> legendre10_nodes{
    0.148874338981631210884826001129720, 0.433395394129247190799265943165784,
    0.679409568299024406234327365114874, 0.865063366688984510732096688423493,
    0.973906528517171720077964012084452};

inline constexpr std::array<double, 5> legendre10_weights{
    0.295524224714752870173892994651338, 0.269266719309996355091226921569469,
    0.219086362515982043995534934228163, 0.149451349150580593145776339657697,
    0.066671344308688137593568809893332};

struct KronrodEstimate {
  double value;
  double error;
  double abs_value;  // integral of |f|, for the roundoff floor
};

template <class F>
KronrodEstimate kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kronrod_weights[7];
  double gauss = fc * gauss7_weights[3];
  double abs_sum = std::abs(fc) * kronrod_weights[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kronrod_weights[j] * (f1 + f2);
    abs_sum += kronrod_weights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += gauss7_weights[j / 2] * (f1 + f2);
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

template <class F>
double adapt(const F& f, double a, double b, const KronrodEstimate& est, double tol, int depth,
             int max_depth) {
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * est.abs_value;
  if (est.error <= tol || est.error <= floor || depth >= max_depth) return est.value;
  const double mid = 0.5 * (a + b);
  const KronrodEstimate left = kronrod15(f, a, mid);
  const KronrodEstimate right = kronrod15(f, mid, b);
  return adapt(f, a, mid, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, mid, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive 7/15 Gauss-Kronrod integration of f over [a, b] (either order).
template <class F>
double adaptive_gauss_kronrod(const F& f, double a, double b, double rel_tol = 1e-12, int max_depth = 40) {
  if (a == b) return 0.0;
  const detail::KronrodEstimate whole = detail::kronrod15(f, a, b);
  const double tol = rel_tol * std::abs(whole.value);
  return detail::adapt(f, a, b, whole, tol, 0, max_depth);
}

/// Ten-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 19.
template <class F>
double gauss_legendre_10(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t j = 0; j < detail::legendre10_nodes.size(); ++j) {
    const double dx = half * detail::legendre10_nodes[j];
    s += detail::legendre10_weights[j] * (f(center - dx) + f(center + dx));
  }
  return s * half;
}

struct TanhSinhOptions {
  double abs_tol = 1e-10;
  int min_level = 3;
  int max_level = 12;
  double t_max = 4.0;
};

/// int_0^L h(d) dd by tanh-sinh with step halving until two successive
/// levels agree within abs_tol. Throws QuadratureNoConvergence otherwise.
template <class H>
double tanh_sinh_endpoint(const H& h, double length, const TanhSinhOptions& opt = {}) {
  if (length <= 0.0) return 0.0;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  const auto node = [&](double t) {
    const double u = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(u));
    const double d = u >= 0.0 ? length / (1.0 + e) : length * e / (1.0 + e);
    if (d <= 0.0) return 0.0;
    const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    const double w = 0.5 * length * sech2 * half_pi * std::cosh(t);
    if (w == 0.0) return 0.0;
    return w * h(d);
  };

  double sum = 0.0;
  const int n0 = static_cast<int>(std::floor(opt.t_max));
  for (int k = -n0; k <= n0; ++k) sum += node(static_cast<double>(k));
  double step = 1.0;
  double previous = sum * step;
  for (int level = 1; level <= opt.max_level; ++level) {
    step *= 0.5;
    for (double t = step; t <= opt.t_max; t += 2.0 * step) sum += node(t) + node(-t);
    const double current = sum * step;
    if (level >= opt.min_level && std::abs(current - previous) <= opt.abs_tol) return current;
    previous = current;
  }
  throw Error(Errc::quadrature_no_convergence, "tanh-sinh levels exhausted");
}

}  // namespace periodlab::quadrature
