#pragma once

/**
 * @file conservative.hpp
 * @brief Energy-period function of x'' + g(x) = 0.
 *
 * For an energy level c inside the central well, the orbit reverses at the
 * turning points a < 0 < b with G(a) = G(b) = c, and
 *
 *     T(c) = sqrt(2) * int_a^b dx / sqrt(c - G(x)).
 *
 * The integral is split at x = 0 so each half has exactly one inverse
 * square-root endpoint, which the tanh-sinh rule absorbs. Near the turning
 * point c - G(x) is formed as a short Gauss-Legendre integral of g rather
 * than as a difference of two nearly equal potentials.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "periodlab/error.hpp"
#include "periodlab/expr.hpp"
#include "periodlab/parallel.hpp"
#include "periodlab/polynomial.hpp"
#include "periodlab/quadrature.hpp"

namespace periodlab {

inline constexpr double default_well_cap = 10.0;
inline constexpr double default_quadrature_tolerance = 1e-10;

// =============================================================================
// Potential
// =============================================================================

/// G(x) = int_0^x g, exact when g is a polynomial.
class Potential {
 public:
  explicit Potential(Expr g) : g_(std::move(g)), poly_(as_polynomial(g_)) {
    if (poly_) primitive_ = poly_->antiderivative();
  }

  [[nodiscard]] const Expr& g() const noexcept { return g_; }
  [[nodiscard]] bool is_polynomial() const noexcept { return poly_.has_value(); }

  [[nodiscard]] double force(double x) const { return poly_ ? (*poly_)(x) : eval(g_, x); }

  [[nodiscard]] double operator()(double x) const {
    if (primitive_) return (*primitive_)(x);
    return quadrature::adaptive_gauss_kronrod([this](double s) { return eval(g_, s); }, 0.0, x);
  }

  /// int_0^d g(end + direction*s) ds on a short panel. Parameterized by the
  /// length d so the result stays proportional to d even when end + d
  /// rounds to end.
  [[nodiscard]] double panel(double end, double direction, double d) const {
    const auto along = [&](double s) { return force(end + direction * s); };
    return quadrature::gauss_legendre_10(along, 0.0, d);
  }

 private:
  Expr g_;
  std::optional<Polynomial> poly_;
  std::optional<Polynomial> primitive_;
};

inline double potential(const Expr& g, double x) { return Potential(g)(x); }

// =============================================================================
// Well and turning points
// =============================================================================

struct WellRange {
  double c_max;  // largest admissible energy
  double a_min;  // left turning point at c_max
  double b_max;  // right turning point at c_max
  double left_edge;   // nearest zero of g (or cap) on the left
  double right_edge;  // nearest zero of g (or cap) on the right
};

struct TurningPoints {
  double c;
  double a;
  double b;
};

namespace detail {

inline constexpr double separatrix_pullback = 1e-6;

// Outward scan for the first point where x*g(x) <= 0, refined by bisection.
inline double scan_side(const Potential& pot, double cap, double direction) {
  const double step = 1e-3 * cap;
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double x = direction * step * i;
    double gx = 0.0;
    try {
      gx = pot.force(x);
    } catch (const Error& e) {
      if (e.code() != Errc::domain_error) throw;
      if (i == 1) throw Error(Errc::degenerate_well, "g undefined next to the origin");
      return prev;
    }
    if (direction * gx <= 0.0) {
      if (i == 1) throw Error(Errc::degenerate_well, "g vanishes next to the origin");
      double lo = prev, hi = x;  // sign(g(lo)) == direction
      for (int it = 0; it < 200 && std::abs(hi - lo) > 4e-16 * std::abs(hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (direction * pot.force(mid) > 0.0) lo = mid; else hi = mid;
      }
      return lo;
    }
    prev = x;
  }
  return direction * cap;
}

// Root of G(x) = c between 0 and edge (G monotone there): bisection to a
// tight bracket, then Newton polish with g as the derivative.
inline double solve_turning_point(const Potential& pot, double c, double edge) {
  double inside = 0.0, outside = edge;  // G(inside) < c <= G(outside)
  for (int it = 0; it < 200; ++it) {
    if (std::abs(outside - inside) <= 1e-9 * std::abs(edge)) break;
    const double mid = 0.5 * (inside + outside);
    if (pot(mid) < c) inside = mid; else outside = mid;
  }
  double x = 0.5 * (inside + outside);
  for (int it = 0; it < 50; ++it) {
    const double r = pot(x) - c;
    const double slope = pot.force(x);
    if (slope == 0.0) break;
    double next = x - r / slope;
    const double lo = std::min(inside, outside), hi = std::max(inside, outside);
    if (next < lo || next > hi) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - x) <= 1e-14 * std::abs(x);
    if (pot(next) < c) inside = next; else outside = next;
    x = next;
    if (done) break;
  }
  return x;
}

}  // namespace detail

/// Validated central well: the energies (0, c_max) whose orbits stay inside
/// the interval around 0 where x*g(x) > 0, explored out to |x| <= cap.
class Well {
 public:
  explicit Well(const Expr& g, double cap = default_well_cap) : pot_(g), cap_(cap) {
    if (!(cap > 0.0)) throw Error(Errc::degenerate_well, "cap must be positive");
    const double left = detail::scan_side(pot_, cap, -1.0);
    const double right = detail::scan_side(pot_, cap, +1.0);
    const double c_max = (1.0 - detail::separatrix_pullback) * std::min(pot_(left), pot_(right));
    if (!(c_max > 0.0)) throw Error(Errc::degenerate_well, "well has no positive energy levels");
    range_ = {c_max, detail::solve_turning_point(pot_, c_max, left),
              detail::solve_turning_point(pot_, c_max, right), left, right};
  }

  [[nodiscard]] const WellRange& range() const noexcept { return range_; }
  [[nodiscard]] const Potential& potential() const noexcept { return pot_; }
  [[nodiscard]] double cap() const noexcept { return cap_; }

  void check_energy(double c) const {
    if (!(c > 0.0) || !(c < range_.c_max)) {
      throw Error(Errc::energy_out_of_range, "energy " + detail::format_number(c) + " outside (0, " +
                                                 detail::format_number(range_.c_max) + ")");
    }
  }

  [[nodiscard]] TurningPoints turning_points(double c) const {
    check_energy(c);
    return {c, detail::solve_turning_point(pot_, c, range_.left_edge),
            detail::solve_turning_point(pot_, c, range_.right_edge)};
  }

  /// T(c) to absolute tolerance `tol`.
  [[nodiscard]] double period(double c, double tol = default_quadrature_tolerance) const {
    const TurningPoints tp = turning_points(c);
    quadrature::TanhSinhOptions opt;
    opt.abs_tol = tol / (2.0 * std::sqrt(2.0));
    const double b = tp.b, a = tp.a;
    // Distance d from the turning point; near it, c - G is int of g over d.
    const auto right = [&](double d) {
      const double gap = d <= 0.25 * b ? pot_.panel(b, -1.0, d) : c - pot_(b - d);
      return 1.0 / std::sqrt(gap);
    };
    const auto left = [&](double d) {
      const double gap = d <= 0.25 * -a ? -pot_.panel(a, 1.0, d) : c - pot_(a + d);
      return 1.0 / std::sqrt(gap);
    };
    const double half_right = quadrature::tanh_sinh_endpoint(right, b, opt);
    const double half_left = quadrature::tanh_sinh_endpoint(left, -a, opt);
    return std::sqrt(2.0) * (half_left + half_right);
  }

 private:
  Potential pot_;
  double cap_;
  WellRange range_{};
};

inline WellRange well_range(const Expr& g, double cap = default_well_cap) { return Well(g, cap).range(); }

inline TurningPoints turning_points(const Expr& g, double c, double cap = default_well_cap) {
  return Well(g, cap).turning_points(c);
}

inline double period_conservative(const Expr& g, double c, double tol = default_quadrature_tolerance,
                                  double cap = default_well_cap) {
  return Well(g, cap).period(c, tol);
}

// =============================================================================
// Period curves
// =============================================================================

enum class Parameterization { energy, amplitude };
enum class CurveMethod { quadrature, return_map };
enum class CurveVerdict { increasing, decreasing, constant, mixed };

constexpr std::string_view to_string(Parameterization p) noexcept {
  return p == Parameterization::energy ? "energy" : "amplitude";
}
constexpr std::string_view to_string(CurveMethod m) noexcept {
  return m == CurveMethod::quadrature ? "quadrature" : "return_map";
}
constexpr std::string_view to_string(CurveVerdict v) noexcept {
  switch (v) {
    case CurveVerdict::increasing: return "increasing";
    case CurveVerdict::decreasing: return "decreasing";
    case CurveVerdict::constant: return "constant";
    case CurveVerdict::mixed: return "mixed";
  }
  return "?";
}

struct CurveSample {
  double param;
  double period;
  std::optional<double> displacement;  // return-map runs only
};

struct PeriodCurve {
  std::vector<CurveSample> samples;
  Parameterization parameterization = Parameterization::energy;
  CurveMethod method = CurveMethod::quadrature;
  double tolerance = default_quadrature_tolerance;
};

/// n points geometrically spaced from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = i == n - 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  }
  return out;
}

inline PeriodCurve period_curve_conservative(const Well& well, double c_lo, double c_hi, int n,
                                             double tol = default_quadrature_tolerance) {
  if (n < 2) throw Error(Errc::too_few_samples, "a period curve needs at least 2 samples");
  if (!(c_lo < c_hi)) throw Error(Errc::energy_out_of_range, "empty energy range");
  well.check_energy(c_lo);
  well.check_energy(c_hi);
  const auto energies = geometric_grid(c_lo, c_hi, n);
  PeriodCurve curve;
  curve.parameterization = Parameterization::energy;
  curve.method = CurveMethod::quadrature;
  curve.tolerance = tol;
  curve.samples = detail::parallel_map(energies.size(), [&](std::size_t i) {
    return CurveSample{energies[i], well.period(energies[i], tol), std::nullopt};
  });
  return curve;
}

inline PeriodCurve period_curve_conservative(const Expr& g, double c_lo, double c_hi, int n,
                                             double tol = default_quadrature_tolerance,
                                             double cap = default_well_cap) {
  return period_curve_conservative(Well(g, cap), c_lo, c_hi, n, tol);
}

/// constant when every T lies within 10*tolerance of the mean; otherwise
/// increasing/decreasing when every consecutive step clears 10*tolerance
/// with one sign.
inline CurveVerdict monotonicity_verdict(const PeriodCurve& curve) {
  const auto& s = curve.samples;
  if (s.size() < 3) throw Error(Errc::too_few_samples, "verdict needs at least 3 samples");
  const double threshold = 10.0 * curve.tolerance;
  double mean = 0.0;
  for (const auto& p : s) mean += p.period;
  mean /= static_cast<double>(s.size());
  double spread = 0.0;
  for (const auto& p : s) spread = std::max(spread, std::abs(p.period - mean));
  if (spread <= threshold) return CurveVerdict::constant;
  bool up = true, down = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double d = s[i].period - s[i - 1].period;
    up = up && d > threshold;
    down = down && d < -threshold;
  }
  if (up) return CurveVerdict::increasing;
  if (down) return CurveVerdict::decreasing;
  return CurveVerdict::mixed;
}

}  // namespace periodlab
