#pragma once

/**
 * @file ode.hpp
 * @brief Dormand-Prince 5(4) integrator with PI step-size control.
 *
 * Error per step is measured against atol + rtol*max(|y_old|, |y_new|)
 * componentwise and combined in the RMS norm. A rejected step is retried
 * with a smaller h; the step size never drops below min_step.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "periodlab/error.hpp"

namespace periodlab::ode {

inline constexpr double min_step = 1e-14;

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {

// Butcher tableau of the Dormand-Prince pair.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// b - b_hat (fifth minus fourth order weights).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

}  // namespace detail

template <std::size_t N>
struct RawStep {
  State<N> y;      // fifth-order solution
  State<N> error;  // embedded error estimate
};

/// One unchecked Dormand-Prince step of size h.
template <std::size_t N, class F>
RawStep<N> dopri_step(const F& rhs, double t, const State<N>& y, double h) {
  using namespace detail;
  const State<N> k1 = rhs(t, y);
  const State<N> k2 = rhs(t + c2 * h, axpy<N>(y, h, {{a21, &k1}}));
  const State<N> k3 = rhs(t + c3 * h, axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
  const State<N> k4 = rhs(t + c4 * h, axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State<N> k5 = rhs(t + c5 * h, axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State<N> k6 = rhs(t + h, axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const State<N> y5 = axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const State<N> k7 = rhs(t + h, y5);
  State<N> err{};
  for (std::size_t i = 0; i < N; ++i) {
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }
  return {y5, err};
}

template <std::size_t N>
struct AcceptedStep {
  double t;
  State<N> y;
  double h_used;
  double h_next;
  int rejections;
};

/// Error-controlled stepper. Keeps the previous error norm for the PI
/// controller, so one instance per trajectory.
template <std::size_t N>
class DormandPrince54 {
 public:
  DormandPrince54(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

  [[nodiscard]] double rtol() const noexcept { return rtol_; }
  [[nodiscard]] double atol() const noexcept { return atol_; }

  template <class F>
  AcceptedStep<N> step(const F& rhs, double t, const State<N>& y, double h_try) {
    double h = h_try;
    int rejections = 0;
    for (;;) {
      if (!(h >= min_step)) throw Error(Errc::step_underflow, "step size fell below 1e-14");
      const RawStep<N> raw = dopri_step<N>(rhs, t, y, h);
      const double err = error_norm(y, raw);
      if (err <= 1.0) {
        double factor = err == 0.0 ? max_growth
                                   : safety * std::pow(err, -alpha) * std::pow(previous_error_, beta);
        factor = std::clamp(factor, min_shrink, max_growth);
        if (rejections > 0) factor = std::min(factor, 1.0);
        previous_error_ = std::max(err, 1e-4);
        return {t + h, raw.y, h, h * factor, rejections};
      }
      ++rejections;
      h *= std::max(min_shrink, safety * std::pow(err, -0.2));
    }
  }

 private:
  static constexpr double safety = 0.9;
  static constexpr double beta = 0.04;
  static constexpr double alpha = 0.2 - 0.75 * beta;
  static constexpr double min_shrink = 0.2;
  static constexpr double max_growth = 5.0;

  double error_norm(const State<N>& y0, const RawStep<N>& raw) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double scale = atol_ + rtol_ * std::max(std::abs(y0[i]), std::abs(raw.y[i]));
      const double r = raw.error[i] / scale;
      sum += r * r;
    }
    const double norm = std::sqrt(sum / static_cast<double>(N));
    return std::isfinite(norm) ? norm : 1e10;
  }

  double rtol_;
  double atol_;
  double previous_error_ = 1e-4;
};

/// Integrates from t0 to t1 (t1 > t0), landing exactly on t1.
template <std::size_t N, class F>
State<N> integrate_to(const F& rhs, double t0, const State<N>& y0, double t1, double rtol, double atol,
                      double h0 = 1e-3) {
  DormandPrince54<N> stepper(rtol, atol);
  double t = t0;
  State<N> y = y0;
  double h = h0;
  while (t1 - t > 4.0 * min_step) {
    const bool last = t + h >= t1;
    const double h_try = last ? t1 - t : h;
    const AcceptedStep<N> s = stepper.step(rhs, t, y, h_try);
    y = s.y;
    t = (last && s.h_used == h_try) ? t1 : s.t;
    h = s.h_next;
  }
  return y;
}

}  // namespace periodlab::ode
