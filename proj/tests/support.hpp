#pragma once

// Shared fixtures: random polynomial sources and independent oracles.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "periodlab/quadrature.hpp"

namespace periodlab::testing {

/// Coefficient list c[k] multiplying x^k, printed as parser input.
inline std::string polynomial_source(const std::vector<double>& c) {
  std::string s;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    char buf[64];
    const double mag = std::abs(c[k]);
    if (k == 0) {
      std::snprintf(buf, sizeof buf, "%.17g", mag);
    } else if (k == 1) {
      std::snprintf(buf, sizeof buf, "%.17g*x", mag);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g*x^%zu", mag, k);
    }
    if (s.empty()) {
      s = (c[k] < 0.0 ? "-" : "") + std::string(buf);
    } else {
      s += (c[k] < 0.0 ? " - " : " + ") + std::string(buf);
    }
  }
  return s.empty() ? "0" : s;
}

inline double horner(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
  return r;
}

/// Coefficients that are multiples of 1/8 in [-lim, lim].
inline double dyadic(std::mt19937_64& rng, double lim) {
  const int n = static_cast<int>(std::lround(8.0 * lim));
  std::uniform_int_distribution<int> pick(-n, n);
  return pick(rng) / 8.0;
}

/// Random polynomial with zero constant term; c[1] forced into [lo1, hi1].
inline std::vector<double> random_origin_polynomial(std::mt19937_64& rng, std::size_t degree, double lim,
                                                    double c1_lo = -1.0, double c1_hi = 1.0) {
  std::vector<double> c(degree + 1, 0.0);
  std::uniform_real_distribution<double> first(c1_lo, c1_hi);
  c[1] = std::round(8.0 * first(rng)) / 8.0;
  for (std::size_t k = 2; k <= degree; ++k) c[k] = dyadic(rng, lim);
  return c;
}

/// Complete elliptic integral K(k) by the arithmetic-geometric mean.
inline double elliptic_K(double k) {
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  for (int i = 0; i < 60 && std::abs(a - b) > 1e-17 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

/// Period of x'' + x + eps*x^3 = 0 at amplitude b via x = b*sin(theta),
/// which leaves a smooth integrand.
inline double duffing_period(double eps, double b) {
  const auto h = [&](double th) {
    const double s = std::sin(th);
    return 1.0 / std::sqrt(1.0 + 0.5 * eps * b * b * (1.0 + s * s));
  };
  return 4.0 * quadrature::adaptive_gauss_kronrod(h, 0.0, 0.5 * std::numbers::pi, 1e-14);
}

/// Quadratic coefficient of T(c) = T0 + K c^2 + L c^3 + M c^4 + ... from
/// samples at c, 2c, 4c, eliminating L and M.
inline double richardson_quadratic(double T0, double Tc, double T2c, double T4c, double c) {
  const double k1 = (Tc - T0) / (c * c);
  const double k2 = (T2c - T0) / (4.0 * c * c);
  const double k4 = (T4c - T0) / (16.0 * c * c);
  const double r1 = 2.0 * k1 - k2;
  const double r2 = 2.0 * k2 - k4;
  return (4.0 * r1 - r2) / 3.0;
}

inline bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace periodlab::testing
