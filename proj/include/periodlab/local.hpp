#pragma once

/**
 * @file local.hpp
 * @brief Quantities determined by the derivatives of f and g at the origin.
 *
 * With g1 = g'(0), g2 = g''(0), g3 = g'''(0), f1 = f'(0), f2 = f''(0):
 *
 *   Q      = g1*g3 - (5/3)*g2^2 - (2/3)*f1^2*g1
 *   T(c)   = T0 + K*c^2 + o(c^2),  T0 = 2*pi/sqrt(g1),  K = -pi*Q/(8*g1^(5/2))
 *
 * where c is the starting abscissa on the positive x-axis. The center test
 * quantity f1*g2 - 2*g1*f2 and the cubic return-map coefficient phi_ccc are
 * reported together with the variant f1*g2 - g1*f2, because return-map
 * integration tracks the latter.
 */

#include <cmath>
#include <numbers>

#include "periodlab/system.hpp"

namespace periodlab {

/// Discriminant Q; negative means the period increases near 0.
inline double theorem1_Q(const SystemSpec& s) {
  return s.gp0() * s.gppp0() - (5.0 / 3.0) * s.gpp0() * s.gpp0() - (2.0 / 3.0) * s.fp0() * s.fp0() * s.gp0();
}

struct LocalExpansion {
  double T0;
  double K;  // coefficient of c^2
  double Q;
};

/// T0 and K, with K built from the bracketed derivative combination
///   B = -f1^2/g1 - 10*g2^2/(4*g1^2) + 9*g3/(6*g1),  K = -pi*B/(12*sqrt(g1)).
inline LocalExpansion expansion_coefficient(const SystemSpec& s) {
  const double g1 = s.gp0(), g2 = s.gpp0(), g3 = s.gppp0(), f1 = s.fp0();
  const double sqrt_g1 = std::sqrt(g1);
  const double bracket = -f1 * f1 / g1 - 10.0 * g2 * g2 / (4.0 * g1 * g1) + 9.0 * g3 / (6.0 * g1);
  return {2.0 * std::numbers::pi / sqrt_g1, -std::numbers::pi / (12.0 * sqrt_g1) * bracket, theorem1_Q(s)};
}

/// K from the closed form -pi*Q/(8*g1^(5/2)).
inline double expansion_K_from_Q(const SystemSpec& s) {
  return -std::numbers::pi * theorem1_Q(s) / (8.0 * std::pow(s.gp0(), 2.5));
}

struct CenterCondition {
  double lemma2_value;  // f1*g2 - 2*g1*f2
  double variant_value;  // f1*g2 - g1*f2
  double phi_ccc;       // third c-derivative of the return-map displacement at 0
};

inline CenterCondition lemma2_center(const SystemSpec& s) {
  const double g1 = s.gp0(), g2 = s.gpp0(), f1 = s.fp0(), f2 = s.fpp0();
  const double root = std::sqrt(g1);
  const double phi_ccc =
      3.0 * std::numbers::pi / (2.0 * root) * ((g2 / (2.0 * g1)) * (f1 / (2.0 * root)) - f2 / (2.0 * root));
  return {f1 * g2 - 2.0 * g1 * f2, f1 * g2 - g1 * f2, phi_ccc};
}

/// C''(0) and C'''(0) of the Sabatini function.
inline double sabatini_C2_at0(const SystemSpec& s) { return s.gpp0() / s.gp0(); }
inline double sabatini_C3_at0(const SystemSpec& s) {
  return s.gppp0() / s.gp0() - 2.0 / (3.0 * s.gp0()) * s.fp0() * s.fp0();
}

}  // namespace periodlab
