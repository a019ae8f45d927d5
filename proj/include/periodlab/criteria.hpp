#pragma once

/**
 * @file criteria.hpp
 * @brief Monotonicity and isochronicity criteria and the combined classification.
 *
 * Grid criteria read signs of witness functions of g (and of f for the
 * Lienard ones) on points around 0. A value counts as signed when it clears
 * 1e-9*max(1, max|value|); values below that are treated as vanishing. They
 * occur near 0, where every witness decays like a power of x, and only decide
 * a verdict when all values vanish together.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "periodlab/conservative.hpp"
#include "periodlab/error.hpp"
#include "periodlab/expr.hpp"
#include "periodlab/jet.hpp"
#include "periodlab/lienard.hpp"
#include "periodlab/local.hpp"
#include "periodlab/system.hpp"

namespace periodlab {

inline constexpr double sign_threshold = 1e-9;

enum class CriterionName {
  opial,
  chow_wang_C1,
  chow_wang_C0,
  schaaf_C3,
  rothe_C4,
  chouikha_C5,
  prop2_chain,
  theorem1_Q,
  lemma2_center,
  corollary4,
  proposition3_convexity,
  sigma_sign,
};

enum class Conclusion { increasing, decreasing, isochronous_candidate, not_a_center, inconclusive };

constexpr std::string_view to_string(CriterionName n) noexcept {
  switch (n) {
    case CriterionName::opial: return "opial";
    case CriterionName::chow_wang_C1: return "chow_wang_C1";
    case CriterionName::chow_wang_C0: return "chow_wang_C0";
    case CriterionName::schaaf_C3: return "schaaf_C3";
    case CriterionName::rothe_C4: return "rothe_C4";
    case CriterionName::chouikha_C5: return "chouikha_C5";
    case CriterionName::prop2_chain: return "prop2_chain";
    case CriterionName::theorem1_Q: return "theorem1_Q";
    case CriterionName::lemma2_center: return "lemma2_center";
    case CriterionName::corollary4: return "corollary4";
    case CriterionName::proposition3_convexity: return "proposition3_convexity";
    case CriterionName::sigma_sign: return "sigma_sign";
  }
  return "?";
}

constexpr std::string_view to_string(Conclusion c) noexcept {
  switch (c) {
    case Conclusion::increasing: return "increasing";
    case Conclusion::decreasing: return "decreasing";
    case Conclusion::isochronous_candidate: return "isochronous_candidate";
    case Conclusion::not_a_center: return "not_a_center";
    case Conclusion::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Witness {
  std::optional<double> x;  // empty for values taken at the origin
  std::string label;
  double value;
};

struct CriterionVerdict {
  explicit CriterionVerdict(CriterionName n, std::vector<Witness> w = {}) : name(n), witnesses(std::move(w)) {}

  CriterionName name;
  std::vector<Witness> witnesses;
  bool applicable = true;
  std::string reason;
  Conclusion conclusion = Conclusion::inconclusive;
  bool defect = false;  // an implication the criterion relies on was violated
};

// =============================================================================
// Sign bookkeeping
// =============================================================================

enum class Sign { positive, negative, vanishing, mixed };

struct SignSummary {
  int positive = 0;
  int negative = 0;
  int vanishing = 0;
  double threshold = 0.0;

  /// positive/negative when every signed value agrees; vanishing when none
  /// is signed; mixed otherwise.
  [[nodiscard]] Sign sign() const noexcept {
    if (positive == 0 && negative == 0) return Sign::vanishing;
    if (negative == 0) return Sign::positive;
    if (positive == 0) return Sign::negative;
    return Sign::mixed;
  }
};

inline double threshold_for(const std::vector<double>& values) {
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return sign_threshold * scale;
}

inline bool clears(double v, double threshold) { return std::abs(v) > threshold; }

inline SignSummary summarize(const std::vector<double>& values) {
  SignSummary s;
  s.threshold = threshold_for(values);
  for (double v : values) {
    if (v > s.threshold) ++s.positive;
    else if (v < -s.threshold) ++s.negative;
    else ++s.vanishing;
  }
  return s;
}

inline bool is_zero_at0(double v) { return !clears(v, sign_threshold * std::max(1.0, std::abs(v))); }

// =============================================================================
// Grids
// =============================================================================

struct CriteriaGrid {
  std::vector<double> negative;  // ascending, all < 0
  std::vector<double> positive;  // ascending, all > 0

  [[nodiscard]] std::vector<double> all() const {
    std::vector<double> out(negative);
    out.insert(out.end(), positive.begin(), positive.end());
    return out;
  }
  [[nodiscard]] std::vector<double> with_origin() const {
    std::vector<double> out(negative);
    out.push_back(0.0);
    out.insert(out.end(), positive.begin(), positive.end());
    return out;
  }
};

inline constexpr int default_points_per_side = 20;
inline constexpr double default_grid_fraction = 0.8;
inline constexpr double excluded_ball = 1e-3;

/// Uniform points on [fraction*left, 0) and (0, fraction*right], skipping
/// |x| < 1e-3. With the origin this makes 2*per_side + 1 points.
inline CriteriaGrid make_grid(double left, double right, int per_side = default_points_per_side,
                              double fraction = default_grid_fraction) {
  CriteriaGrid grid;
  for (int k = per_side; k >= 1; --k) {
    const double x = fraction * left * k / per_side;
    if (std::abs(x) >= excluded_ball) grid.negative.push_back(x);
  }
  for (int k = 1; k <= per_side; ++k) {
    const double x = fraction * right * k / per_side;
    if (std::abs(x) >= excluded_ball) grid.positive.push_back(x);
  }
  return grid;
}

inline CriteriaGrid default_grid(const Well& well) { return make_grid(well.range().a_min, well.range().b_max); }

// =============================================================================
// Pointwise data of g
// =============================================================================

namespace detail {

struct GPoint {
  double x, g, g1, g2, g3, G;
};

inline std::vector<GPoint> sample_g(const Potential& pot, const std::vector<double>& grid) {
  std::vector<GPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const Jet j = eval_jet(pot.g(), x, 3);
    out.push_back({x, j.derivative(0), j.derivative(1), j.derivative(2), j.derivative(3), pot(x)});
  }
  return out;
}

inline std::vector<Witness> witnesses_from(const std::vector<double>& xs, const std::vector<double>& values,
                                           std::string_view label) {
  std::vector<Witness> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({xs[i], std::string(label), values[i]});
  return out;
}

inline std::vector<double> xs_of(const std::vector<GPoint>& pts) {
  std::vector<double> xs;
  for (const auto& p : pts) xs.push_back(p.x);
  return xs;
}

// Multiply by sign(x) so that side-dependent patterns become one-signed.
inline std::vector<double> oriented(const std::vector<double>& xs, const std::vector<double>& values) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = xs[i] < 0.0 ? -values[i] : values[i];
  return out;
}

inline Conclusion from_sign(Sign s, Conclusion when_positive, Conclusion when_negative) {
  if (s == Sign::positive) return when_positive;
  if (s == Sign::negative) return when_negative;
  return Conclusion::inconclusive;
}

inline std::string vanishing_note(const SignSummary& s) {
  if (s.vanishing == 0) return "";
  return "; " + std::to_string(s.vanishing) + " value(s) below threshold";
}

inline std::string g2_note(const Potential& pot) {
  return "g''(0) = " + format_number(eval_jet(pot.g(), 0.0, 2).derivative(2));
}

}  // namespace detail

// =============================================================================
// Criteria on g alone
// =============================================================================

/// Witness (g/x)'. Positive for x < 0 and negative for x > 0 means increasing.
inline CriterionVerdict opial_sign(const Expr& g, const std::vector<double>& grid) {
  const Potential pot(g);
  const auto pts = detail::sample_g(pot, grid);
  const auto xs = detail::xs_of(pts);
  std::vector<double> w;
  for (const auto& p : pts) w.push_back((p.x * p.g1 - p.g) / (p.x * p.x));
  CriterionVerdict v(CriterionName::opial, detail::witnesses_from(xs, w, "(g/x)'"));
  const SignSummary s = summarize(detail::oriented(xs, w));
  v.conclusion = detail::from_sign(s.sign(), Conclusion::decreasing, Conclusion::increasing);
  v.reason = detail::g2_note(pot);
  if (s.sign() == Sign::vanishing) v.reason += "; witness vanishes (isochronous candidate)";
  v.reason += detail::vanishing_note(s);
  return v;
}

inline std::pair<CriterionVerdict, CriterionVerdict> chow_wang(const Expr& g, const std::vector<double>& grid) {
  const Potential pot(g);
  const Jet at0 = eval_jet(g, 0.0, 2);
  const double g1_0 = at0.derivative(1), g2_0 = at0.derivative(2);
  const auto pts = detail::sample_g(pot, grid);
  const auto xs = detail::xs_of(pts);

  std::vector<double> delta, h0, g2s;
  for (const auto& p : pts) {
    delta.push_back(p.x * (g2_0 * p.g1 - g1_0 * p.g2));
    h0.push_back(p.g * p.g + g2_0 / (3.0 * g1_0 * g1_0) * p.g * p.g * p.g - 2.0 * p.G * p.g1);
    g2s.push_back(p.g2);
  }

  CriterionVerdict c1(CriterionName::chow_wang_C1, detail::witnesses_from(xs, delta, "Delta"));
  const SignSummary convex = summarize(g2s);
  if (convex.negative > 0 || convex.vanishing > 0) {
    c1.applicable = false;
    c1.reason = "g'' is not positive on the grid";
  } else {
    const SignSummary s = summarize(delta);
    c1.conclusion = detail::from_sign(s.sign(), Conclusion::increasing, Conclusion::decreasing);
    c1.reason = "g'' > 0 on the grid" + detail::vanishing_note(s);
  }

  CriterionVerdict c0(CriterionName::chow_wang_C0, detail::witnesses_from(xs, h0, "H0"));
  const SignSummary s0 = summarize(h0);
  c0.conclusion = detail::from_sign(s0.sign(), Conclusion::increasing, Conclusion::decreasing);
  c0.reason = s0.sign() == Sign::vanishing ? "H0 vanishes (isochronous candidate)" : "sign of H0";
  c0.reason += detail::vanishing_note(s0);
  return {c1, c0};
}

/// Witness H3 = 5g''^2 - 3g'g'''. Positive means increasing.
inline CriterionVerdict schaaf(const Expr& g, const std::vector<double>& grid) {
  const Potential pot(g);
  const auto pts = detail::sample_g(pot, grid);
  const auto xs = detail::xs_of(pts);
  std::vector<double> h3, g1s;
  for (const auto& p : pts) {
    h3.push_back(5.0 * p.g2 * p.g2 - 3.0 * p.g1 * p.g3);
    g1s.push_back(p.g1);
  }
  CriterionVerdict v(CriterionName::schaaf_C3, detail::witnesses_from(xs, h3, "H3"));
  // Side condition: where g' = 0, g*g'' < 0.
  const double t1 = threshold_for(g1s);
  for (const auto& p : pts) {
    if (!clears(p.g1, t1) && !(p.g * p.g2 < 0.0)) {
      v.applicable = false;
      v.reason = "g' vanishes at x = " + detail::format_number(p.x) + " without g*g'' < 0";
      return v;
    }
  }
  const SignSummary s = summarize(h3);
  v.conclusion = detail::from_sign(s.sign(), Conclusion::increasing, Conclusion::decreasing);
  v.reason = s.sign() == Sign::vanishing ? "H3 vanishes (isochronous candidate)" : "sign of H3";
  v.reason += detail::vanishing_note(s);
  return v;
}

/// Witness H4 = x[3g''(0)g'^2 - g''(0)g g'' - 3g'(0)^2 g'']. Nonnegative means increasing.
inline CriterionVerdict rothe(const Expr& g, const std::vector<double>& grid) {
  const Potential pot(g);
  const Jet at0 = eval_jet(g, 0.0, 2);
  const double g1_0 = at0.derivative(1), g2_0 = at0.derivative(2);
  const auto pts = detail::sample_g(pot, grid);
  const auto xs = detail::xs_of(pts);
  std::vector<double> h4;
  for (const auto& p : pts) {
    h4.push_back(p.x * (3.0 * g2_0 * p.g1 * p.g1 - g2_0 * p.g * p.g2 - 3.0 * g1_0 * g1_0 * p.g2));
  }
  CriterionVerdict v(CriterionName::rothe_C4, detail::witnesses_from(xs, h4, "H4"));
  const SignSummary s = summarize(h4);
  v.conclusion = detail::from_sign(s.sign(), Conclusion::increasing, Conclusion::decreasing);
  v.reason = s.sign() == Sign::vanishing ? "H4 vanishes (isochronous candidate)" : "sign of H4";
  v.reason += detail::vanishing_note(s);
  return v;
}

/// Leftmost point of the interval (x0, 0) on which g' has no zero, scanning
/// out to `edge` (< 0). Returns edge when g' keeps its sign.
inline double derivative_zero_left(const Expr& g, double edge) {
  const int steps = 1000;
  double prev = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double x = edge * i / steps;
    if (!(eval_jet(g, x, 1).derivative(1) > 0.0)) {
      double lo = prev, hi = x;  // g'(lo) > 0 >= g'(hi)
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval_jet(g, mid, 1).derivative(1) > 0.0) lo = mid; else hi = mid;
      }
      return hi;
    }
    prev = x;
  }
  return edge;
}

/// Two nonvanishing conditions: part (i) g''(0)*(3g'^2 - g g'' - 3g'(0)^2 g'')
/// on grid_neg and part (ii) g'g''(0)/(g''g'(0)^2) - 2G/g^2 on grid_pos.
/// When both hold, H0 is one-signed; the verdict itself never concludes.
inline CriterionVerdict chouikha_c5(const Expr& g, const std::vector<double>& grid_neg,
                                    const std::vector<double>& grid_pos) {
  const Potential pot(g);
  const Jet at0 = eval_jet(g, 0.0, 2);
  const double g1_0 = at0.derivative(1), g2_0 = at0.derivative(2);
  const auto neg = detail::sample_g(pot, grid_neg);
  const auto pos = detail::sample_g(pot, grid_pos);
  CriterionVerdict v(CriterionName::chouikha_C5);
  std::vector<double> part1, part2;
  for (const auto& p : neg) {
    part1.push_back(g2_0 * (3.0 * p.g1 * p.g1 - p.g * p.g2 - 3.0 * g1_0 * g1_0 * p.g2));
    v.witnesses.push_back({p.x, "part_i", part1.back()});
  }
  for (const auto& p : pos) {
    if (p.g2 == 0.0) {
      throw Error(Errc::undefined_witness, "g''(" + detail::format_number(p.x) + ") = 0 leaves part (ii) undefined");
    }
    part2.push_back(p.g1 * g2_0 / (p.g2 * g1_0 * g1_0) - 2.0 * p.G / (p.g * p.g));
    v.witnesses.push_back({p.x, "part_ii", part2.back()});
  }
  const SignSummary s1 = summarize(part1), s2 = summarize(part2);
  const bool holds = s1.vanishing == 0 && s2.vanishing == 0;
  v.applicable = holds;
  v.reason = holds ? "condition holds: H0 is one-signed" : "condition fails: a witness vanishes";
  v.reason += "; part (i) read as g''(0) times the bracket of H4";
  return v;
}

/// x g'' < 0 => g^2 - 2Gg' > 0 => x(g/x)' < 0, each implying an increasing
/// period (mirrored for decreasing). Needs g''(0) = 0.
inline CriterionVerdict prop2_chain(const Expr& g, const std::vector<double>& grid) {
  const Potential pot(g);
  const double g2_0 = eval_jet(g, 0.0, 2).derivative(2);
  const auto pts = detail::sample_g(pot, grid);
  const auto xs = detail::xs_of(pts);
  std::vector<double> w1, w2, w3;
  CriterionVerdict v(CriterionName::prop2_chain);
  for (const auto& p : pts) {
    w1.push_back(p.x * p.g2);
    w2.push_back(p.g * p.g - 2.0 * p.G * p.g1);
    w3.push_back((p.x * p.g1 - p.g) / p.x);
    v.witnesses.push_back({p.x, "x*g''", w1.back()});
    v.witnesses.push_back({p.x, "g^2-2Gg'", w2.back()});
    v.witnesses.push_back({p.x, "x(g/x)'", w3.back()});
  }
  const Sign s1 = summarize(w1).sign(), s2 = summarize(w2).sign(), s3 = summarize(w3).sign();
  if (!is_zero_at0(g2_0)) {
    v.applicable = false;
    v.reason = "g''(0) = " + detail::format_number(g2_0) + " != 0; x*g'' " +
               (s1 == Sign::mixed ? "changes sign" : "does not change sign");
    return v;
  }
  // Each antecedent must carry its consequent along the whole grid.
  std::string broken;
  if (s1 == Sign::negative && s2 != Sign::positive) broken = "x*g'' < 0 without g^2-2Gg' > 0";
  if (s1 == Sign::positive && s2 != Sign::negative) broken = "x*g'' > 0 without g^2-2Gg' < 0";
  if (s2 == Sign::positive && s3 != Sign::negative) broken = "g^2-2Gg' > 0 without x(g/x)' < 0";
  if (s2 == Sign::negative && s3 != Sign::positive) broken = "g^2-2Gg' < 0 without x(g/x)' > 0";
  if (!broken.empty()) {
    v.defect = true;
    v.reason = "implication violated: " + broken;
    return v;
  }
  if (s1 == Sign::negative || s2 == Sign::positive) {
    v.conclusion = Conclusion::increasing;
    v.reason = s1 == Sign::negative ? "x*g'' < 0 and its consequents hold" : "g^2-2Gg' > 0 and x(g/x)' < 0 hold";
  } else if (s1 == Sign::positive || s2 == Sign::negative) {
    v.conclusion = Conclusion::decreasing;
    v.reason = s1 == Sign::positive ? "x*g'' > 0 and its consequents hold" : "g^2-2Gg' < 0 and x(g/x)' > 0 hold";
  } else {
    v.reason = "no link of the chain is one-signed";
  }
  return v;
}

// =============================================================================
// Local criteria at the origin
// =============================================================================

inline CriterionVerdict theorem1_verdict(const SystemSpec& sys) {
  const double q = theorem1_Q(sys);
  CriterionVerdict v(CriterionName::theorem1_Q, {Witness{std::nullopt, "Q", q}});
  if (is_zero_at0(q)) {
    v.reason = "Q vanishes; the quadratic term of T(c) is zero";
  } else {
    v.conclusion = q < 0.0 ? Conclusion::increasing : Conclusion::decreasing;
    v.reason = q < 0.0 ? "Q < 0" : "Q > 0";
  }
  return v;
}

inline CriterionVerdict lemma2_verdict(const SystemSpec& sys) {
  const CenterCondition cc = lemma2_center(sys);
  CriterionVerdict v(CriterionName::lemma2_center,
                     {Witness{std::nullopt, "f'(0)g''(0)-2g'(0)f''(0)", cc.lemma2_value}});
  v.reason = "phi_ccc = " + detail::format_number(cc.phi_ccc) +
             "; f'(0)g''(0)-g'(0)f''(0) = " + detail::format_number(cc.variant_value);
  if (!is_zero_at0(cc.lemma2_value)) {
    v.conclusion = Conclusion::not_a_center;
  } else {
    v.reason = "necessary center condition holds; " + v.reason;
  }
  return v;
}

struct Corollary4Targets {
  double radicand;  // 3g'''(0) - 5g''(0)^2/g'(0)
  std::pair<double, double> fp0;   // (+, -)
  std::pair<double, double> fpp0;  // paired with fp0 by sign
};

inline Corollary4Targets corollary4_targets(const Expr& g) {
  const Jet j = eval_jet(g, 0.0, 3);
  const double g1 = j.derivative(1), g2 = j.derivative(2), g3 = j.derivative(3);
  if (is_zero_at0(g2)) throw Error(Errc::inapplicable, "g''(0) = 0");
  const double r = 3.0 * g3 - 5.0 * g2 * g2 / g1;
  if (r < 0.0) {
    throw Error(Errc::no_real_target, "3g'''(0) - 5g''(0)^2/g'(0) = " + detail::format_number(r) + " < 0");
  }
  const double root = std::sqrt(r);
  const double slope = g2 / (2.0 * g1) * root;
  return {r, {root, -root}, {slope, -slope}};
}

/// Necessary conditions for an isochronous perturbation of g; never concludes.
inline CriterionVerdict corollary4_verdict(const SystemSpec& sys) {
  CriterionVerdict v(CriterionName::corollary4);
  try {
    const Corollary4Targets t = corollary4_targets(sys.g());
    v.witnesses.push_back({std::nullopt, "radicand", t.radicand});
    const double miss_plus = std::hypot(sys.fp0() - t.fp0.first, sys.fpp0() - t.fpp0.first);
    const double miss_minus = std::hypot(sys.fp0() - t.fp0.second, sys.fpp0() - t.fpp0.second);
    const double miss = std::min(miss_plus, miss_minus);
    v.witnesses.push_back({std::nullopt, "target_distance", miss});
    v.reason = "targets f'(0) = +-" + detail::format_number(t.fp0.first) + ", f''(0) = +-" +
               detail::format_number(t.fpp0.first) +
               (is_zero_at0(miss) ? "; the system meets them" : "; the system misses them");
  } catch (const Error& e) {
    if (e.code() != Errc::inapplicable && e.code() != Errc::no_real_target) throw;
    v.applicable = false;
    v.reason = e.what();
  }
  return v;
}

// =============================================================================
// Criteria through the Sabatini function
// =============================================================================

/// C''(x) from jets of f and g at x (x != 0).
inline double sabatini_C_second_derivative(const SystemSpec& sys, double x) {
  const Jet fj = eval_jet(sys.f(), x, 1);
  const Jet gj = eval_jet(sys.g(), x, 2);
  const Jet m(x, {sys.moment(x), x * fj[0], 0.5 * (fj[0] + x * fj[1])});
  const Jet c = (1.0 / sys.gp0()) * gj - (1.0 / sys.gp0()) * checked_divide(m * m, int_power(seed(x, 2), 3));
  return c.derivative(2);
}

namespace detail {

inline bool flat_at_origin(const SystemSpec& sys, std::string& reason) {
  if (!is_zero_at0(sys.gpp0()) || !is_zero_at0(sys.fpp0())) {
    reason = "needs g''(0) = f''(0) = 0 (g''(0) = " + format_number(sys.gpp0()) +
             ", f''(0) = " + format_number(sys.fpp0()) + ")";
    return false;
  }
  return true;
}

}  // namespace detail

/// Witness x*C''. Negative means increasing; C'' vanishing means isochronous candidate.
inline CriterionVerdict proposition3_convexity(const SystemSpec& sys, const std::vector<double>& grid) {
  std::vector<double> w;
  for (double x : grid) w.push_back(x * sabatini_C_second_derivative(sys, x));
  CriterionVerdict v(CriterionName::proposition3_convexity, detail::witnesses_from(grid, w, "x*C''"));
  if (!detail::flat_at_origin(sys, v.reason)) {
    v.applicable = false;
    return v;
  }
  const SignSummary s = summarize(w);
  if (s.sign() == Sign::vanishing) {
    v.conclusion = Conclusion::isochronous_candidate;
    v.reason = "C'' vanishes on the grid";
  } else {
    v.conclusion = detail::from_sign(s.sign(), Conclusion::decreasing, Conclusion::increasing);
    v.reason = "sign of x*C''" + detail::vanishing_note(s);
  }
  return v;
}

/// sigma <= 0 means decreasing, >= 0 increasing, identically 0 isochronous candidate.
inline CriterionVerdict sigma_sign(const SystemSpec& sys, const std::vector<double>& grid, double half_width = 1.0) {
  std::vector<double> w;
  for (double x : grid) w.push_back(sigma(sys, x));
  CriterionVerdict v(CriterionName::sigma_sign, detail::witnesses_from(grid, w, "sigma"));
  if (!detail::flat_at_origin(sys, v.reason)) {
    v.applicable = false;
    return v;
  }
  const SabatiniFunction C(sys, half_width);
  for (double x : grid) {
    if (!(x * C(x) > 0.0)) {
      v.applicable = false;
      v.reason = "x*C(x) <= 0 at x = " + detail::format_number(x);
      return v;
    }
  }
  const SignSummary s = summarize(w);
  if (s.sign() == Sign::vanishing) {
    v.conclusion = Conclusion::isochronous_candidate;
    v.reason = "sigma vanishes on the grid";
  } else {
    v.conclusion = detail::from_sign(s.sign(), Conclusion::increasing, Conclusion::decreasing);
    v.reason = "sign of sigma" + detail::vanishing_note(s);
  }
  return v;
}

// =============================================================================
// Classification
// =============================================================================

enum class NumericVerdict { increasing, decreasing, constant, mixed, not_a_center };

constexpr std::string_view to_string(NumericVerdict v) noexcept {
  switch (v) {
    case NumericVerdict::increasing: return "increasing";
    case NumericVerdict::decreasing: return "decreasing";
    case NumericVerdict::constant: return "constant";
    case NumericVerdict::mixed: return "mixed";
    case NumericVerdict::not_a_center: return "not_a_center";
  }
  return "?";
}

inline NumericVerdict to_numeric(CurveVerdict v) noexcept {
  switch (v) {
    case CurveVerdict::increasing: return NumericVerdict::increasing;
    case CurveVerdict::decreasing: return NumericVerdict::decreasing;
    case CurveVerdict::constant: return NumericVerdict::constant;
    case CurveVerdict::mixed: return NumericVerdict::mixed;
  }
  return NumericVerdict::mixed;
}

inline bool matches(Conclusion c, NumericVerdict n) noexcept {
  switch (c) {
    case Conclusion::increasing: return n == NumericVerdict::increasing;
    case Conclusion::decreasing: return n == NumericVerdict::decreasing;
    case Conclusion::isochronous_candidate: return n == NumericVerdict::constant;
    case Conclusion::not_a_center: return n == NumericVerdict::not_a_center;
    case Conclusion::inconclusive: return true;
  }
  return false;
}

inline Conclusion final_conclusion(NumericVerdict n) noexcept {
  switch (n) {
    case NumericVerdict::increasing: return Conclusion::increasing;
    case NumericVerdict::decreasing: return Conclusion::decreasing;
    case NumericVerdict::constant: return Conclusion::isochronous_candidate;
    case NumericVerdict::not_a_center: return Conclusion::not_a_center;
    case NumericVerdict::mixed: return Conclusion::inconclusive;
  }
  return Conclusion::inconclusive;
}

struct ClassifyOptions {
  double domain_cap = 0.4;  // half-width explored around 0
  int samples = 8;          // numeric curve samples
  double tol = default_integrator_tolerance;
  double quadrature_tol = default_quadrature_tolerance;
};

struct ClassificationReport {
  SystemSpec system;
  std::vector<CriterionVerdict> verdicts;
  LocalExpansion expansion;
  CenterCondition center;
  PeriodCurve curve;
  NumericVerdict numeric_verdict;
  Conclusion conclusion;
  bool agreement;
  std::optional<bool> corollary3_decreasing;  // set when the cross-check ran
};

namespace detail {

// Conservative criteria speak about x'' + g = 0; on a Lienard system only an
// increasing conclusion carries over.
inline void transfer_to_lienard(CriterionVerdict& v) {
  if (v.conclusion == Conclusion::decreasing) {
    v.conclusion = Conclusion::inconclusive;
    v.reason += "; decreasing for x'' + g = 0 does not carry over to the damped system";
  }
}

struct NumericCurve {
  PeriodCurve curve;
  NumericVerdict verdict;
};

inline NumericCurve numeric_curve(const SystemSpec& sys, const ClassifyOptions& opt) {
  NumericCurve out;
  if (sys.is_conservative()) {
    const Well well(sys.g(), opt.domain_cap);
    const double c_max = well.range().c_max;
    out.curve = period_curve_conservative(well, 0.01 * c_max, 0.5 * c_max, opt.samples, opt.quadrature_tol);
    out.verdict = to_numeric(monotonicity_verdict(out.curve));
    return out;
  }
  const LienardDomain domain = lienard_domain(sys, opt.domain_cap);
  const double hi = domain.amplitude_cap;
  LienardCurveOptions lopt;
  lopt.tol = opt.tol;
  lopt.domain_cap = opt.domain_cap;
  lopt.check_center_condition = false;
  try {
    out.curve = period_curve_lienard(sys, 0.1 * hi, hi, opt.samples, lopt);
    out.verdict = to_numeric(monotonicity_verdict(out.curve));
  } catch (const NotACenterError&) {
    // Keep the raw samples so the displacement is visible.
    const auto amplitudes = geometric_grid(0.1 * hi, hi, opt.samples);
    const auto results = parallel_map(amplitudes.size(), [&](std::size_t i) {
      return return_map(sys, amplitudes[i], domain, opt.tol);
    });
    out.curve = PeriodCurve{{}, Parameterization::amplitude, CurveMethod::return_map, closed_orbit_guard * opt.tol};
    for (const auto& r : results) out.curve.samples.push_back({r.c, r.T, r.phi});
    out.verdict = NumericVerdict::not_a_center;
  }
  return out;
}

}  // namespace detail

inline ClassificationReport classify(const SystemSpec& sys, const ClassifyOptions& opt = {}) {
  ClassificationReport rep{sys, {}, expansion_coefficient(sys), lemma2_center(sys), {}, NumericVerdict::mixed,
                           Conclusion::inconclusive, true, std::nullopt};
  auto pending = std::async(std::launch::async, [&] { return detail::numeric_curve(sys, opt); });

  CriterionVerdict lemma2 = lemma2_verdict(sys);
  if (lemma2.conclusion == Conclusion::not_a_center) {
    rep.verdicts.push_back(std::move(lemma2));
  } else {
    const Well well(sys.g(), opt.domain_cap);
    const CriteriaGrid grid = default_grid(well);
    const auto points = grid.all();
    const Expr& g = sys.g();

    std::vector<CriterionVerdict> on_g;
    on_g.push_back(opial_sign(g, points));
    auto [c1, c0] = chow_wang(g, points);
    on_g.push_back(std::move(c1));
    on_g.push_back(std::move(c0));
    on_g.push_back(schaaf(g, grid.with_origin()));
    on_g.push_back(rothe(g, points));
    {
      const double left = derivative_zero_left(g, well.range().left_edge);
      std::vector<double> neg;
      for (double x : grid.negative) {
        if (x > left) neg.push_back(x);
      }
      try {
        on_g.push_back(chouikha_c5(g, neg, grid.positive));
      } catch (const Error& e) {
        if (e.code() != Errc::undefined_witness) throw;
        CriterionVerdict v(CriterionName::chouikha_C5);
        v.applicable = false;
        v.reason = e.what();
        on_g.push_back(std::move(v));
      }
    }
    on_g.push_back(prop2_chain(g, points));
    if (!sys.is_conservative()) {
      for (auto& v : on_g) detail::transfer_to_lienard(v);
    }
    for (auto& v : on_g) rep.verdicts.push_back(std::move(v));
    rep.verdicts.push_back(theorem1_verdict(sys));
    rep.verdicts.push_back(std::move(lemma2));
    rep.verdicts.push_back(corollary4_verdict(sys));
    rep.verdicts.push_back(proposition3_convexity(sys, points));
    rep.verdicts.push_back(sigma_sign(sys, points, opt.domain_cap));
  }

  detail::NumericCurve numeric = pending.get();
  rep.curve = std::move(numeric.curve);
  rep.numeric_verdict = numeric.verdict;
  rep.conclusion = final_conclusion(numeric.verdict);
  for (const auto& v : rep.verdicts) {
    if (v.conclusion != Conclusion::inconclusive && !matches(v.conclusion, rep.numeric_verdict)) {
      rep.agreement = false;
    }
  }
  if (!is_zero_at0(sys.gpp0()) && !sys.is_conservative() && rep.conclusion == Conclusion::isochronous_candidate) {
    const Well well(sys.g(), opt.domain_cap);
    const double c_max = well.range().c_max;
    const PeriodCurve cons =
        period_curve_conservative(well, 0.01 * c_max, 0.5 * c_max, opt.samples, opt.quadrature_tol);
    rep.corollary3_decreasing = monotonicity_verdict(cons) == CurveVerdict::decreasing;
  }
  return rep;
}

}  // namespace periodlab
