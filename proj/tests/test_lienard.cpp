#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "periodlab/conservative.hpp"
#include "periodlab/lienard.hpp"
#include "support.hpp"

using namespace periodlab;
using periodlab::testing::polynomial_source;
using periodlab::testing::random_origin_polynomial;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::domain_error;
}

/// Odd polynomial pair with a softening or hardening cubic term.
SystemSpec random_odd_system(std::mt19937_64& rng, double f_sign = 1.0) {
  std::vector<double> f(4, 0.0), g(4, 0.0);
  f[1] = f_sign * periodlab::testing::dyadic(rng, 1.0);
  f[3] = f_sign * periodlab::testing::dyadic(rng, 1.0);
  g[1] = 1.0 + std::abs(periodlab::testing::dyadic(rng, 1.0));
  g[3] = periodlab::testing::dyadic(rng, 1.0);
  return validate_system(polynomial_source(f), polynomial_source(g));
}

}  // namespace

TEST(VectorField, Examples) {
  const SystemSpec h = validate_system("0", "x");
  EXPECT_EQ(vector_field(h, {1, 0, 0}), (std::pair<double, double>{-0.0, 1.0}));
  EXPECT_EQ(vector_field(h, {0, 1, 0}), (std::pair<double, double>{-1.0, 0.0}));
  const SystemSpec d = validate_system("x", "x");
  EXPECT_EQ(vector_field(d, {1, 1, 0}), (std::pair<double, double>{-1.0, 0.0}));
}

TEST(VectorField, RescalesByStiffness) {
  const SystemSpec s = validate_system("0", "4*x");
  const auto [dx, dy] = vector_field(s, {1, 1, 0});
  EXPECT_EQ(dx, -2.0);
  EXPECT_EQ(dy, 2.0);
}

TEST(IntegrateStep, HarmonicFullTurn) {
  const SystemSpec h = validate_system("0", "x");
  PhaseState s{1.0, 0.0, 0.0};
  double step = 1e-3;
  while (two_pi - s.t > 1e-14) {
    const double try_h = std::min(step, two_pi - s.t);
    const StepOutcome o = integrate_step(h, s, try_h, 1e-10);
    s = o.state;
    step = o.h_next;
  }
  EXPECT_NEAR(s.x, 1.0, 1e-8);
  EXPECT_NEAR(s.y, 0.0, 1e-8);
}

TEST(IntegrateStep, Underflow) {
  const SystemSpec h = validate_system("x", "x + x^2");
  EXPECT_EQ(code_of([&] { integrate_step(h, {0.1, 0.0, 0.0}, 1e-20, 1e-10); }), Errc::step_underflow);
}

TEST(ReturnMap, Harmonic) {
  const auto r = return_map(validate_system("0", "x"), 0.5);
  EXPECT_NEAR(r.T, two_pi, 1e-8);
  EXPECT_NEAR(r.phi, 0.0, 1e-8);
  EXPECT_GT(r.steps, 0);
}

TEST(ReturnMap, SabatiniIsochrone) {
  const auto r = return_map(validate_system("x", "x + x^3/9"), 0.5);
  EXPECT_NEAR(r.T, two_pi, 1e-6);
  EXPECT_NEAR(r.phi, 0.0, 1e-6);
}

TEST(ReturnMap, NonCenterDisplacement) {
  const auto r = return_map(validate_system("x^2", "x + x^2"), 0.1);
  const double predicted = -0.25 * std::numbers::pi * 1e-3;
  EXPECT_NEAR(r.phi, predicted, 0.1 * std::abs(predicted));
}

TEST(ReturnMap, AmplitudeRange) {
  const SystemSpec s = validate_system("0", "x + x^2");
  const LienardDomain d = lienard_domain(s);
  EXPECT_GT(d.amplitude_cap, 0.0);
  EXPECT_LE(d.amplitude_cap, 0.5);
  EXPECT_EQ(d.bounding_box, 10.0 * d.amplitude_cap);
  EXPECT_EQ(code_of([&] { return_map(s, 0.0); }), Errc::amplitude_out_of_range);
  EXPECT_EQ(code_of([&] { return_map(s, 2.0 * d.amplitude_cap); }), Errc::amplitude_out_of_range);
}

TEST(ReturnMap, HardeningReturnsQuickly) {
  // Period well below 2*pi at large amplitude.
  const SystemSpec s = validate_system("0", "x + x^3");
  const double b = 3.0;
  const double T = period_conservative(s.g(), potential(s.g(), b));
  EXPECT_LT(T, 0.5 * two_pi);
  EXPECT_NEAR(return_map(s, b).T, T, 1e-6);
}

TEST(ReturnMap, ReversedDampingSpiralsOut) {
  const auto in = return_map(validate_system("x^2", "x + x^2"), 0.05);
  const auto out = return_map(validate_system("-x^2", "x + x^2"), 0.05);
  EXPECT_LT(in.phi, 0.0);
  EXPECT_GT(out.phi, 0.0);
  EXPECT_NEAR(out.phi, -in.phi, 0.05 * std::abs(in.phi));
}

TEST(PeriodCurveLienard, DampedLinearFollowsExpansion) {
  const PeriodCurve c = period_curve_lienard(validate_system("x", "x"), 0.05, 0.4, 6);
  ASSERT_EQ(c.samples.size(), 6u);
  EXPECT_EQ(c.parameterization, Parameterization::amplitude);
  EXPECT_EQ(c.method, CurveMethod::return_map);
  EXPECT_EQ(monotonicity_verdict(c), CurveVerdict::increasing);
  for (const auto& s : c.samples) {
    const double expected = two_pi + std::numbers::pi / 12.0 * s.param * s.param;
    EXPECT_NEAR(s.period, expected, 0.05 * std::numbers::pi / 12.0 * s.param * s.param + 1e-8) << s.param;
    ASSERT_TRUE(s.displacement.has_value());
    EXPECT_LE(std::abs(*s.displacement), 1e-8);
  }
}

TEST(PeriodCurveLienard, HarmonicConstant) {
  const PeriodCurve c = period_curve_lienard(validate_system("0", "x"), 0.01, 3.0, 5);
  for (const auto& s : c.samples) EXPECT_NEAR(s.period, two_pi, 1e-8);
  EXPECT_EQ(monotonicity_verdict(c), CurveVerdict::constant);
}

TEST(PeriodCurveLienard, NonCenterRaises) {
  const SystemSpec s = validate_system("x^2", "x + x^2");
  EXPECT_EQ(code_of([&] { period_curve_lienard(s, 0.05, 0.2, 4); }), Errc::not_a_center);
  LienardCurveOptions opt;
  opt.check_center_condition = false;
  try {
    period_curve_lienard(s, 0.05, 0.2, 4, opt);
    FAIL();
  } catch (const NotACenterError& e) {
    EXPECT_LT(e.displacement(), 0.0);
  }
}

TEST(SabatiniC, Examples) {
  EXPECT_NEAR(sabatini_C(validate_system("x", "x + x^3/9"), 0.3), 0.3, 1e-15);
  EXPECT_NEAR(sabatini_C(validate_system("x", "x"), 0.3), 0.297, 1e-15);
  const SystemSpec c = validate_system("0", "2*x + sin(x)^2");
  for (double x : {-0.7, 0.004, 0.3}) EXPECT_NEAR(sabatini_C(c, x), (2.0 * x + std::sin(x) * std::sin(x)) / 2.0, 1e-14);
}

TEST(Sigma, Examples) {
  const SystemSpec iso = validate_system("x", "x + x^3/9");
  for (double x : {-0.5, 0.1, 0.4}) EXPECT_NEAR(sigma(iso, x), 0.0, 1e-15);
  EXPECT_EQ(sigma(validate_system("0", "x"), 0.37), 0.0);
  EXPECT_NEAR(sigma(validate_system("0", "x + x^3"), 0.5), -0.03125, 1e-15);
}

TEST(IsochronicityResidual, Examples) {
  std::vector<double> grid;
  for (int i = -50; i <= 50; ++i) grid.push_back(0.01 * i);
  EXPECT_LE(isochronicity_residual(validate_system("x", "x + x^3/9"), grid), 1e-12);
  EXPECT_LE(isochronicity_residual(validate_system("2*x", "x + 4*x^3/9"), grid), 1e-12);
  EXPECT_EQ(isochronicity_residual(validate_system("0", "x"), grid), 0.0);
  EXPECT_NEAR(isochronicity_residual(validate_system("0", "x + x^2"), {-0.25, 0.25}), 0.0625, 1e-15);
}

TEST(Rayleigh, Reductions) {
  const RayleighReduction a = rayleigh_to_lienard(parse("x^2"));
  EXPECT_EQ(a.system.f(), parse("2*x"));
  EXPECT_EQ(a.system.g(), parse("x"));
  EXPECT_TRUE(a.monotone_increasing_applies);
  const RayleighReduction b = rayleigh_to_lienard(parse("x^3"));
  EXPECT_EQ(b.system.f(), parse("3*x^2"));
  EXPECT_FALSE(b.monotone_increasing_applies);
  EXPECT_FALSE(b.reason.empty());
  const RayleighReduction c = rayleigh_to_lienard(parse("x^2 + x^4"));
  EXPECT_EQ(c.system.f(), parse("2*x + 4*x^3"));
  EXPECT_TRUE(c.monotone_increasing_applies);
  const RayleighReduction d = rayleigh_to_lienard(parse("1 - cos(x)"));
  EXPECT_NEAR(eval(d.system.f(), 0.4), std::sin(0.4), 1e-15);
  EXPECT_TRUE(d.monotone_increasing_applies);
  EXPECT_EQ(code_of([] { rayleigh_to_lienard(parse("1 + x^2")); }), Errc::not_at_origin);
}

TEST(Differentiate, SymbolicRules) {
  EXPECT_EQ(differentiate(parse("sin(x)^2")).to_string(), "2*sin(x)*cos(x)");
  for (const char* e : {"exp(x)*cos(x)", "atan(x)/(1 + x^2)", "sqrt(1 + x^2)", "x^5 - 3*x", "-(x*sin(x))"}) {
    const Expr d = differentiate(parse(e));
    for (double x : {-0.6, 0.2, 0.9}) EXPECT_NEAR(eval(d, x), derivatives_at(parse(e), x, 1)[1], 1e-13) << e;
  }
}

TEST(LienardInvariants, ConservativeCrossCheck) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    auto c = random_origin_polynomial(rng, 4, 1.0, 0.5, 2.0);
    const SystemSpec sys = validate_system("0", polynomial_source(c));
    const double b = 0.5 * lienard_domain(sys).amplitude_cap;
    const double T = period_conservative(sys.g(), potential(sys.g(), b));
    EXPECT_NEAR(return_map(sys, b).T, T, 1e-6) << polynomial_source(c);
  }
}

TEST(LienardInvariants, SymmetricCentersClose) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 8; ++i) {
    const SystemSpec sys = random_odd_system(rng);
    const double cap = std::min(1.0, lienard_domain(sys).amplitude_cap);
    for (double frac : {0.1, 0.5, 1.0}) {
      EXPECT_LE(std::abs(return_map(sys, frac * cap).phi), closed_orbit_guard * default_integrator_tolerance)
          << sys.f().to_string() << " | " << sys.g().to_string();
    }
  }
}

TEST(LienardInvariants, TimeRescaling) {
  for (const auto& [f, g] : std::vector<std::pair<const char*, const char*>>{
           {"x", "x + x^3"}, {"0", "x + x^2"}, {"x + x^3", "x - x^3/2"}}) {
    const SystemSpec base = validate_system(f, g);
    const double amp = 0.6 * lienard_domain(base).amplitude_cap;
    for (double lambda : {0.25, 4.0}) {
      char fs[128], gs[128];
      std::snprintf(fs, sizeof fs, "%.17g*(%s)", std::sqrt(lambda), f);
      std::snprintf(gs, sizeof gs, "%.17g*(%s)", lambda, g);
      const SystemSpec scaled = validate_system(fs, gs);
      EXPECT_NEAR(return_map(scaled, amp).T, return_map(base, amp).T / std::sqrt(lambda), 1e-7) << f << " " << g;
    }
  }
}

TEST(LienardInvariants, SeriesSwitchContinuity) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_origin_polynomial(rng, 4, 2.0);
    const auto g = random_origin_polynomial(rng, 5, 2.0, 0.5, 2.0);
    const SystemSpec sys = validate_system(polynomial_source(f), polynomial_source(g));
    const SabatiniFunction C(sys, 1.0);
    for (double x : {-C.x_switch(), C.x_switch()}) EXPECT_LE(std::abs(C.direct(x) - C.series(x)), 1e-9);
  }
}

TEST(LienardInvariants, SigmaMatchesDerivative) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_origin_polynomial(rng, 3, 1.0);
    const auto g = random_origin_polynomial(rng, 4, 1.0, 0.5, 2.0);
    const SystemSpec sys = validate_system(polynomial_source(f), polynomial_source(g));
    const SabatiniFunction C(sys, 1.0);
    for (double x = 0.1; x <= 0.8 + 1e-12; x += 0.05) {
      const double h = 1e-6;
      const double slope = (C(x + h) / (x + h) - C(x - h) / (x - h)) / (2.0 * h);
      EXPECT_NEAR(sigma(sys, x), -std::pow(x, 5) * slope, 1e-6) << x;
    }
  }
}

TEST(LienardInvariants, ReversedDampingKeepsPeriod) {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 6; ++i) {
    std::mt19937_64 twin = rng;
    const SystemSpec plus = random_odd_system(rng, 1.0);
    const SystemSpec minus = random_odd_system(twin, -1.0);
    const double cap = std::min(1.0, lienard_domain(plus).amplitude_cap);
    for (double frac : {0.2, 0.9}) {
      EXPECT_NEAR(return_map(plus, frac * cap).T, return_map(minus, frac * cap).T, 1e-7);
    }
  }
}
