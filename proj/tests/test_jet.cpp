#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "periodlab/jet.hpp"
#include "periodlab/polynomial.hpp"
#include "support.hpp"

using namespace periodlab;
using periodlab::testing::polynomial_source;
using periodlab::testing::random_origin_polynomial;

namespace {

std::vector<double> coeffs(const Jet& j) { return {j.coefficients().begin(), j.coefficients().end()}; }

double central(const Expr& e, double x, double h) { return (eval(e, x + h) - eval(e, x - h)) / (2.0 * h); }

}  // namespace

TEST(Seed, Examples) {
  EXPECT_EQ(coeffs(seed(0.0, 3)), (std::vector<double>{0, 1, 0, 0}));
  EXPECT_EQ(coeffs(seed(2.5, 1)), (std::vector<double>{2.5, 1}));
  EXPECT_EQ(coeffs(seed(-1.0, 0)), (std::vector<double>{-1}));
  EXPECT_EQ(seed(2.5, 1).base(), 2.5);
}

TEST(EvalJet, Examples) {
  EXPECT_EQ(coeffs(eval_jet(parse("x + x^3"), 0.0, 3)), (std::vector<double>{0, 1, 0, 1}));
  const auto s = coeffs(eval_jet(parse("sin(x)"), 0.0, 3));
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[1], 1.0);
  EXPECT_EQ(s[2], 0.0);
  EXPECT_DOUBLE_EQ(s[3], -1.0 / 6.0);
  EXPECT_EQ(coeffs(eval_jet(parse("x + x^2"), 0.5, 2)), (std::vector<double>{0.75, 2, 1}));
}

TEST(EvalJet, TranscendentalSeries) {
  const auto e = coeffs(eval_jet(parse("exp(x)"), 0.0, 6));
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    EXPECT_NEAR(e[static_cast<std::size_t>(k)], 1.0 / fact, 1e-16);
  }
  const auto a = coeffs(eval_jet(parse("atan(x)"), 0.0, 5));
  EXPECT_NEAR(a[1], 1.0, 1e-16);
  EXPECT_NEAR(a[3], -1.0 / 3.0, 1e-16);
  EXPECT_NEAR(a[5], 0.2, 1e-16);
  const auto r = coeffs(eval_jet(parse("sqrt(1 + x)"), 0.0, 3));
  EXPECT_NEAR(r[1], 0.5, 1e-16);
  EXPECT_NEAR(r[2], -0.125, 1e-16);
  EXPECT_NEAR(r[3], 0.0625, 1e-16);
}

TEST(EvalJet, DomainErrors) {
  EXPECT_THROW(eval_jet(parse("1/x"), 0.0, 2), Error);
  EXPECT_THROW(eval_jet(parse("sqrt(x)"), 0.0, 2), Error);
}

TEST(DerivativesAt, Examples) {
  EXPECT_EQ(derivatives_at(parse("x + x^3"), 0.0, 3), (std::vector<double>{0, 1, 0, 6}));
  EXPECT_EQ(derivatives_at(parse("x + x^2"), 0.0, 2), (std::vector<double>{0, 1, 2}));
  const auto d = derivatives_at(parse("x + x^3/9"), 0.0, 3);
  EXPECT_EQ(d[1], 1.0);
  EXPECT_DOUBLE_EQ(d[3], 2.0 / 3.0);
}

TEST(PolyAntiderivative, Examples) {
  EXPECT_EQ(poly_antiderivative(parse("x + x^3")).to_string(), "x^2/2 + x^4/4");
  EXPECT_EQ(poly_antiderivative(parse("x + x^2")).to_string(), "x^2/2 + x^3/3");
  try {
    poly_antiderivative(parse("sin(x)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_polynomial);
  }
}

TEST(MomentIntegral, Examples) {
  EXPECT_NEAR(moment_integral(parse("x"), 0.3), 0.009, 1e-17);
  EXPECT_EQ(moment_integral(parse("0"), 0.7), 0.0);
  EXPECT_EQ(moment_integral(parse("x^2"), 1.0), 0.25);
  // s*sin(s) integrates to sin(x) - x*cos(x).
  EXPECT_NEAR(moment_integral(parse("sin(x)"), 0.8), std::sin(0.8) - 0.8 * std::cos(0.8), 1e-14);
}

TEST(Jet, MatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Expr e = parse(polynomial_source(random_origin_polynomial(rng, 6, 2.0)));
    const auto jet_der = [&](double x, int k) { return derivatives_at(e, x, k)[static_cast<std::size_t>(k)]; };
    const double x0 = xs(rng);
    const double h = 1e-5;
    const double d1 = jet_der(x0, 1);
    const double d2 = jet_der(x0, 2);
    EXPECT_LE(std::abs(d1 - central(e, x0, h)), 1e-6 * std::max(1.0, std::abs(d1)));
    const double fd2 = (jet_der(x0 + h, 1) - jet_der(x0 - h, 1)) / (2.0 * h);
    EXPECT_LE(std::abs(d2 - fd2), 1e-6 * std::max(1.0, std::abs(d2)));
  }
}

TEST(Jet, LeibnizProduct) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::string p = polynomial_source(random_origin_polynomial(rng, 4, 2.0));
    const std::string q = polynomial_source(random_origin_polynomial(rng, 4, 2.0));
    const double x0 = xs(rng);
    const Jet lhs = eval_jet(parse("(" + p + ")*(" + q + ")"), x0, 5);
    const Jet rhs = eval_jet(parse(p), x0, 5) * eval_jet(parse(q), x0, 5);
    for (std::size_t k = 0; k <= 5; ++k) {
      EXPECT_NEAR(lhs[k], rhs[k], 1e-13 * std::max(1.0, std::abs(rhs[k])));
    }
  }
  EXPECT_NEAR(eval_jet(parse("sin(x)*cos(x)"), 0.3, 4)[3], eval_jet(parse("sin(2*x)/2"), 0.3, 4)[3], 1e-15);
}

TEST(Jet, AntiderivativeThenDifferentiate) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> ints(-9, 9);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> c(6);
    for (auto& v : c) v = ints(rng);
    const Expr A = poly_antiderivative(parse(polynomial_source(c)));
    const Jet j = eval_jet(A, 0.0, 6);
    for (std::size_t k = 0; k < c.size(); ++k) {
      // Taylor coefficient k+1 of A times (k+1) is the k-th coefficient of the original.
      EXPECT_DOUBLE_EQ(j[k + 1] * static_cast<double>(k + 1), c[k]);
    }
  }
}

TEST(MomentIntegral, DerivativeIsMoment) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 20; ++i) {
    const auto c = random_origin_polynomial(rng, 5, 2.0);
    const Expr f = parse(polynomial_source(c));
    for (double x = -0.9; x <= 0.9; x += 0.15) {
      const double h = 1e-6;
      const double fd = (moment_integral(f, x + h) - moment_integral(f, x - h)) / (2.0 * h);
      EXPECT_NEAR(fd, x * eval(f, x), 1e-6);
    }
  }
}
