#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "periodlab/system.hpp"
#include "support.hpp"

using namespace periodlab;
using periodlab::testing::polynomial_source;
using periodlab::testing::random_origin_polynomial;

namespace {

std::vector<TokenKind> kinds(const std::vector<Token>& ts) {
  std::vector<TokenKind> k;
  for (const auto& t : ts) k.push_back(t.kind);
  return k;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::domain_error;
}

const Expr X = Expr::variable();

/// Random tree over the full grammar; division only by 1 + x^2.
Expr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
  std::uniform_int_distribution<int> small(1, 9);
  switch (pick(rng)) {
    case 0: return X;
    case 1: return Expr::constant(small(rng) / 4.0);
    case 2: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 3: return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
    case 4: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 5: return random_tree(rng, depth - 1) / (Expr::constant(1.0) + Expr::power(X, 2));
    case 6: return Expr::power(random_tree(rng, depth - 1), static_cast<unsigned>(small(rng) % 4));
    case 7: return -random_tree(rng, depth - 1);
    default: {
      static constexpr Function fns[] = {Function::sin, Function::cos, Function::exp, Function::atan};
      return Expr::apply(fns[static_cast<std::size_t>(small(rng)) % 4], random_tree(rng, depth - 1));
    }
  }
}

}  // namespace

TEST(Tokenize, LexesPolynomial) {
  const auto ts = tokenize("x + x^3");
  ASSERT_EQ(ts.size(), 5u);
  EXPECT_EQ(kinds(ts), (std::vector{TokenKind::identifier, TokenKind::op, TokenKind::identifier, TokenKind::op,
                                    TokenKind::number}));
  EXPECT_EQ(ts[1].text, "+");
  EXPECT_EQ(ts[3].text, "^");
  EXPECT_EQ(ts[4].value, 3.0);
}

TEST(Tokenize, LexesFunctionCall) {
  const auto ts = tokenize("sin(x)");
  EXPECT_EQ(kinds(ts), (std::vector{TokenKind::identifier, TokenKind::lparen, TokenKind::identifier, TokenKind::rparen}));
  EXPECT_EQ(ts[0].text, "sin");
}

TEST(Tokenize, ReportsIllegalCharacterOffset) {
  try {
    tokenize("x @ 2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), Errc::illegal_character);
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(Tokenize, MalformedNumber) { EXPECT_EQ(code_of([] { tokenize("1.2.3"); }), Errc::malformed_number); }

TEST(Parse, GrammarShapes) {
  EXPECT_EQ(parse("x - x^3"), X - Expr::power(X, 3));
  EXPECT_EQ(parse("-x^2"), -Expr::power(X, 2));
  EXPECT_EQ(parse("x * (1 + sin(x))"), X * (Expr::constant(1.0) + Expr::apply(Function::sin, X)));
}

TEST(Parse, Errors) {
  EXPECT_EQ(code_of([] { parse("(x + 1"); }), Errc::unbalanced_parentheses);
  EXPECT_EQ(code_of([] { parse("x + 1)"); }), Errc::unbalanced_parentheses);
  EXPECT_EQ(code_of([] { parse("y + 1"); }), Errc::unknown_identifier);
  EXPECT_EQ(code_of([] { parse("x +"); }), Errc::unexpected_token);
  EXPECT_EQ(code_of([] { parse("x^-1"); }), Errc::unexpected_token);
  EXPECT_EQ(code_of([] { parse("x^1.5"); }), Errc::unexpected_token);
}

TEST(ValidateSystem, CachesDerivatives) {
  const SystemSpec s = validate_system("x", "x");
  EXPECT_EQ(s.fp0(), 1.0);
  EXPECT_EQ(s.gp0(), 1.0);
  EXPECT_EQ(s.gpp0(), 0.0);
  EXPECT_EQ(s.gppp0(), 0.0);
  const SystemSpec t = validate_system("x^2", "x + x^2");
  EXPECT_EQ(t.fpp0(), 2.0);
  EXPECT_EQ(t.gpp0(), 2.0);
}

TEST(ValidateSystem, RejectsBadSystems) {
  EXPECT_EQ(code_of([] { validate_system("x", "x^2"); }), Errc::nonpositive_stiffness);
  EXPECT_EQ(code_of([] { validate_system("0", "x^2"); }), Errc::nonpositive_stiffness);
  EXPECT_EQ(code_of([] { validate_system("0", "-x"); }), Errc::nonpositive_stiffness);
  EXPECT_EQ(code_of([] { validate_system("0", "1 + x"); }), Errc::not_at_origin);
  EXPECT_EQ(code_of([] { validate_system("cos(x)", "x"); }), Errc::not_at_origin);
}

TEST(ValidateSystem, ConservativeFlag) {
  EXPECT_TRUE(validate_system("0", "sin(x)").is_conservative());
  EXPECT_TRUE(validate_system("x - x", "x").is_conservative());
  EXPECT_FALSE(validate_system("x", "x").is_conservative());
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(parse("x + x^3"), 2.0), 10.0);
  EXPECT_EQ(eval(parse("sin(x)"), 0.0), 0.0);
  EXPECT_EQ(code_of([] { eval(parse("1/x"), 0.0); }), Errc::domain_error);
  EXPECT_EQ(code_of([] { eval(parse("sqrt(x)"), -1.0); }), Errc::domain_error);
}

TEST(Expr, PrintParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Expr e = random_tree(rng, 4);
    const std::string text = e.to_string();
    EXPECT_EQ(parse(text), e) << text;
  }
}

TEST(Expr, SumMatchesEvaluation) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const std::string p = polynomial_source(random_origin_polynomial(rng, 5, 3.0));
    const std::string q = polynomial_source(random_origin_polynomial(rng, 5, 3.0));
    const Expr sum = parse("(" + p + ") + (" + q + ")");
    const double x = xs(rng);
    EXPECT_NEAR(eval(sum, x), eval(parse(p), x) + eval(parse(q), x), 4e-15 * 10.0) << p << " | " << q;
  }
}

TEST(ValidateSystem, RandomSecondDerivativeExact) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const auto f = random_origin_polynomial(rng, 4, 2.0);
    auto g = random_origin_polynomial(rng, 4, 2.0, 0.25, 2.0);
    const SystemSpec s = validate_system(polynomial_source(f), polynomial_source(g));
    EXPECT_EQ(s.gpp0(), 2.0 * g[2]);
    EXPECT_EQ(s.gppp0(), 6.0 * g[3]);
    EXPECT_EQ(s.fpp0(), 2.0 * f[2]);
    EXPECT_EQ(s.fp0(), f[1]);
  }
}
