#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cosym/error.hpp"
#include "cosym/expr.hpp"

using namespace cosym;
using cosym::expr::Expr;

namespace {

expr::SymbolTable xy() { return {{"x", "y"}, {{"k", 2.0}}}; }

double eval(const std::string & text, double x, double y)
{
  const double v[] = {x, y};
  return expr::parse(text, xy()).evaluate(v);
}

}  // namespace

TEST(Expr, PrecedenceAndAssociativity)
{
  EXPECT_DOUBLE_EQ(eval("1 + 2*3", 0, 0), 7.0);
  EXPECT_DOUBLE_EQ(eval("2^3^2", 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(eval("-x^2", 3, 0), -9.0);
  EXPECT_DOUBLE_EQ(eval("8/4/2", 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(eval("x - y - 1", 5, 2), 2.0);
  EXPECT_DOUBLE_EQ(eval("2^-1", 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(eval("k*x", 1.5, 0), 3.0);
  EXPECT_DOUBLE_EQ(eval("sqrt(4) + exp(0) + log(1) + sin(0) + cos(0)", 0, 0), 4.0);
  EXPECT_DOUBLE_EQ(eval("1.5e1", 0, 0), 15.0);
}

TEST(Expr, ParametersStayNamed)
{
  const Expr e = expr::parse("k*x + k", xy());
  EXPECT_EQ(e.to_string(), "k*x + k");
  EXPECT_FALSE(expr::parse("k*2", xy()).is_number());
}

TEST(Expr, PrinterRoundTripsRandomTrees)
{
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 7);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  const Expr x = Expr::variable("x", 0), y = Expr::variable("y", 1), k = Expr::parameter("k", 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Expr e = x;
    for (int d = 0; d < 6; ++d) {
      const Expr leaf = (d % 3 == 0) ? y : (d % 3 == 1 ? k : Expr(std::round(val(rng) * 4) / 4));
      switch (pick(rng)) {
        case 0: e = e + leaf; break;
        case 1: e = e - leaf; break;
        case 2: e = leaf - e; break;
        case 3: e = e * leaf; break;
        case 4: e = e / (leaf * leaf + Expr(1.0)); break;
        case 5: e = -e; break;
        case 6: e = expr::pow(e, Expr(2.0)); break;
        default: e = expr::sin(e); break;
      }
    }
    const Expr back = expr::parse(e.to_string(), xy());
    const double at[] = {0.37, -1.21};
    EXPECT_NEAR(back.evaluate(at), e.evaluate(at), 1e-9 * std::max(1.0, std::abs(e.evaluate(at)))) << e.to_string();
  }
}

TEST(Expr, DerivativesAgainstCentralDifferences)
{
  const char * bodies[] = {"x^3*y - 2*x*y^2", "sin(x*y) + exp(y)/x", "sqrt(x^2 + y^2)", "log(x)*k*y"};
  for (const char * body : bodies) {
    const Expr e = expr::parse(body, xy());
    const double x0 = 1.3, y0 = 0.7, h = 1e-6;
    for (int i = 0; i < 2; ++i) {
      double p[] = {x0, y0}, m[] = {x0, y0}, c[] = {x0, y0};
      p[i] += h;
      m[i] -= h;
      const double fd = (e.evaluate(p) - e.evaluate(m)) / (2 * h);
      EXPECT_NEAR(e.derivative(i).evaluate(c), fd, 1e-6) << body << " d/d" << i;
    }
  }
}

TEST(Expr, SimplifyingConstructors)
{
  const Expr x = Expr::variable("x", 0);
  EXPECT_EQ((x * Expr(1.0)).to_string(), "x");
  EXPECT_TRUE((x * Expr(0.0)).is_number(0.0));
  EXPECT_EQ((x + Expr(0.0)).to_string(), "x");
  EXPECT_TRUE((Expr(2.0) * Expr(3.0)).is_number(6.0));
  EXPECT_TRUE(expr::parse("y^2", xy()).derivative(0).is_number(0.0));
}

TEST(Expr, SubstituteReplacesSlots)
{
  const Expr e = expr::parse("x*y + x", xy());
  const Expr r = e.substitute({Expr::variable("x", 0) + Expr(1.0), Expr(2.0)});
  const double at[] = {3.0, 100.0};
  EXPECT_DOUBLE_EQ(r.evaluate(at), 4.0 * 2.0 + 4.0);
}

TEST(Expr, ParseErrorsCarryOffsetAndExpectation)
{
  try {
    expr::parse("x + * y", xy());
    FAIL();
  } catch (const ParseError & e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    expr::parse("x + zeta", xy());
    FAIL();
  } catch (const ParseError & e) {
    EXPECT_EQ(e.offset(), 4u);
    const auto & k = e.expected();
    EXPECT_NE(std::find(k.begin(), k.end(), "x"), k.end());
    EXPECT_NE(std::find(k.begin(), k.end(), "k"), k.end());
  }
  EXPECT_THROW(expr::parse("(x + y", xy()), ParseError);
  EXPECT_THROW(expr::parse("x y", xy()), ParseError);
  EXPECT_THROW(expr::parse("foo(x)", xy()), ParseError);
  EXPECT_THROW(expr::parse("", xy()), ParseError);
}
