#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "nkcert/error.hpp"
#include "nkcert/expression.hpp"

using namespace nkcert;

namespace {

double eval(const std::string& text, std::vector<double> x) {
  return Expression::parse(text, x.size()).evaluate(x);
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(eval("1 + 2 * 3", {0}) == 7.0);
  CHECK(eval("(1 + 2) * 3", {0}) == 9.0);
  CHECK(eval("2 ^ 3 ^ 2", {0}) == 512.0);
  CHECK(eval("-x1^2", {3}) == -9.0);
  CHECK(eval("x1 - x2 - 1", {5, 2}) == 2.0);
  CHECK(eval("8 / 4 / 2", {0}) == 1.0);
  CHECK(eval("2^-1", {0}) == 0.5);
  CHECK(eval("1.5e1 + .5", {0}) == 15.5);
}

TEST_CASE("functions") {
  CHECK(eval("exp(0) + log(1) + cos(0) + sin(0)", {0}) == 2.0);
  CHECK(eval("exp(x1) - 1.1", {0.5}) == doctest::Approx(std::exp(0.5) - 1.1));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(Expression::parse("x3", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("x0", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 +", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("tan(x1)", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("(x1", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("x1 x1", 1), ParseError);
}

TEST_CASE("derivatives by hand") {
  const auto f = Expression::parse("x1^2 + x1*x2 - 3", 2);
  const std::array<double, 2> x{1.5, -2.0};
  CHECK(f.derivative(0).evaluate(x) == doctest::Approx(2 * 1.5 - 2.0));
  CHECK(f.derivative(1).evaluate(x) == doctest::Approx(1.5));
  CHECK(Expression::parse("5", 1).derivative(0).is_constant());
  CHECK(Expression::parse("x1^3", 1).derivative(0).evaluate(std::array{2.0}) == doctest::Approx(12.0));
  CHECK(Expression::parse("2^x1", 1).derivative(0).evaluate(std::array{1.0}) == doctest::Approx(2 * std::log(2.0)));
  CHECK(Expression::parse("log(x1)", 1).derivative(0).evaluate(std::array{4.0}) == doctest::Approx(0.25));
}

TEST_CASE("symbolic derivatives agree with central differences") {
  const char* texts[] = {"sin(x1) * exp(x2) / (2 + cos(x1*x2))", "x1^x2 + log(1 + x1^2)",
                         "(x1 - x2)^3 - 4*x1/x2", "exp(-x1^2) * sin(3*x2) + x2^2.5"};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (const char* text : texts) {
    const auto f = Expression::parse(text, 2);
    for (int trial = 0; trial < 25; ++trial) {
      std::array<double, 2> x{u(rng), u(rng)};
      for (std::size_t v = 0; v < 2; ++v) {
        const double h = 1e-6;
        auto xp = x, xm = x;
        xp[v] += h;
        xm[v] -= h;
        const double fd = (f.evaluate(xp) - f.evaluate(xm)) / (2 * h);
        CHECK(f.derivative(v).evaluate(x) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}
