#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "swmac/error.hpp"
#include "swmac/expression.hpp"

using swmac::ConfigError;
using swmac::Expression;

namespace {
double eval(const std::string& s, double x = 0, double y = 0, double t = 0) { return Expression::parse(s)(x, y, t); }
}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(eval("1 + 2 * 3") == 7);
  CHECK(eval("(1 + 2) * 3") == 9);
  CHECK(eval("8 / 4 / 2") == 1);
  CHECK(eval("2 ^ 3 ^ 2") == 512);
  CHECK(eval("-2 ^ 2") == -4);
  CHECK(eval("2 * -3") == -6);
  CHECK(eval("1.5e2 + .5") == 150.5);
  CHECK(eval("x - y * t", 5, 2, 3) == -1);
}

TEST_CASE("constants and functions") {
  CHECK(eval("pi") == std::numbers::pi);
  CHECK(eval("sqrt(16) + abs(-2) + floor(2.7)") == 8);
  CHECK(eval("max(1, 3) - min(4, -1)") == 4);
  CHECK(eval("exp(log(3))") == doctest::Approx(3));
  CHECK(eval("sin(x) ^ 2 + cos(x) ^ 2", 0.37) == doctest::Approx(1));
  CHECK(eval("tan(0)") == 0);
}

TEST_CASE("comparisons and if") {
  CHECK(eval("x <= 100", 100) == 1);
  CHECK(eval("x < 100", 100) == 0);
  CHECK(eval("x == y", 2, 2) == 1);
  CHECK(eval("x != y", 2, 2) == 0);
  CHECK(eval("if(x <= 100, 10, 5)", 99.9) == 10);
  CHECK(eval("if(x <= 100, 10, 5)", 100.1) == 5);
  CHECK(eval("1 + 2 > 2") == 1);
}

TEST_CASE("parse errors carry a column") {
  const auto column_of = [](const std::string& s) {
    try {
      Expression::parse(s);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(column_of("1 +").find("column") != std::string::npos);
  CHECK(column_of("foo(1)").find("column 1") != std::string::npos);
  CHECK(column_of("(1 + 2").find("column") != std::string::npos);
  CHECK(column_of("1 2").find("column 3") != std::string::npos);
  CHECK(column_of("max(1)").find("column") != std::string::npos);
  CHECK_THROWS_AS(Expression::parse(""), ConfigError);
}

TEST_CASE("empty and text") {
  Expression e;
  CHECK(e.empty());
  e = Expression::parse("x + 1");
  CHECK_FALSE(e.empty());
  CHECK(e.text() == "x + 1");
  const Expression copy = e;
  CHECK(copy(1, 0) == 2);
}
