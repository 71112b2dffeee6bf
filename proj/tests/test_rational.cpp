#include "repvote/rational.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace repvote;

TEST_SUITE("rational") {
  TEST_CASE("parses integers, fractions and decimals exactly") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("6/8") == Rational(3, 4));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("-2.5E2") == -250);
    CHECK(parse_rational(" 1/2 ") == Rational(1, 2));
  }

  TEST_CASE("rejects malformed literals") {
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("3/"), std::invalid_argument);
  }

  TEST_CASE("canonical text round-trips") {
    for (const char* s : {"0", "1", "-3/7", "22/7", "1/1000000007"}) CHECK(to_string(parse_rational(s)) == s);
  }

  TEST_CASE("doubles convert exactly and print shortest") {
    CHECK(exact_from_double(0.5) == Rational(1, 2));
    CHECK(exact_from_double(0.1) != Rational(1, 10));
    CHECK(to_double(exact_from_double(0.1)) == 0.1);
    CHECK(shortest_decimal(0.1) == "0.1");
    CHECK(shortest_decimal(1.5) == "1.5");
    CHECK_THROWS(exact_from_double(std::numeric_limits<double>::infinity()));
  }

  TEST_CASE("conversion to double rounds to nearest") {
    CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
    CHECK(to_double(Rational(-2, 3)) == -2.0 / 3.0);
    CHECK(to_double(parse_rational("0.3")) == 0.3);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 20000; ++k) {
      const double d = u(gen);
      CHECK(to_double(parse_rational(shortest_decimal(d))) == d);
    }
    // Exactly halfway between 1 and the next double: ties go to even.
    const Rational half_ulp = exact_from_double(std::nextafter(1.0, 2.0) - 1.0) / 2;
    CHECK(to_double(1 + half_ulp) == 1.0);
    CHECK(to_double(exact_from_double(std::nextafter(1.0, 2.0)) + half_ulp) == std::nextafter(std::nextafter(1.0, 2.0), 2.0));
  }

  TEST_CASE("floor and ceil") {
    CHECK(floor_of(Rational(7, 2)) == 3);
    CHECK(ceil_of(Rational(7, 2)) == 4);
    CHECK(floor_of(Rational(-7, 2)) == -4);
    CHECK(ceil_of(Rational(-7, 2)) == -3);
    CHECK(ceil_index(Rational(9)) == 9);
    CHECK(ceil_index(Rational(91, 10)) == 10);
    CHECK(floor_index(Rational(5, 2)) == 2);
  }
}
