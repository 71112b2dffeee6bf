#include "repvote/condition.hpp"

#include <doctest.h>

using namespace repvote;

namespace {

// Term-by-term sums straight from the definitions, without prefix sums.
ConditionSides direct(const ScoringVector& v, const Rational& y) {
  const auto& s = v.exact();
  const std::size_t n = s.size();
  const std::size_t big_y = ceil_index(y * (n - 1));
  Rational lhs = 0, rhs = 0;
  for (std::size_t k = 0; k < big_y; ++k) lhs += s[k] - s[big_y];
  for (std::size_t k = n - big_y; k < n; ++k) rhs += 1 - s[k];
  return {y * lhs, (1 - y) * rhs};
}

ConditionSides direct_shifted(const ScoringVector& v, const Rational& z, std::size_t m) {
  const auto& s = v.exact();
  const std::size_t n = s.size();
  const std::size_t big_z = ceil_index(z * (n - 1));
  Rational lhs = 0, rhs = 0;
  for (std::size_t k = 0; k < big_z; ++k) lhs += s[m + k] - s[m + big_z];
  for (std::size_t k = n - big_z; k < n; ++k) rhs += 1 - s[k];
  return {z * lhs, 2 * (1 - z) * rhs};
}

std::vector<RuleFamily> families_under_test() {
  auto f = builtin_families();
  f.push_back(family::GammaApproval{Rational(1, 4)});
  f.push_back(family::GammaApproval{Rational(3, 4)});
  f.push_back(family::KApproval{3});
  return f;
}

}  // namespace

TEST_SUITE("condition") {
  TEST_CASE("worked examples at n = 11") {
    const auto borda = condition_sides(score_vector(family::Borda{}, 11), Rational(9, 10));
    CHECK(borda.lhs == Rational(81, 20));
    CHECK(borda.rhs == Rational(27, 50));
    CHECK(borda.holds());

    const auto plurality = condition_sides(score_vector(family::Plurality{}, 11), Rational(9, 10));
    CHECK(plurality.lhs == Rational(9, 10));
    CHECK(plurality.rhs == Rational(9, 10));
    CHECK_FALSE(plurality.holds());

    const auto veto = condition_sides(score_vector(family::Veto{}, 11), Rational(9, 10));
    CHECK(veto.lhs == 0);
    CHECK(veto.rhs == Rational(1, 10));
    CHECK_FALSE(veto.holds());

    const auto half = condition_sides(score_vector(family::Borda{}, 11), Rational(1, 2));
    CHECK(half.lhs == Rational(3, 4));
    CHECK(half.rhs == 2);
    CHECK_FALSE(half.holds());
  }

  TEST_CASE("prefix sums agree with direct summation") {
    for (const auto& f : families_under_test())
      for (std::size_t n = 2; n <= 90; n += 1 + n / 10)
        for (const Rational& y : default_y_grid()) {
          const auto v = score_vector(f, n);
          const auto a = condition_sides(v, y);
          const auto b = direct(v, y);
          CHECK(a.lhs == b.lhs);
          CHECK(a.rhs == b.rhs);
          const Rational z = Rational(5, 6) + y / 6;
          if (const auto top = max_shift(z, n))
            for (std::size_t m = 0; m <= *top; ++m) {
              const auto c = shifted_sides(v, z, m);
              const auto d = direct_shifted(v, z, m);
              CHECK(c.lhs == d.lhs);
              CHECK(c.rhs == d.rhs);
            }
        }
  }

  TEST_CASE("shifted variant") {
    for (const auto& f : families_under_test()) {
      const auto v = score_vector(f, 40);
      const Rational z(3, 4);
      const auto plain = condition_sides(v, z);
      const auto shifted = shifted_sides(v, z, 0);
      CHECK(shifted.lhs == plain.lhs);
      CHECK(shifted.rhs == 2 * plain.rhs);
    }
    CHECK(shifted_sides(score_vector(family::Borda{}, 101), Rational(19, 20), 2).holds());
    const auto veto = score_vector(family::Veto{}, 50);
    for (const Rational& z : {Rational(3, 5), Rational(3, 4), Rational(9, 10)}) {
      const std::size_t big_z = ceil_index(z * 49);
      for (std::size_t m = 0; m + big_z < 49; ++m) CHECK(shifted_sides(veto, z, m).lhs == 0);
    }
  }

  TEST_CASE("holding is monotone in y") {
    for (const auto& f : families_under_test())
      for (std::size_t n = 2; n <= 300; ++n) {
        const auto v = score_vector(f, n);
        bool seen = false;
        for (const Rational& y : default_y_grid()) {
          const bool h = condition_sides(v, y).holds();
          if (seen) CHECK(h);
          seen = seen || h;
        }
      }
  }

  TEST_CASE("holding implies the shifted inequality") {
    std::size_t implications = 0;
    for (const auto& f : families_under_test())
      for (std::size_t n = 2; n <= 512; ++n) {
        const auto v = score_vector(f, n);
        for (const Rational& y : default_y_grid()) {
          if (!condition_sides(v, y).holds()) continue;
          const Rational z = Rational(5, 6) + y / 6;
          const auto top = max_shift(z, n);
          if (!top) continue;
          for (std::size_t m = 0; m <= *top; ++m) {
            CAPTURE(f.name());
            CAPTURE(n);
            CAPTURE(to_string(y));
            CAPTURE(m);
            CHECK(shifted_sides(v, z, m).holds());
            ++implications;
          }
        }
      }
    CHECK(implications > 1000);
  }

  TEST_CASE("limit classification") {
    CHECK(classify_by_limit(family::Borda{}) == LimitClass::ConstantByLimit);
    CHECK(classify_by_limit(family::Plurality{}) == LimitClass::SuperConstantByLimit);
    CHECK(classify_by_limit(family::Dowdall{}) == LimitClass::SuperConstantByLimit);
    CHECK(classify_by_limit(family::Veto{}) == LimitClass::IndeterminateLimit);
    for (const Rational& g : {Rational(1, 4), Rational(1, 2), Rational(3, 4)})
      CHECK(classify_by_limit(family::GammaApproval{g}) == LimitClass::ConstantByLimit);
    CHECK(classify_by_limit(family::KApproval{3}) == LimitClass::SuperConstantByLimit);
    const RuleFamily table{family::Table{std::make_shared<const ScoringTable>(parse_scoring_table("2: 1 0\n"))}};
    CHECK(classify_by_limit(table) == LimitClass::IndeterminateLimit);
  }

  TEST_CASE("scan verdicts") {
    const auto borda = scan(family::Borda{}, default_y_grid(), 4, 200);
    CHECK(borda.verdict == Verdict::CertifiedConstantWithinHorizon);
    REQUIRE(borda.certified_y);
    CHECK(*borda.certified_y == Rational(2, 3));
    CHECK(borda.certified_n0 <= 100);
    CHECK(borda.classifier == LimitClass::ConstantByLimit);
    CHECK(borda.cells.size() == 197 * default_y_grid().size());
    for (const auto& cell : borda.cells) CHECK(cell.sides.holds() == (cell.sides.lhs > cell.sides.rhs));

    const std::vector<Rational> coarse{Rational(1, 2), Rational(3, 4), Rational(9, 10), Rational(19, 20)};
    const auto coarse_borda = scan(family::Borda{}, coarse, 4, 200);
    CHECK(coarse_borda.verdict == Verdict::CertifiedConstantWithinHorizon);
    REQUIRE(coarse_borda.certified_y);
    CHECK(*coarse_borda.certified_y <= Rational(9, 10));

    for (const RuleFamily& f : {RuleFamily(family::Plurality{}), RuleFamily(family::Dowdall{}), RuleFamily(family::Veto{})}) {
      CAPTURE(f.name());
      const auto r = scan(f, coarse, 4, 200);
      CHECK(r.verdict == Verdict::FailsEverywhereOnGrid);
      CHECK_FALSE(r.certified_y);
    }

    CHECK_THROWS_AS(scan(family::Borda{}, {}, 4, 20), std::invalid_argument);
    CHECK_THROWS_AS(scan(family::Borda{}, coarse, 1, 20), std::invalid_argument);
    CHECK_THROWS_AS(scan(family::Borda{}, {Rational(1)}, 4, 20), std::invalid_argument);
  }

  TEST_CASE("index bounds and errors") {
    CHECK(condition_index(Rational(9, 10), 11) == 9);
    CHECK(condition_index(Rational(1, 100), 11) == 1);
    CHECK_THROWS(condition_index(Rational(1, 2), 1));
    CHECK_THROWS_AS(condition_sides(score_vector(family::Borda{}, 5), Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(condition_sides(score_vector(family::Borda{}, 5), Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(shifted_sides(score_vector(family::Borda{}, 5), Rational(1, 2), 0), std::invalid_argument);
    CHECK_THROWS_AS(shifted_sides(score_vector(family::Borda{}, 10), Rational(3, 4), 3), std::out_of_range);
    // n = 100, z = 9/10: Z = 90, floor(10) = 10, n-1-Z = 9.
    CHECK(*max_shift(Rational(9, 10), 100) == 9);
    CHECK(*max_shift(Rational(3, 4), 41) == 10);
  }
}
