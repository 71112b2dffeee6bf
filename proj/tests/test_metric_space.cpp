#include "repvote/metric_space.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace repvote;
using repvote::test::exact_space;
using repvote::test::line3;

namespace {

// Lemma 1's discrete layer-cake sum: sum_k (r_{k+1} - r_k) * V_i(r_k).
template <class T>
T layer_cake(const BasicMetricSpace<T>& s, PointIndex i) {
  const auto r = distinct_distances(s, i);
  T sum = 0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) sum += (r[k + 1] - r[k]) * outside_mass(s, i, r[k]);
  return sum;
}

bool has_kind(const ValidationReport& r, ViolationKind kind) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

}  // namespace

TEST_SUITE("metricspace") {
  TEST_CASE("line example: costs, median, outside mass") {
    const auto s = line3();
    CHECK(validate(s).ok);
    CHECK(social_cost(s, 0) == Rational(9, 10));
    CHECK(social_cost(s, 1) == Rational(9, 10));
    CHECK(social_cost(s, 2) == Rational(21, 10));
    CHECK(one_median(s) == 0);
    CHECK(outside_mass(s, 0, Rational(1, 2)) == Rational(1, 2));
    CHECK(outside_mass(s, 0, Rational(3)) == 0);
    CHECK(distinct_distances(s, 0) == std::vector<Rational>{0, 1, 3});
  }

  TEST_CASE("point mass") {
    const auto s = exact_space({1, 0, 0}, {{0, 2, 3}, {2, 0, 1}, {3, 1, 0}});
    CHECK(validate(s).ok);
    CHECK(social_cost(s, 0) == 0);
    CHECK(one_median(s) == 0);
    CHECK(outside_mass(s, 0, Rational(0)) == 0);
    const auto t = exact_space({Rational(1, 4), Rational(3, 4)}, {{0, 1}, {1, 0}});
    CHECK(outside_mass(t, 1, Rational(0)) == Rational(1, 4));
  }

  TEST_CASE("single point and heavier of two points") {
    CHECK(one_median(exact_space({1}, {{0}})) == 0);
    const auto s = exact_space({Rational(9, 10), Rational(1, 10)}, {{0, 2}, {2, 0}});
    CHECK(one_median(s) == 0);
    CHECK(one_median(exact_space({Rational(1, 10), Rational(9, 10)}, {{0, 2}, {2, 0}})) == 1);
  }

  TEST_CASE("violations are reported with witnesses") {
    SUBCASE("triangle") {
      const auto s = exact_space({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
      const auto r = validate(s);
      REQUIRE_FALSE(r.ok);
      REQUIRE(r.violations.size() >= 1);
      const Violation& v = r.violations.front();
      CHECK(v.kind == ViolationKind::Triangle);
      std::array<PointIndex, 3> w = v.witness;
      std::sort(w.begin(), w.end());
      CHECK(w == std::array<PointIndex, 3>{0, 1, 2});
      CHECK(v.magnitude == doctest::Approx(3.0));
    }
    SUBCASE("mass, symmetry, diagonal, sign") {
      CHECK(has_kind(validate(exact_space({Rational(1, 2), Rational(2, 5)}, {{0, 1}, {1, 0}})), ViolationKind::MassNormalization));
      CHECK(has_kind(validate(exact_space({Rational(1, 2), Rational(1, 2)}, {{0, 1}, {2, 0}})), ViolationKind::Asymmetry));
      CHECK(has_kind(validate(exact_space({Rational(1, 2), Rational(1, 2)}, {{1, 1}, {1, 0}})), ViolationKind::NonzeroDiagonal));
      CHECK(has_kind(validate(exact_space({Rational(3, 2), Rational(-1, 2)}, {{0, 1}, {1, 0}})), ViolationKind::NegativeMass));
      CHECK(has_kind(validate(exact_space({Rational(1, 2), Rational(1, 2)}, {{0, -1}, {-1, 0}})), ViolationKind::NegativeDistance));
    }
  }

  TEST_CASE("random spaces are deterministic and valid") {
    for (RandomMode mode : {RandomMode::UniformBoxL2, RandomMode::IidUnitIntervalDistances}) {
      const auto a = random_space(5, 20, mode);
      const auto b = random_space(5, 20, mode);
      CHECK(std::equal(a.matrix().begin(), a.matrix().end(), b.matrix().begin(), b.matrix().end()));
      CHECK(std::equal(a.masses().begin(), a.masses().end(), b.masses().begin(), b.masses().end()));
      const auto c = random_space(6, 20, mode);
      CHECK_FALSE(std::equal(a.matrix().begin(), a.matrix().end(), c.matrix().begin(), c.matrix().end()));
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CHECK(validate(random_space(seed, 20, RandomMode::IidUnitIntervalDistances)).ok);
      CHECK(validate(random_space(seed, 20, RandomMode::UniformBoxL2)).ok);
    }
    const auto iid = random_space(9, 12, RandomMode::IidUnitIntervalDistances);
    for (PointIndex i = 0; i < 12; ++i)
      for (PointIndex j = 0; j < 12; ++j)
        if (i != j) CHECK((iid.distance(i, j) >= 1.0 && iid.distance(i, j) <= 2.0));
    CHECK(parse_random_mode(to_string(RandomMode::UniformBoxL2)) == RandomMode::UniformBoxL2);
    CHECK_THROWS_AS(parse_random_mode("box"), std::invalid_argument);
  }

  TEST_CASE("sampled validation above the cap") {
    const auto big = random_space(3, 400, RandomMode::IidUnitIntervalDistances);
    const auto ok = validate(big);
    CHECK(ok.ok);
    CHECK_FALSE(ok.exhaustive_triples);
    CHECK(ok.triples_checked > 0);

    // Points 0..199 sit 5 apart from each other but within 2 of the rest, so
    // about a quarter of all triples break the triangle inequality.
    std::vector<double> matrix(big.matrix().begin(), big.matrix().end());
    for (PointIndex i = 0; i < 200; ++i)
      for (PointIndex j = 0; j < 200; ++j)
        if (i != j) matrix[i * 400 + j] = 5.0;
    const MetricSpace broken(std::vector<double>(big.masses().begin(), big.masses().end()), matrix);
    ValidateOptions options = default_validate_options<double>();
    options.sampled_triples = 10'000;
    const auto r = validate(broken, options);
    CHECK_FALSE(r.ok);
    CHECK(r.violations.front().kind == ViolationKind::Triangle);
  }

  TEST_CASE("exact conversion keeps masses normalized") {
    const auto s = to_exact(random_space(11, 15, RandomMode::UniformBoxL2));
    Rational total = 0;
    for (const auto& m : s.masses()) total += m;
    CHECK(total == 1);
    const auto back = to_floating(s);
    CHECK(back.distance(3, 7) == random_space(11, 15, RandomMode::UniformBoxL2).distance(3, 7));
  }

  TEST_CASE("Lemma 1 invariants on the exact suite") {
    const auto suite = repvote::test::invariant_suite(150, 60);
    REQUIRE(suite.size() >= 200);
    std::size_t checked = 0;
    for (const auto& s : suite) {
      const PointIndex o = one_median(s);
      const Rational co = social_cost(s, o);
      for (PointIndex i = 0; i < s.size(); ++i) {
        const Rational ci = social_cost(s, i);
        CHECK(co <= ci);
        CHECK(ci <= co + s.distance(i, o));
        CHECK(ci == layer_cake(s, i));
      }
      const auto radii = distinct_distances(s, o);
      for (std::size_t k = 0; k < radii.size(); ++k) {
        CHECK(co >= radii[k] * outside_mass(s, o, radii[k]));
        if (k > 0) CHECK(outside_mass(s, o, radii[k]) <= outside_mass(s, o, radii[k - 1]));
      }
      ++checked;
    }
    CHECK(checked == suite.size());
  }

  TEST_CASE("layer-cake identity in floating point") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto s = random_space(seed, 25, seed % 2 ? RandomMode::IidUnitIntervalDistances : RandomMode::UniformBoxL2);
      for (PointIndex i = 0; i < s.size(); ++i)
        CHECK(std::abs(social_cost(s, i) - layer_cake(s, i)) <= 1e-12);
    }
  }

  TEST_CASE("median is invariant under rescaling distances") {
    for (const auto& s : repvote::test::invariant_suite(40, 20)) {
      const std::size_t p = s.size();
      for (const Rational& c : {Rational(3, 7), Rational(5), Rational(1, 1000)}) {
        std::vector<Rational> matrix(s.matrix().begin(), s.matrix().end());
        for (auto& d : matrix) d *= c;
        const ExactMetricSpace scaled(std::vector<Rational>(s.masses().begin(), s.masses().end()), matrix);
        REQUIRE(scaled.size() == p);
        CHECK(one_median(scaled) == one_median(s));
      }
    }
  }

  TEST_CASE("index checks") {
    const auto s = line3();
    CHECK_THROWS_AS(social_cost(s, 3), std::out_of_range);
    CHECK_THROWS_AS(outside_mass(s, 7, Rational(1)), std::out_of_range);
  }
}
