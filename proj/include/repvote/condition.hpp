#pragma once

#include "repvote/scoring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace repvote {

/// Both sides of one inequality instance; it holds only when lhs > rhs.
struct ConditionSides {
  Rational lhs;
  Rational rhs;

  bool holds() const { return lhs > rhs; }
};

/// Exact prefix sums of a scoring vector over a common denominator, so each
/// condition evaluation costs O(1) big-integer operations.
class ScorePrefix {
 public:
  explicit ScorePrefix(const ScoringVector& vector);

  std::size_t size() const noexcept { return scaled_.size(); }
  /// Characterization inequality at y, Y = ceil(y (n-1)):
  ///   y * sum_{k<Y} (s(k) - s(Y))  >  (1-y) * sum_{k=n-Y}^{n-1} (1 - s(k)).
  ConditionSides sides(const Rational& y) const;
  /// Shifted variant at z, Z = ceil(z (n-1)), offset m (m + Z <= n-1):
  ///   z * sum_{k<Z} (s(m+k) - s(m+Z))  >  2(1-z) * sum_{k=n-Z}^{n-1} (1 - s(k)).
  ConditionSides shifted(const Rational& z, std::size_t m) const;

 private:
  // s(k) * denominator_, and prefix_[k] = sum_{j<k} scaled_[j].
  mpz_class denominator_;
  std::vector<mpz_class> scaled_;
  std::vector<mpz_class> prefix_;

  /// sum_{k=n-count}^{n-1} (1 - s(k)), scaled by denominator_.
  mpz_class tail_deficit(std::size_t count) const;
};

/// Y = ceil(y (n-1)); throws unless 1 <= Y <= n-1.
std::size_t condition_index(const Rational& y, std::size_t n);

/// Requires y in (0, 1) and n >= 2.
ConditionSides condition_sides(const ScoringVector& vector, const Rational& y);
/// Requires z in (1/2, 1) and m + Z <= n - 1.
ConditionSides shifted_sides(const ScoringVector& vector, const Rational& z, std::size_t m);

/// Largest admissible shift: min(floor((1-z) n), n-1-Z).
std::optional<std::size_t> max_shift(const Rational& z, std::size_t n);

enum class Verdict { CertifiedConstantWithinHorizon, FailsEverywhereOnGrid, Mixed };
enum class LimitClass { ConstantByLimit, SuperConstantByLimit, IndeterminateLimit };

const char* to_string(Verdict v);
const char* to_string(LimitClass c);

struct ConditionCell {
  Rational y;
  std::size_t n;
  ConditionSides sides;
};

struct ConditionReport {
  std::string family;
  std::vector<Rational> y_grid;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  /// Row-major over n, then y in grid order.
  std::vector<ConditionCell> cells;
  Verdict verdict = Verdict::Mixed;
  /// Set for CertifiedConstantWithinHorizon: the smallest grid y that holds
  /// for every n in [n0, n_max] with n0 <= n_max / 2, and that n0.
  std::optional<Rational> certified_y;
  std::size_t certified_n0 = 0;
  /// Per grid y, the smallest n0 with the inequality holding on all of
  /// [n0, n_max]; nullopt when it fails at n_max.
  std::vector<std::optional<std::size_t>> holding_from;
  /// The classifier, computed from the limit rule.
  LimitClass classifier = LimitClass::IndeterminateLimit;
};

/// Grid y values must lie in (0,1); n ranges over [n_min, n_max] with
/// n_min >= 2. Verdicts are relative to the horizon n_max only.
ConditionReport scan(const RuleFamily& family, const std::vector<Rational>& y_grid, std::size_t n_min,
                     std::size_t n_max);

/// {1/2, 2/3, 3/4, 7/8, 9/10, 19/20, 99/100}.
std::vector<Rational> default_y_grid();
inline constexpr std::size_t kDefaultHorizon = 2000;

/// Samples the limit rule at 1/8 .. 7/8: non-constant -> ConstantByLimit,
/// constant below 1 -> SuperConstantByLimit, constant 1 or undefined ->
/// IndeterminateLimit.
LimitClass classify_by_limit(const RuleFamily& family);

}  // namespace repvote
