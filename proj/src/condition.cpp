#include "repvote/condition.hpp"

#include <algorithm>
#include <stdexcept>

namespace repvote {

ScorePrefix::ScorePrefix(const ScoringVector& vector) : denominator_(1) {
  const auto exact = vector.exact();
  for (const auto& s : exact) mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(), s.get_den_mpz_t());
  scaled_.reserve(exact.size());
  prefix_.reserve(exact.size() + 1);
  prefix_.emplace_back(0);
  for (const auto& s : exact) {
    mpz_class factor;
    mpz_divexact(factor.get_mpz_t(), denominator_.get_mpz_t(), s.get_den_mpz_t());
    scaled_.emplace_back(s.get_num() * factor);
    prefix_.emplace_back(prefix_.back() + scaled_.back());
  }
}

mpz_class ScorePrefix::tail_deficit(std::size_t count) const {
  const std::size_t n = scaled_.size();
  return mpz_class(count) * denominator_ - (prefix_[n] - prefix_[n - count]);
}

ConditionSides ScorePrefix::sides(const Rational& y) const {
  if (y <= 0 || y >= 1) throw std::invalid_argument("condition needs y in (0,1)");
  const std::size_t n = scaled_.size();
  const std::size_t big_y = condition_index(y, n);

  Rational lhs(prefix_[big_y] - mpz_class(big_y) * scaled_[big_y], denominator_);
  Rational rhs(tail_deficit(big_y), denominator_);
  lhs.canonicalize();
  rhs.canonicalize();
  return {y * lhs, (1 - y) * rhs};
}

ConditionSides ScorePrefix::shifted(const Rational& z, std::size_t m) const {
  if (z <= Rational(1, 2) || z >= 1) throw std::invalid_argument("shifted condition needs z in (1/2,1)");
  const std::size_t n = scaled_.size();
  const std::size_t big_z = condition_index(z, n);
  if (m + big_z > n - 1)
    throw std::out_of_range("shift m=" + std::to_string(m) + " overflows: m + Z = " + std::to_string(m + big_z) +
                            " > n-1 = " + std::to_string(n - 1));

  Rational lhs(prefix_[m + big_z] - prefix_[m] - mpz_class(big_z) * scaled_[m + big_z], denominator_);
  Rational rhs(tail_deficit(big_z), denominator_);
  lhs.canonicalize();
  rhs.canonicalize();
  return {z * lhs, 2 * (1 - z) * rhs};
}

std::size_t condition_index(const Rational& y, std::size_t n) {
  if (n < 2) throw std::invalid_argument("condition needs n >= 2");
  const std::size_t big_y = ceil_index(y * (n - 1));
  if (big_y < 1 || big_y > n - 1)
    throw std::out_of_range("ceil(y(n-1)) = " + std::to_string(big_y) + " outside [1, n-1]");
  return big_y;
}

ConditionSides condition_sides(const ScoringVector& vector, const Rational& y) { return ScorePrefix(vector).sides(y); }

ConditionSides shifted_sides(const ScoringVector& vector, const Rational& z, std::size_t m) {
  return ScorePrefix(vector).shifted(z, m);
}

std::optional<std::size_t> max_shift(const Rational& z, std::size_t n) {
  const std::size_t big_z = condition_index(z, n);
  if (big_z > n - 1) return std::nullopt;
  return std::min(floor_index((1 - z) * n), n - 1 - big_z);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedConstantWithinHorizon: return "CertifiedConstantWithinHorizon";
    case Verdict::FailsEverywhereOnGrid: return "FailsEverywhereOnGrid";
    case Verdict::Mixed: return "Mixed";
  }
  return "unknown";
}

const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::ConstantByLimit: return "ConstantByLimit";
    case LimitClass::SuperConstantByLimit: return "SuperConstantByLimit";
    case LimitClass::IndeterminateLimit: return "IndeterminateLimit";
  }
  return "unknown";
}

std::vector<Rational> default_y_grid() {
  return {Rational(1, 2), Rational(2, 3), Rational(3, 4), Rational(7, 8),
          Rational(9, 10), Rational(19, 20), Rational(99, 100)};
}

ConditionReport scan(const RuleFamily& family, const std::vector<Rational>& y_grid, std::size_t n_min,
                     std::size_t n_max) {
  if (y_grid.empty()) throw std::invalid_argument("scan needs a nonempty y grid");
  if (n_min < 2) throw std::invalid_argument("scan needs n_min >= 2");
  if (n_max < n_min) throw std::invalid_argument("scan needs n_max >= n_min");
  for (const auto& y : y_grid)
    if (y <= 0 || y >= 1) throw std::invalid_argument("grid value " + to_string(y) + " outside (0,1)");

  ConditionReport report;
  report.family = family.name();
  report.y_grid = y_grid;
  report.n_min = n_min;
  report.n_max = n_max;
  report.classifier = classify_by_limit(family);
  report.cells.reserve((n_max - n_min + 1) * y_grid.size());

  for (std::size_t n = n_min; n <= n_max; ++n) {
    const ScorePrefix prefix(score_vector(family, n));
    for (const auto& y : y_grid) report.cells.push_back({y, n, prefix.sides(y)});
  }

  const std::size_t width = y_grid.size();
  auto holds = [&](std::size_t n, std::size_t yi) { return report.cells[(n - n_min) * width + yi].sides.holds(); };

  report.holding_from.assign(width, std::nullopt);
  for (std::size_t yi = 0; yi < width; ++yi) {
    for (std::size_t n = n_max; n >= n_min && holds(n, yi); --n) {
      report.holding_from[yi] = n;
      if (n == n_min) break;
    }
  }

  for (std::size_t yi = 0; yi < width; ++yi) {
    const auto& from = report.holding_from[yi];
    if (!from || 2 * *from > n_max) continue;
    if (!report.certified_y || y_grid[yi] < *report.certified_y) {
      report.certified_y = y_grid[yi];
      report.certified_n0 = *from;
    }
  }

  if (report.certified_y) {
    report.verdict = Verdict::CertifiedConstantWithinHorizon;
  } else {
    bool any_late = false;
    for (const auto& cell : report.cells)
      if (2 * cell.n >= n_max && cell.sides.holds()) any_late = true;
    report.verdict = any_late ? Verdict::Mixed : Verdict::FailsEverywhereOnGrid;
  }
  return report;
}

LimitClass classify_by_limit(const RuleFamily& family) {
  std::optional<Rational> first;
  bool constant = true;
  for (int k = 1; k <= 7; ++k) {
    LimitValue f = limit_value(family, ratio(k, 8));
    if (!f) return LimitClass::IndeterminateLimit;
    if (!first) {
      first = *f;
    } else if (*f != *first) {
      constant = false;
    }
  }
  if (!constant) return LimitClass::ConstantByLimit;
  return *first < 1 ? LimitClass::SuperConstantByLimit : LimitClass::IndeterminateLimit;
}

}  // namespace repvote
