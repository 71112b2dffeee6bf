#pragma once

#include "repvote/rational.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace repvote {

/// Per-position scores s(0..n-1), exact, non-increasing, s(0) = 1 and
/// s(n-1) = 0. The single-candidate vector [1] is the one exception to the
/// endpoint rule.
class ScoringVector {
 public:
  /// Validates the invariants; throws std::invalid_argument.
  explicit ScoringVector(std::vector<Rational> scores);

  static ScoringVector single_candidate();

  std::size_t size() const noexcept { return exact_.size(); }
  const Rational& operator[](std::size_t k) const { return exact_[k]; }
  std::span<const Rational> exact() const noexcept { return exact_; }
  std::span<const double> values() const noexcept { return values_; }

  template <class T>
  const T& at(std::size_t k) const;

  friend bool operator==(const ScoringVector& a, const ScoringVector& b) { return a.exact_ == b.exact_; }

 private:
  std::vector<Rational> exact_;
  std::vector<double> values_;
};

template <>
inline const double& ScoringVector::at<double>(std::size_t k) const {
  return values_[k];
}
template <>
inline const Rational& ScoringVector::at<Rational>(std::size_t k) const {
  return exact_[k];
}

/// Affine map of a non-increasing, non-constant array onto [1 .. 0].
/// Throws std::invalid_argument for constant or increasing input.
ScoringVector normalize(std::span<const Rational> raw);
ScoringVector normalize(std::span<const double> raw);

/// Raw per-n score rows read from a scoring-table file: lines
/// "n: v0 v1 ... v(n-1)", '#' starts a comment.
struct ScoringTable {
  std::string path;
  std::map<std::size_t, std::vector<Rational>> rows;
};

ScoringTable load_scoring_table(const std::filesystem::path& path);
ScoringTable parse_scoring_table(const std::string& text, const std::string& origin = "<string>");

namespace family {
struct Plurality {};
struct Veto {};
/// Ones on the first k positions.
struct KApproval {
  std::size_t k;
};
/// Ones on positions k <= floor(gamma * n).
struct GammaApproval {
  Rational gamma;
};
struct Borda {};
/// Raw 1/(k+1), normalized.
struct Dowdall {};
struct Table {
  std::shared_ptr<const ScoringTable> table;
};
}  // namespace family

/// A positional voting system: n -> scoring vector.
class RuleFamily {
 public:
  using Kind = std::variant<family::Plurality, family::Veto, family::KApproval, family::GammaApproval, family::Borda,
                            family::Dowdall, family::Table>;

  RuleFamily(Kind kind);  // NOLINT(google-explicit-constructor)
  template <class K>
    requires(!std::is_same_v<std::decay_t<K>, Kind> && std::is_constructible_v<Kind, K>)
  RuleFamily(K&& kind) : RuleFamily(Kind(std::forward<K>(kind))) {}  // NOLINT(google-explicit-constructor)

  /// CLI syntax: borda, plurality, veto, dowdall, kapproval:K,
  /// gapproval:NUM/DEN, table:PATH. Throws std::invalid_argument.
  static RuleFamily parse(std::string_view spec);

  const Kind& kind() const noexcept { return kind_; }
  bool is_table() const noexcept { return std::holds_alternative<family::Table>(kind_); }
  /// Round-trips through parse().
  std::string name() const;

 private:
  Kind kind_;
};

/// Exact vector for n candidates. n == 1 yields single_candidate().
ScoringVector score_vector(const RuleFamily& family, std::size_t n);

/// f(x) for the limit scoring rule; nullopt means undefined at this x
/// (Table families).
using LimitValue = std::optional<Rational>;

LimitValue limit_value(const RuleFamily& family, const Rational& x);

/// Every built-in family, in a fixed order, for sweeps.
std::vector<RuleFamily> builtin_families();

}  // namespace repvote
