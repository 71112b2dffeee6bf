#pragma once

#include "repvote/rational.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace repvote {

using PointIndex = std::size_t;

/// Pure distance function for spaces too large to store as a matrix.
/// Implementations must be safe to call concurrently.
template <class T>
class DistanceFunction {
 public:
  virtual ~DistanceFunction() = default;
  virtual T operator()(PointIndex i, PointIndex j) const = 0;
};

/// A finite point set with probability masses (the voter distribution) and
/// a distance that is either a dense P x P matrix or a derived function.
/// Immutable after construction; construction does not validate.
template <class T>
class BasicMetricSpace {
 public:
  using value_type = T;

  BasicMetricSpace(std::vector<T> mass, std::vector<T> matrix, std::string label = {});
  BasicMetricSpace(std::vector<T> mass, std::shared_ptr<const DistanceFunction<T>> distance,
                   std::string label = {});

  std::size_t size() const noexcept { return mass_.size(); }
  const T& mass(PointIndex i) const { return mass_[i]; }
  std::span<const T> masses() const noexcept { return mass_; }

  T distance(PointIndex i, PointIndex j) const {
    return function_ ? (*function_)(i, j) : matrix_[i * mass_.size() + j];
  }

  bool has_matrix() const noexcept { return function_ == nullptr; }
  /// Row-major P x P; empty for derived spaces.
  std::span<const T> matrix() const noexcept { return matrix_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::vector<T> mass_;
  std::vector<T> matrix_;
  std::shared_ptr<const DistanceFunction<T>> function_;
  std::string label_;
};

using MetricSpace = BasicMetricSpace<double>;
using ExactMetricSpace = BasicMetricSpace<Rational>;

enum class ViolationKind { NegativeMass, MassNormalization, NegativeDistance, Asymmetry, NonzeroDiagonal, Triangle };

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Witness points; unused slots hold the first index repeated.
  std::array<PointIndex, 3> witness{};
  /// Size of the violation (e.g. d(i,k) - d(i,j) - d(j,k) for triangles).
  double magnitude = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  /// Total found; only the first kMaxRecorded are kept in `violations`.
  std::size_t violation_count = 0;
  bool exhaustive_triples = true;
  std::size_t triples_checked = 0;

  static constexpr std::size_t kMaxRecorded = 256;
};

struct ValidateOptions {
  std::size_t triple_cap = 300;
  std::size_t sampled_triples = 1'000'000;
  std::uint64_t seed = 0;
  /// Relative slack for inequalities. 0 means exact comparison.
  double tolerance = 0.0;
  double mass_tolerance = 1e-12;
};

/// Default options: exact comparisons for rationals, 1e-12 relative slack
/// for doubles.
template <class T>
ValidateOptions default_validate_options();

/// Checks nonnegativity, symmetry, zero diagonal, mass normalization and the
/// triangle inequality (all triples when P <= triple_cap, otherwise a seeded
/// sample of pairs and triples).
template <class T>
ValidationReport validate(const BasicMetricSpace<T>& space, const ValidateOptions& options = default_validate_options<T>());

/// Mass-weighted sum of distances from every point to `location`.
template <class T>
T social_cost(const BasicMetricSpace<T>& space, PointIndex location);

/// Lowest-index argmin of social cost over the points of the space.
template <class T>
PointIndex one_median(const BasicMetricSpace<T>& space);

/// 1 - q(B(center, r)), the mass strictly farther than r from center.
template <class T>
T outside_mass(const BasicMetricSpace<T>& space, PointIndex center, const T& r);

/// Sorted distinct values of d(center, .) over all points (always contains 0).
template <class T>
std::vector<T> distinct_distances(const BasicMetricSpace<T>& space, PointIndex center);

enum class RandomMode { UniformBoxL2, IidUnitIntervalDistances };

const char* to_string(RandomMode mode);
RandomMode parse_random_mode(std::string_view text);

/// Deterministic in (seed, P, mode). UniformBoxL2 places points uniformly in
/// the unit square; IidUnitIntervalDistances draws every pairwise distance
/// independently from [1, 2]. Masses are random positive weights normalized
/// to sum to 1.
MetricSpace random_space(std::uint64_t seed, std::size_t points, RandomMode mode);

MetricSpace to_floating(const ExactMetricSpace& space);

/// Exact rational image of a stored-matrix double space. Masses are divided
/// by their exact sum so they total exactly 1.
ExactMetricSpace to_exact(const MetricSpace& space);

void check_index(std::size_t size, PointIndex i, const char* what);

extern template class BasicMetricSpace<double>;
extern template class BasicMetricSpace<Rational>;

}  // namespace repvote
