#include "repvote/metric_space.hpp"

#include "repvote/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace repvote {

namespace {

double as_double(double v) { return v; }
double as_double(const Rational& v) { return v.get_d(); }

bool is_one(double total, double tolerance) { return std::abs(total - 1.0) <= tolerance; }
bool is_one(const Rational& total, double) { return total == 1; }

/// lhs > rhs, with relative slack when tolerance > 0.
bool exceeds(double lhs, double rhs, double tolerance) {
  return lhs > rhs + tolerance * std::max(1.0, std::abs(rhs));
}

bool exceeds(const Rational& lhs, const Rational& rhs, double tolerance) {
  if (tolerance == 0.0) return lhs > rhs;
  Rational slack = Rational(tolerance) * (abs(rhs) > 1 ? Rational(abs(rhs)) : Rational(1));
  return lhs > rhs + slack;
}

template <class T>
class Validator {
 public:
  Validator(const BasicMetricSpace<T>& space, const ValidateOptions& options)
      : space_(space), options_(options) {}

  ValidationReport run() {
    const std::size_t p = space_.size();
    check_masses();
    if (p <= options_.triple_cap) {
      for (PointIndex i = 0; i < p; ++i) {
        check_point(i);
        for (PointIndex j = i + 1; j < p; ++j) check_pair(i, j);
      }
      for (PointIndex i = 0; i < p; ++i)
        for (PointIndex j = i + 1; j < p; ++j)
          for (PointIndex k = j + 1; k < p; ++k) check_triple(i, j, k);
    } else {
      report_.exhaustive_triples = false;
      KeyedRng rng(hash_words(options_.seed, streams::kValidation), p);
      for (std::size_t s = 0; s < options_.sampled_triples; ++s) {
        PointIndex i = rng.below(p);
        PointIndex j = rng.below(p);
        PointIndex k = rng.below(p);
        if (s < p) check_point(s);
        if (i == j || j == k || i == k) {
          if (i != j) check_pair(i, j);
          continue;
        }
        check_pair(i, j);
        check_triple(i, j, k);
      }
    }
    report_.ok = report_.violation_count == 0;
    return std::move(report_);
  }

 private:
  void record(ViolationKind kind, std::array<PointIndex, 3> witness, double magnitude) {
    ++report_.violation_count;
    if (report_.violations.size() < ValidationReport::kMaxRecorded)
      report_.violations.push_back({kind, witness, magnitude});
  }

  void check_masses() {
    T total = 0;
    for (PointIndex i = 0; i < space_.size(); ++i) {
      const T& m = space_.mass(i);
      if (m < 0) record(ViolationKind::NegativeMass, {i, i, i}, as_double(m));
      total += m;
    }
    if (!is_one(total, options_.mass_tolerance))
      record(ViolationKind::MassNormalization, {0, 0, 0}, as_double(total) - 1.0);
  }

  void check_point(PointIndex i) {
    T d = space_.distance(i, i);
    if (d != 0) record(ViolationKind::NonzeroDiagonal, {i, i, i}, as_double(d));
  }

  void check_pair(PointIndex i, PointIndex j) {
    T a = space_.distance(i, j);
    T b = space_.distance(j, i);
    if (a < 0) record(ViolationKind::NegativeDistance, {i, j, j}, as_double(a));
    if (a != b) {
      T diff = a - b;
      record(ViolationKind::Asymmetry, {i, j, j}, std::abs(as_double(diff)));
    }
  }

  void check_triple(PointIndex i, PointIndex j, PointIndex k) {
    ++report_.triples_checked;
    T ij = space_.distance(i, j);
    T jk = space_.distance(j, k);
    T ik = space_.distance(i, k);
    triangle(ik, ij, jk, {i, j, k});
    triangle(ij, ik, jk, {i, k, j});
    triangle(jk, ij, ik, {j, i, k});
  }

  // Long side `direct` between witness[0] and witness[2] via witness[1].
  void triangle(const T& direct, const T& leg1, const T& leg2, std::array<PointIndex, 3> witness) {
    T detour = leg1 + leg2;
    if (exceeds(direct, detour, options_.tolerance)) {
      T gap = direct - detour;
      record(ViolationKind::Triangle, witness, as_double(gap));
    }
  }

  const BasicMetricSpace<T>& space_;
  const ValidateOptions& options_;
  ValidationReport report_;
};

}  // namespace

template <class T>
BasicMetricSpace<T>::BasicMetricSpace(std::vector<T> mass, std::vector<T> matrix, std::string label)
    : mass_(std::move(mass)), matrix_(std::move(matrix)), label_(std::move(label)) {
  if (matrix_.size() != mass_.size() * mass_.size())
    throw std::invalid_argument("distance matrix must be P x P");
}

template <class T>
BasicMetricSpace<T>::BasicMetricSpace(std::vector<T> mass, std::shared_ptr<const DistanceFunction<T>> distance,
                                      std::string label)
    : mass_(std::move(mass)), function_(std::move(distance)), label_(std::move(label)) {
  if (!function_) throw std::invalid_argument("null distance function");
}

template class BasicMetricSpace<double>;
template class BasicMetricSpace<Rational>;

void check_index(std::size_t size, PointIndex i, const char* what) {
  if (i >= size)
    throw std::out_of_range(std::string(what) + " index " + std::to_string(i) + " out of range (size " +
                            std::to_string(size) + ")");
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NegativeMass: return "negative-mass";
    case ViolationKind::MassNormalization: return "mass-normalization";
    case ViolationKind::NegativeDistance: return "negative-distance";
    case ViolationKind::Asymmetry: return "asymmetry";
    case ViolationKind::NonzeroDiagonal: return "nonzero-diagonal";
    case ViolationKind::Triangle: return "triangle";
  }
  return "unknown";
}

template <>
ValidateOptions default_validate_options<double>() {
  ValidateOptions o;
  o.tolerance = 1e-12;
  return o;
}

template <>
ValidateOptions default_validate_options<Rational>() {
  return ValidateOptions{};
}

template <class T>
ValidationReport validate(const BasicMetricSpace<T>& space, const ValidateOptions& options) {
  return Validator<T>(space, options).run();
}

template <class T>
T social_cost(const BasicMetricSpace<T>& space, PointIndex location) {
  check_index(space.size(), location, "location");
  T total = 0;
  for (PointIndex w = 0; w < space.size(); ++w) {
    if (space.mass(w) == 0) continue;
    total += space.mass(w) * space.distance(w, location);
  }
  return total;
}

template <class T>
PointIndex one_median(const BasicMetricSpace<T>& space) {
  if (space.size() == 0) throw std::invalid_argument("one_median of an empty space");
  PointIndex best = 0;
  T best_cost = social_cost(space, 0);
  for (PointIndex i = 1; i < space.size(); ++i) {
    T c = social_cost(space, i);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  return best;
}

template <class T>
T outside_mass(const BasicMetricSpace<T>& space, PointIndex center, const T& r) {
  check_index(space.size(), center, "center");
  T outside = 0;
  for (PointIndex w = 0; w < space.size(); ++w) {
    if (space.distance(center, w) > r) outside += space.mass(w);
  }
  return outside;
}

template <class T>
std::vector<T> distinct_distances(const BasicMetricSpace<T>& space, PointIndex center) {
  check_index(space.size(), center, "center");
  std::vector<T> out;
  out.reserve(space.size() + 1);
  out.push_back(T(0));
  for (PointIndex w = 0; w < space.size(); ++w) out.push_back(space.distance(center, w));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template ValidationReport validate(const MetricSpace&, const ValidateOptions&);
template ValidationReport validate(const ExactMetricSpace&, const ValidateOptions&);
template double social_cost(const MetricSpace&, PointIndex);
template Rational social_cost(const ExactMetricSpace&, PointIndex);
template PointIndex one_median(const MetricSpace&);
template PointIndex one_median(const ExactMetricSpace&);
template double outside_mass(const MetricSpace&, PointIndex, const double&);
template Rational outside_mass(const ExactMetricSpace&, PointIndex, const Rational&);
template std::vector<double> distinct_distances(const MetricSpace&, PointIndex);
template std::vector<Rational> distinct_distances(const ExactMetricSpace&, PointIndex);

const char* to_string(RandomMode mode) {
  switch (mode) {
    case RandomMode::UniformBoxL2: return "uniform-box-L2";
    case RandomMode::IidUnitIntervalDistances: return "iid-unit-interval-distances";
  }
  return "unknown";
}

RandomMode parse_random_mode(std::string_view text) {
  if (text == "uniform-box-L2") return RandomMode::UniformBoxL2;
  if (text == "iid-unit-interval-distances") return RandomMode::IidUnitIntervalDistances;
  throw std::invalid_argument("unknown random space mode '" + std::string(text) + "'");
}

MetricSpace random_space(std::uint64_t seed, std::size_t points, RandomMode mode) {
  if (points == 0) throw std::invalid_argument("random_space needs at least one point");
  KeyedRng rng(hash_words(seed, streams::kSpaceGen, static_cast<std::uint64_t>(mode)), points);

  std::vector<double> mass(points);
  double total = 0.0;
  for (auto& m : mass) {
    m = 0.25 + rng.uniform();
    total += m;
  }
  for (auto& m : mass) m /= total;

  std::vector<double> matrix(points * points, 0.0);
  if (mode == RandomMode::UniformBoxL2) {
    std::vector<std::array<double, 2>> xy(points);
    for (auto& p : xy) p = {rng.uniform(), rng.uniform()};
    for (std::size_t i = 0; i < points; ++i)
      for (std::size_t j = i + 1; j < points; ++j) {
        double d = std::hypot(xy[i][0] - xy[j][0], xy[i][1] - xy[j][1]);
        matrix[i * points + j] = matrix[j * points + i] = d;
      }
  } else {
    for (std::size_t i = 0; i < points; ++i)
      for (std::size_t j = i + 1; j < points; ++j) {
        double d = 1.0 + rng.uniform();
        matrix[i * points + j] = matrix[j * points + i] = d;
      }
  }
  std::string label = std::string("random:") + std::to_string(points) + "," + to_string(mode) + ",seed=" +
                      std::to_string(seed);
  return MetricSpace(std::move(mass), std::move(matrix), std::move(label));
}

MetricSpace to_floating(const ExactMetricSpace& space) {
  if (!space.has_matrix()) throw std::invalid_argument("to_floating needs a stored matrix");
  std::vector<double> mass;
  mass.reserve(space.size());
  for (const auto& m : space.masses()) mass.push_back(m.get_d());
  std::vector<double> matrix;
  matrix.reserve(space.matrix().size());
  for (const auto& d : space.matrix()) matrix.push_back(d.get_d());
  return MetricSpace(std::move(mass), std::move(matrix), space.label());
}

ExactMetricSpace to_exact(const MetricSpace& space) {
  if (!space.has_matrix()) throw std::invalid_argument("to_exact needs a stored matrix");
  std::vector<Rational> mass;
  mass.reserve(space.size());
  Rational total = 0;
  for (double m : space.masses()) {
    mass.push_back(exact_from_double(m));
    total += mass.back();
  }
  if (total > 0)
    for (auto& m : mass) m /= total;
  std::vector<Rational> matrix;
  matrix.reserve(space.matrix().size());
  for (double d : space.matrix()) matrix.push_back(exact_from_double(d));
  return ExactMetricSpace(std::move(mass), std::move(matrix), space.label());
}

}  // namespace repvote
