#pragma once

#include "repvote/metric_space.hpp"

#include <string>
#include <vector>

namespace repvote::test {

inline std::string data_path(const std::string& name) { return std::string(REPVOTE_TEST_DATA) + "/" + name; }

/// Points at 0, 1, 3 on a line with masses 1/2, 3/10, 1/5.
inline ExactMetricSpace line3() {
  std::vector<Rational> mass{Rational(1, 2), Rational(3, 10), Rational(1, 5)};
  std::vector<Rational> pos{0, 1, 3};
  std::vector<Rational> matrix(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) matrix[i * 3 + j] = abs(pos[i] - pos[j]);
  return ExactMetricSpace(std::move(mass), std::move(matrix), "line3");
}

/// A dense space from explicit rows; masses are taken as given.
inline ExactMetricSpace exact_space(std::vector<Rational> mass, const std::vector<std::vector<Rational>>& rows) {
  std::vector<Rational> matrix;
  for (const auto& r : rows) matrix.insert(matrix.end(), r.begin(), r.end());
  return ExactMetricSpace(std::move(mass), std::move(matrix));
}

/// The exact spaces the invariant sweeps run over: exact images of seeded
/// random spaces in both modes plus the oracle's small integer instances.
std::vector<ExactMetricSpace> invariant_suite(std::size_t random_count, std::size_t oracle_count);

}  // namespace repvote::test
