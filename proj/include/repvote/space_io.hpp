#pragma once

#include "repvote/metric_space.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace repvote {

/// Malformed space or table file. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::string field, const std::string& message);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

/// Well-formed file whose space violates the metric/mass axioms.
class SpaceValidationError : public std::runtime_error {
 public:
  SpaceValidationError(const std::string& message, ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

struct LoadOptions {
  bool validate = true;
};

/// Metric-space file (YAML):
///
///   version: 1
///   label: text
///   points: P
///   mass: [m0, m1, ...]            # P entries
///   matrix:                        # strictly lower triangle, row-major:
///     - [d10]                      #   row i lists d(i,0) .. d(i,i-1)
///     - [d20, d21]
///   # or, instead of matrix:
///   coords: [[x, y, ...], ...]     # P rows of equal dimension
///   metric: L1 | L2 | Linf
///
/// Numbers are decimal ("0.25", "1e-3") or rational ("3/4") literals and are
/// read exactly. L2 distances are rounded to the nearest double and
/// validated with a 1e-12 relative slack.
ExactMetricSpace load_space(const std::filesystem::path& path, const LoadOptions& options = {});
ExactMetricSpace parse_space(const std::string& text, const std::string& origin = "<string>",
                             const LoadOptions& options = {});

/// Writes the matrix form. Rational entries use the canonical "p/q" text,
/// double entries the shortest round-trip decimal.
std::string format_space(const ExactMetricSpace& space);
std::string format_space(const MetricSpace& space);
void save_space(const ExactMetricSpace& space, const std::filesystem::path& path);
void save_space(const MetricSpace& space, const std::filesystem::path& path);

}  // namespace repvote
