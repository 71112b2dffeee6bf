#include "repvote/space_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace repvote {

ParseError::ParseError(std::string file, std::size_t line, std::string field, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": field '" + field + "': " + message),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

SpaceValidationError::SpaceValidationError(const std::string& message, ValidationReport report)
    : std::runtime_error(message), report_(std::move(report)) {}

namespace {

class SpaceReader {
 public:
  SpaceReader(const YAML::Node& root, std::string origin) : root_(root), origin_(std::move(origin)) {}

  ExactMetricSpace read(const LoadOptions& options) {
    if (!root_.IsMap()) fail(root_, "<document>", "expected a mapping at top level");

    const YAML::Node version = require("version");
    if (scalar(version, "version") != "1") fail(version, "version", "unsupported version");

    std::string label;
    if (const YAML::Node l = root_["label"]) label = scalar(l, "label");

    const YAML::Node points_node = require("points");
    Rational points_value = number(points_node, "points");
    if (points_value.get_den() != 1 || points_value < 1)
      fail(points_node, "points", "expected a positive integer");
    const std::size_t p = points_value.get_num().get_ui();

    const YAML::Node mass_node = require("mass");
    std::vector<Rational> mass = row(mass_node, "mass", p);

    std::vector<Rational> matrix(p * p, Rational(0));
    const bool has_matrix = static_cast<bool>(root_["matrix"]);
    const bool has_coords = static_cast<bool>(root_["coords"]);
    if (has_matrix == has_coords) fail(root_, "matrix", "exactly one of 'matrix' or 'coords' is required");

    bool rounded = false;
    if (has_matrix) {
      read_matrix(root_["matrix"], p, matrix);
    } else {
      rounded = read_coords(root_["coords"], p, matrix);
    }

    ExactMetricSpace space(std::move(mass), std::move(matrix), std::move(label));
    if (options.validate) {
      ValidateOptions vo = default_validate_options<Rational>();
      if (rounded) vo.tolerance = 1e-12;
      ValidationReport report = validate(space, vo);
      if (!report.ok) {
        const Violation& first = report.violations.front();
        std::ostringstream msg;
        msg << origin_ << ": space violates metric axioms: " << report.violation_count << " violation(s), first "
            << to_string(first.kind) << " at (" << first.witness[0] << "," << first.witness[1] << ","
            << first.witness[2] << ") magnitude " << first.magnitude;
        throw SpaceValidationError(msg.str(), std::move(report));
      }
    }
    return space;
  }

 private:
  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& message) const {
    const auto mark = node.Mark();
    std::size_t line = mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
    throw ParseError(origin_, line, field, message);
  }

  YAML::Node require(const char* key) const {
    YAML::Node n = root_[key];
    if (!n) fail(root_, key, "missing required field");
    return n;
  }

  std::string scalar(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a scalar");
    return node.Scalar();
  }

  Rational number(const YAML::Node& node, const std::string& field) const {
    std::string text = scalar(node, field);
    try {
      return parse_rational(text);
    } catch (const std::invalid_argument& e) {
      fail(node, field, e.what());
    }
  }

  std::vector<Rational> row(const YAML::Node& node, const std::string& field, std::size_t expected) const {
    if (!node.IsSequence()) fail(node, field, "expected a sequence");
    if (node.size() != expected)
      fail(node, field, "expected " + std::to_string(expected) + " entries, found " + std::to_string(node.size()));
    std::vector<Rational> out;
    out.reserve(expected);
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

  void read_matrix(const YAML::Node& node, std::size_t p, std::vector<Rational>& matrix) const {
    if (!node.IsSequence()) fail(node, "matrix", "expected a sequence of rows");
    // P == 1 may be written as an empty sequence.
    if (node.size() != p - 1)
      fail(node, "matrix", "expected " + std::to_string(p - 1) + " lower-triangle rows, found " +
                               std::to_string(node.size()));
    for (std::size_t r = 0; r + 1 < p; ++r) {
      const std::size_t i = r + 1;
      std::vector<Rational> entries = row(node[r], "matrix[" + std::to_string(r) + "]", i);
      for (std::size_t j = 0; j < i; ++j) {
        matrix[i * p + j] = entries[j];
        matrix[j * p + i] = entries[j];
      }
    }
  }

  bool read_coords(const YAML::Node& node, std::size_t p, std::vector<Rational>& matrix) const {
    const std::string metric = scalar(require("metric"), "metric");
    if (metric != "L1" && metric != "L2" && metric != "Linf")
      fail(root_["metric"], "metric", "expected L1, L2 or Linf");
    if (!node.IsSequence() || node.size() != p) fail(node, "coords", "expected " + std::to_string(p) + " rows");

    std::vector<std::vector<Rational>> xs;
    std::size_t dim = 0;
    for (std::size_t i = 0; i < p; ++i) {
      const YAML::Node r = node[i];
      if (!r.IsSequence() || r.size() == 0) fail(r, "coords[" + std::to_string(i) + "]", "expected a nonempty row");
      if (i == 0) dim = r.size();
      xs.push_back(row(r, "coords[" + std::to_string(i) + "]", dim));
    }

    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        Rational d = 0;
        if (metric == "L2") {
          double squared = 0.0;
          for (std::size_t k = 0; k < dim; ++k) {
            Rational diff = xs[i][k] - xs[j][k];
            squared += Rational(diff * diff).get_d();
          }
          d = exact_from_double(std::sqrt(squared));
        } else {
          for (std::size_t k = 0; k < dim; ++k) {
            Rational diff = abs(xs[i][k] - xs[j][k]);
            if (metric == "L1") {
              d += diff;
            } else if (diff > d) {
              d = diff;
            }
          }
        }
        matrix[i * p + j] = d;
        matrix[j * p + i] = d;
      }
    return metric == "L2";
  }

  const YAML::Node& root_;
  std::string origin_;
};

std::string text_of(const Rational& v) { return to_string(v); }
std::string text_of(double v) { return shortest_decimal(v); }

// Decimal text of a rational whose denominator is 10^k.
std::string decimal_text(const Rational& v) {
  mpz_class num = v.get_num();
  const mpz_class& den = v.get_den();
  std::size_t places = 0;
  mpz_class scale = 1;
  while (scale < den) {
    scale *= 10;
    ++places;
  }
  if (scale != den) num *= scale / den;
  const bool negative = num < 0;
  std::string digits = mpz_class(abs(num)).get_str();
  if (places == 0) return (negative ? "-" : "") + digits;
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  digits.insert(digits.size() - places, ".");
  return (negative ? "-" : "") + digits;
}

// Floating masses are written as shortest decimals, with the last one
// replaced by 1 minus the others so the file sums to exactly 1.
std::vector<std::string> mass_texts(const BasicMetricSpace<Rational>& space) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < space.size(); ++i) out.push_back(to_string(space.mass(i)));
  return out;
}

std::vector<std::string> mass_texts(const BasicMetricSpace<double>& space) {
  std::vector<std::string> out;
  Rational rest = 1;
  for (std::size_t i = 0; i + 1 < space.size(); ++i) {
    out.push_back(shortest_decimal(space.mass(i)));
    rest -= parse_rational(out.back());
  }
  const std::string last = shortest_decimal(space.mass(space.size() - 1));
  out.push_back(rest >= 0 && std::abs(to_double(rest - parse_rational(last))) <= 1e-12 ? decimal_text(rest) : last);
  return out;
}

template <class T>
std::string format_impl(const BasicMetricSpace<T>& space) {
  if (!space.has_matrix()) throw std::invalid_argument("cannot save a derived-distance space");
  const std::size_t p = space.size();
  std::ostringstream out;
  out << "version: 1\n";
  out << "label: " << YAML::Dump(YAML::Node(space.label())) << "\n";
  out << "points: " << p << "\n";
  out << "mass: [";
  const auto masses = mass_texts(space);
  for (std::size_t i = 0; i < p; ++i) out << (i ? ", " : "") << masses[i];
  out << "]\n";
  out << "matrix:" << (p == 1 ? " []" : "") << "\n";
  for (std::size_t i = 1; i < p; ++i) {
    out << "  - [";
    for (std::size_t j = 0; j < i; ++j) out << (j ? ", " : "") << text_of(space.distance(i, j));
    out << "]\n";
  }
  return out.str();
}

void write_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

ExactMetricSpace parse_space(const std::string& text, const std::string& origin, const LoadOptions& options) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(origin, e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0, "<document>", e.msg);
  }
  return SpaceReader(root, origin).read(options);
}

ExactMetricSpace load_space(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open space file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << f.rdbuf();
  return parse_space(buffer.str(), path.string(), options);
}

std::string format_space(const ExactMetricSpace& space) { return format_impl(space); }
std::string format_space(const MetricSpace& space) { return format_impl(space); }

void save_space(const ExactMetricSpace& space, const std::filesystem::path& path) {
  write_file(format_space(space), path);
}

void save_space(const MetricSpace& space, const std::filesystem::path& path) {
  write_file(format_space(space), path);
}

}  // namespace repvote
