#include "repvote/scoring.hpp"

#include "repvote/space_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace repvote {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::vector<Rational> indicator(std::size_t n, std::size_t last_one) {
  std::vector<Rational> v(n, Rational(0));
  for (std::size_t k = 0; k <= last_one && k < n; ++k) v[k] = 1;
  return v;
}

/// Endpoint normalization for 0/1 vectors: affine map when non-constant,
/// otherwise (all ones) the last position is forced to 0.
ScoringVector approval_vector(std::size_t n, std::size_t last_one) {
  std::vector<Rational> v = indicator(n, last_one);
  if (v.back() == v.front()) v.back() = 0;
  return ScoringVector(std::move(v));
}

std::size_t parse_count(std::string_view text, std::string_view spec) {
  Rational r;
  try {
    r = parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed family spec '" + std::string(spec) + "'");
  }
  if (r.get_den() != 1 || r < 0) throw std::invalid_argument("malformed family spec '" + std::string(spec) + "'");
  return r.get_num().get_ui();
}

}  // namespace

ScoringVector::ScoringVector(std::vector<Rational> scores) : exact_(std::move(scores)) {
  if (exact_.empty()) throw std::invalid_argument("scoring vector needs at least one position");
  if (exact_.front() != 1) throw std::invalid_argument("scoring vector must start at 1");
  if (exact_.size() > 1 && exact_.back() != 0) throw std::invalid_argument("scoring vector must end at 0");
  for (std::size_t k = 0; k + 1 < exact_.size(); ++k) {
    if (exact_[k] < exact_[k + 1])
      throw std::invalid_argument("scoring vector increases at position " + std::to_string(k + 1));
  }
  values_.reserve(exact_.size());
  for (const auto& s : exact_) values_.push_back(s.get_d());
}

ScoringVector ScoringVector::single_candidate() { return ScoringVector({Rational(1)}); }

ScoringVector normalize(std::span<const Rational> raw) {
  if (raw.size() < 2) throw std::invalid_argument("normalize needs at least two positions");
  for (std::size_t k = 0; k + 1 < raw.size(); ++k) {
    if (raw[k] < raw[k + 1]) throw std::invalid_argument("raw scores increase at position " + std::to_string(k + 1));
  }
  const Rational& top = raw.front();
  const Rational& bottom = raw.back();
  if (top == bottom) throw std::invalid_argument("constant raw scores cannot be normalized");
  const Rational span = top - bottom;
  std::vector<Rational> out;
  out.reserve(raw.size());
  for (const auto& v : raw) out.emplace_back((v - bottom) / span);
  return ScoringVector(std::move(out));
}

ScoringVector normalize(std::span<const double> raw) {
  std::vector<Rational> exact;
  exact.reserve(raw.size());
  for (double v : raw) exact.push_back(exact_from_double(v));
  return normalize(std::span<const Rational>(exact));
}

ScoringTable parse_scoring_table(const std::string& text, const std::string& origin) {
  ScoringTable table;
  table.path = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(origin, line_no, "n", "expected 'n: v0 ... v(n-1)'");
    std::size_t n = 0;
    try {
      Rational nr = parse_rational(line.substr(0, colon));
      if (nr.get_den() != 1 || nr < 1) throw std::invalid_argument("not a positive integer");
      n = nr.get_num().get_ui();
    } catch (const std::invalid_argument& e) {
      throw ParseError(origin, line_no, "n", e.what());
    }
    std::istringstream values(line.substr(colon + 1));
    std::vector<Rational> row;
    std::string token;
    while (values >> token) {
      try {
        row.push_back(parse_rational(token));
      } catch (const std::invalid_argument& e) {
        throw ParseError(origin, line_no, "v" + std::to_string(row.size()), e.what());
      }
    }
    if (row.size() != n)
      throw ParseError(origin, line_no, "n",
                       "row for n=" + std::to_string(n) + " has " + std::to_string(row.size()) + " values");
    if (!table.rows.emplace(n, std::move(row)).second)
      throw ParseError(origin, line_no, "n", "duplicate row for n=" + std::to_string(n));
  }
  return table;
}

ScoringTable load_scoring_table(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scoring table '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << f.rdbuf();
  return parse_scoring_table(buffer.str(), path.string());
}

RuleFamily::RuleFamily(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const family::KApproval& k) {
                   if (k.k < 1) throw std::invalid_argument("kapproval needs k >= 1");
                 },
                 [](const family::GammaApproval& g) {
                   if (g.gamma <= 0 || g.gamma >= 1) throw std::invalid_argument("gapproval needs gamma in (0,1)");
                 },
                 [](const family::Table& t) {
                   if (!t.table) throw std::invalid_argument("table family without a table");
                 },
                 [](const auto&) {},
             },
             kind_);
}

RuleFamily RuleFamily::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;
  auto no_arg = [&](Kind k) -> RuleFamily {
    if (has_arg) throw std::invalid_argument("family '" + std::string(head) + "' takes no argument");
    return RuleFamily(std::move(k));
  };

  if (head == "borda") return no_arg(family::Borda{});
  if (head == "plurality") return no_arg(family::Plurality{});
  if (head == "veto") return no_arg(family::Veto{});
  if (head == "dowdall") return no_arg(family::Dowdall{});
  if (head == "kapproval") {
    if (!has_arg) throw std::invalid_argument("kapproval needs ':K'");
    return RuleFamily(family::KApproval{parse_count(arg, spec)});
  }
  if (head == "gapproval") {
    if (!has_arg) throw std::invalid_argument("gapproval needs ':NUM/DEN'");
    Rational gamma;
    try {
      gamma = parse_rational(arg);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("malformed family spec '" + std::string(spec) + "'");
    }
    return RuleFamily(family::GammaApproval{gamma});
  }
  if (head == "table") {
    if (arg.empty()) throw std::invalid_argument("table needs ':PATH'");
    auto table = std::make_shared<const ScoringTable>(load_scoring_table(std::string(arg)));
    return RuleFamily(family::Table{std::move(table)});
  }
  throw std::invalid_argument("unknown family '" + std::string(spec) + "'");
}

std::string RuleFamily::name() const {
  return std::visit(overloaded{
                        [](const family::Plurality&) -> std::string { return "plurality"; },
                        [](const family::Veto&) -> std::string { return "veto"; },
                        [](const family::KApproval& k) { return "kapproval:" + std::to_string(k.k); },
                        [](const family::GammaApproval& g) { return "gapproval:" + to_string(g.gamma); },
                        [](const family::Borda&) -> std::string { return "borda"; },
                        [](const family::Dowdall&) -> std::string { return "dowdall"; },
                        [](const family::Table& t) { return "table:" + t.table->path; },
                    },
                    kind_);
}

ScoringVector score_vector(const RuleFamily& family, std::size_t n) {
  if (n == 0) throw std::invalid_argument("score_vector needs n >= 1");
  if (n == 1) return ScoringVector::single_candidate();
  return std::visit(
      overloaded{
          [n](const family::Plurality&) { return approval_vector(n, 0); },
          [n](const family::Veto&) { return approval_vector(n, n - 2); },
          [n](const family::KApproval& k) { return approval_vector(n, std::min(k.k - 1, n - 1)); },
          [n](const family::GammaApproval& g) { return approval_vector(n, floor_index(g.gamma * n)); },
          [n](const family::Borda&) {
            std::vector<Rational> v;
            v.reserve(n);
            for (std::size_t k = 0; k < n; ++k) v.emplace_back(Rational(n - 1 - k, n - 1));
            for (auto& s : v) s.canonicalize();
            return ScoringVector(std::move(v));
          },
          [n](const family::Dowdall&) {
            // (n/(k+1) - 1) / (n-1) = (n - k - 1) / ((k+1)(n-1))
            std::vector<Rational> v;
            v.reserve(n);
            for (std::size_t k = 0; k < n; ++k) {
              Rational s(mpz_class(n - k - 1), mpz_class(k + 1) * mpz_class(n - 1));
              s.canonicalize();
              v.push_back(std::move(s));
            }
            return ScoringVector(std::move(v));
          },
          [n](const family::Table& t) {
            auto it = t.table->rows.find(n);
            if (it == t.table->rows.end())
              throw std::invalid_argument("scoring table '" + t.table->path + "' has no row for n=" + std::to_string(n));
            try {
              return normalize(std::span<const Rational>(it->second));
            } catch (const std::invalid_argument& e) {
              throw std::invalid_argument("scoring table '" + t.table->path + "' row n=" + std::to_string(n) + ": " +
                                          e.what());
            }
          },
      },
      family.kind());
}

LimitValue limit_value(const RuleFamily& family, const Rational& x) {
  if (x < 0 || x > 1) throw std::invalid_argument("limit_value needs x in [0,1]");
  auto step = [](bool one) { return Rational(one ? 1 : 0); };
  return std::visit(overloaded{
                        [&](const family::Plurality&) -> LimitValue { return step(x == 0); },
                        [&](const family::Dowdall&) -> LimitValue { return step(x == 0); },
                        [&](const family::KApproval&) -> LimitValue { return step(x == 0); },
                        [&](const family::Veto&) -> LimitValue { return step(x < 1); },
                        [&](const family::GammaApproval& g) -> LimitValue { return step(x <= g.gamma); },
                        [&](const family::Borda&) -> LimitValue { return Rational(1 - x); },
                        [&](const family::Table&) -> LimitValue { return std::nullopt; },
                    },
                    family.kind());
}

std::vector<RuleFamily> builtin_families() {
  return {
      RuleFamily(family::Plurality{}), RuleFamily(family::Veto{}),
      RuleFamily(family::KApproval{3}), RuleFamily(family::GammaApproval{Rational(1, 2)}),
      RuleFamily(family::Borda{}),     RuleFamily(family::Dowdall{}),
  };
}

}  // namespace repvote
