#include "repvote/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <system_error>

namespace repvote {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view digits) {
  mpz_class out;
  out.set_str(std::string(digits), 10);
  return out;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("malformed numeric literal '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad_literal(original);
    std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (exp_negative) exponent = -exponent;
  }

  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad_literal(original);
  if (!int_part.empty() && !all_digits(int_part)) bad_literal(original);
  if (!frac_part.empty() && !all_digits(frac_part)) bad_literal(original);

  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class numerator = parse_integer(digits);
  exponent -= static_cast<long>(frac_part.size());

  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational out = exponent >= 0 ? Rational(numerator * scale) : Rational(numerator, scale);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view original = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) bad_literal(original);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) bad_literal(original);
    mpz_class d = parse_integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(original) + "'");
    Rational out(parse_integer(num), d);
    out.canonicalize();
    return negative ? Rational(-out) : out;
  }
  return parse_decimal(text, original);
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) {
  // get_d truncates toward zero; step once away from zero when that is nearer.
  const double down = value.get_d();
  if (!std::isfinite(down) || Rational(down) == value) return down;
  const double up = std::nextafter(down, value > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(up)) return up;
  const Rational gap_down = abs(value - Rational(down));
  const Rational gap_up = abs(Rational(up) - value);
  if (gap_up < gap_down) return up;
  if (gap_down < gap_up) return down;
  std::uint64_t bits;
  std::memcpy(&bits, &down, sizeof bits);
  return bits & 1 ? up : down;
}

Rational exact_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  return Rational(value);
}

std::string shortest_decimal(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
  return std::string(buffer, end);
}

Rational floor_of(const Rational& value) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return Rational(q);
}

Rational ceil_of(const Rational& value) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return Rational(q);
}

std::size_t floor_index(const Rational& value) {
  Rational f = floor_of(value);
  if (f < 0) throw std::domain_error("negative index " + to_string(value));
  return static_cast<std::size_t>(f.get_num().get_ui());
}

std::size_t ceil_index(const Rational& value) {
  Rational c = ceil_of(value);
  if (c < 0) throw std::domain_error("negative index " + to_string(value));
  return static_cast<std::size_t>(c.get_num().get_ui());
}

}  // namespace repvote
