#include "jobshop/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace jobshop {

namespace {

std::int64_t parse_int(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("sign without digits");
  std::int64_t value = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::invalid_argument("invalid digit in integer");
    value = value * 10 + (s[i] - '0');
  }
  return s[0] == '-' ? -value : value;
}

}  // namespace

std::string to_string(const Rational& r) {
  std::string out = std::to_string(r.numerator());
  if (r.denominator() != 1) {
    out += '/';
    out += std::to_string(r.denominator());
  }
  return out;
}

Rational rational_from_decimal(std::string_view text) {
  const size_t dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text));
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = text.substr(dot + 1);
  if (frac.empty()) return Rational(parse_int(whole));
  std::int64_t den = 1;
  for (size_t i = 0; i < frac.size(); ++i) {
    if (den > (INT64_MAX / 10)) throw std::invalid_argument("decimal too long");
    den *= 10;
  }
  const bool negative = !whole.empty() && whole[0] == '-';
  const std::int64_t whole_part = whole.empty() || whole == "-" || whole == "+"
                                      ? 0
                                      : parse_int(whole);
  const std::int64_t frac_part = parse_int(frac);
  Rational magnitude(std::abs(whole_part));
  magnitude += Rational(frac_part, den);
  return negative || whole_part < 0 ? -magnitude : magnitude;
}

Rational rational_from_string(std::string_view text) {
  const size_t slash = text.find('/');
  if (slash == std::string_view::npos) return rational_from_decimal(text);
  const std::int64_t num = parse_int(text.substr(0, slash));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(num, den);
}

}  // namespace jobshop
