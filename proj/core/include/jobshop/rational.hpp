#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace jobshop {

// Exact rational arithmetic for job weights, objectives and reward
// normalization. Completion times are integers, so all objective math
// stays exact as long as weights are modest rationals.
using Rational = boost::rational<std::int64_t>;

// "12", "-3/4". Integral values print without a denominator.
std::string to_string(const Rational& r);

// Accepts "12", "3/4" and plain decimals like "0.6" (parsed as 6/10).
// Throws std::invalid_argument on malformed input.
Rational rational_from_string(std::string_view text);

// Exact conversion of a decimal literal, e.g. "1.25" -> 5/4.
Rational rational_from_decimal(std::string_view text);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace jobshop
