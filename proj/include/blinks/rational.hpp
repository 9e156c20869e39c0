#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace blinks {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Renders "p/q", omitting "/q" when the denominator is 1.
inline std::string rational_str(const Rational& r) { return r.str(); }

// Accepts "p", "-p", "p/q" with arbitrary-precision integer parts.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational literal: '" + s + "'");
  }
}

inline Integer rational_num(const Rational& r) {
  return boost::multiprecision::numerator(r);
}

inline Integer rational_den(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

}  // namespace blinks
