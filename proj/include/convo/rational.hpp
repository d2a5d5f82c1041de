#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace convo {

using Int = boost::multiprecision::cpp_int;
// Exact arbitrary-precision rational. Always stored canonically:
// positive denominator, gcd(|num|, den) == 1.
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts "13/48", "-3", "0.6" (finite decimals convert exactly).
Rational rational_parse(const std::string& text);

// Canonical text form: "p/q", or just "p" when q == 1.
std::string rational_str(const Rational& r);

std::string rational_vec_str(const std::vector<Rational>& v);

inline Rational rat(long long num, long long den = 1) {
    if (den == 0) throw ParseError("zero denominator");
    return Rational(Int(num), Int(den));
}

}  // namespace convo
