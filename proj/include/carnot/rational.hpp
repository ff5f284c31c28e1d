#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace carnot {

/// Arbitrary-precision exact rational (GMP backend, expression templates off
/// so it composes with Eigen and generic code without surprises).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Parses "p", "p/q", or a finite decimal such as "-0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, integers printed without a denominator.
std::string to_string(const Rational& r);

/// Always "p/q", denominator positive (the JSON coefficient format).
std::string to_fraction_string(const Rational& r);

/// Exact binary value of a finite double.
Rational from_double(double x);

/// Rational power with integer exponent (negative allowed for nonzero base).
Rational pow(const Rational& base, int exponent);

/// Returns the exact square root when r is the square of a rational.
bool exact_sqrt(const Rational& r, Rational& root);

template <class S>
S scalar_cast(const Rational& r);

template <>
inline Rational scalar_cast<Rational>(const Rational& r) {
  return r;
}

template <>
inline double scalar_cast<double>(const Rational& r) {
  return r.convert_to<double>();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

}  // namespace carnot
