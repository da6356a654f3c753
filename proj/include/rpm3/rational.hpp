#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace rpm3 {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline long double to_long_double(const Rational& r) { return r.convert_to<long double>(); }
inline std::string to_string(const Rational& r) { return r.str(); }

/// Exact rational value of a finite double.
inline Rational from_double(double x) { return Rational(x); }

/// Smallest integer >= r.
inline BigInt ceil_rational(const Rational& r) {
  BigInt q = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
  if (Rational(q) < r) ++q;
  return q;
}

}  // namespace rpm3
