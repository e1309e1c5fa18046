#pragma once
// Exact rationals. Backed by Boost.Multiprecision, which keeps values in
// lowest terms with a positive denominator.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "pvs/modular.hpp"

namespace pvs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) fail(ErrorKind::domain, "zero denominator");
  return Rational(num, den);
}

inline BigInt big_pow(i64 base, unsigned e) { return boost::multiprecision::pow(BigInt(base), e); }

/// p^{-k} as an exact rational.
inline Rational inv_pow(i64 p, unsigned k) { return Rational(BigInt(1), big_pow(p, k)); }

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parse "n" or "n/d".
inline Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return make_rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::parse, "not a rational: '" + s + "'");
  }
}

}  // namespace pvs
