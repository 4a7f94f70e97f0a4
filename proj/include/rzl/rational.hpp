#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace rzl {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational number, always in canonical form (gcd 1, positive denominator).
using Rational = boost::multiprecision::cpp_rational;

inline Integer rat_num(const Rational& q) { return numerator(q); }
inline Integer rat_den(const Rational& q) { return denominator(q); }

/// Canonical text form "p/q", denominator always present ("3" prints as "3/1").
std::string rat_to_string(const Rational& q);

/// Accepts "p", "p/q" and optional leading '-'; q must be nonzero.
/// Throws parse_error on malformed input.
Rational rat_from_string(std::string_view text);

inline bool in_unit_interval(const Rational& q) { return q >= 0 && q <= 1; }

// ============================================================================
// [0,1] kernel: the truncated operations every connective reduces to.
// ============================================================================

inline Rational unit_neg(const Rational& a) { return Rational(1) - a; }

inline Rational unit_oplus(const Rational& a, const Rational& b) {
  Rational s = a + b;
  return s > 1 ? Rational(1) : s;
}

inline Rational unit_odot(const Rational& a, const Rational& b) {
  Rational s = a + b - 1;
  return s < 0 ? Rational(0) : s;
}

inline Rational unit_imp(const Rational& a, const Rational& b) {
  Rational s = Rational(1) - a + b;
  return s > 1 ? Rational(1) : s;
}

inline const Rational& rat_min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational unit_dist(const Rational& a, const Rational& b) { return a < b ? b - a : a - b; }

/// max(0, a - b); the residual used by the scalar bookkeeping laws.
inline Rational unit_truncated_diff(const Rational& a, const Rational& b) {
  return a > b ? a - b : Rational(0);
}

/// 2^-k as an exact rational.
Rational pow2_neg(int k);

}  // namespace rzl
