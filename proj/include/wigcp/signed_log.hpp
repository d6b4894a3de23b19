#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace wigcp {

/// A real number stored as sign * exp(logmag).
///
/// Products of characteristic polynomials grow like exp(c n), so every
/// quantity that can leave the double range is carried in this form. The
/// zero value has sign 0 and logmag = -inf.
struct SignedLog {
  int sign = 0;
  double logmag = -std::numeric_limits<double>::infinity();

  static SignedLog zero() { return {}; }
  static SignedLog one() { return {1, 0.0}; }
  static SignedLog from_double(double x);
  static SignedLog from_log(double logmag, int sign = 1) { return {sign, logmag}; }

  bool is_zero() const { return sign == 0; }
  /// exp(logmag) fits in a double without overflow.
  bool representable() const { return sign == 0 || logmag < 709.0; }
  double to_double() const;

  SignedLog operator-() const { return {-sign, logmag}; }
  friend bool operator==(const SignedLog&, const SignedLog&) = default;
};

SignedLog operator*(const SignedLog& a, const SignedLog& b);
SignedLog operator/(const SignedLog& a, const SignedLog& b);
/// Max-shifted addition; finite for any finite logmag.
SignedLog operator+(const SignedLog& a, const SignedLog& b);
SignedLog operator-(const SignedLog& a, const SignedLog& b);

/// Product of factors, summed in a canonical (sorted) order so the result
/// is bit-identical under any permutation of the input.
SignedLog product(std::span<const SignedLog> factors);

/// Determinant of a complex matrix in polar-log form: exp(logmag + i*phase).
struct PhaseLog {
  double phase = 0.0;
  double logmag = -std::numeric_limits<double>::infinity();

  bool is_zero() const { return std::isinf(logmag) && logmag < 0; }
  /// Projects onto the real axis; meaningful when the value is known to be real.
  SignedLog to_signed() const;
};

}  // namespace wigcp
