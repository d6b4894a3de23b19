#include "wigcp/signed_log.hpp"

#include <algorithm>
#include <vector>

namespace wigcp {

SignedLog SignedLog::from_double(double x) {
  if (x == 0.0) return zero();
  return {x > 0 ? 1 : -1, std::log(std::abs(x))};
}

double SignedLog::to_double() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(logmag);
}

SignedLog operator*(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0 || b.sign == 0) return SignedLog::zero();
  return {a.sign * b.sign, a.logmag + b.logmag};
}

SignedLog operator/(const SignedLog& a, const SignedLog& b) {
  if (b.sign == 0) {
    return {a.sign, std::numeric_limits<double>::infinity()};
  }
  if (a.sign == 0) return SignedLog::zero();
  return {a.sign * b.sign, a.logmag - b.logmag};
}

SignedLog operator+(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const SignedLog& hi = a.logmag >= b.logmag ? a : b;
  const SignedLog& lo = a.logmag >= b.logmag ? b : a;
  const double r = std::exp(lo.logmag - hi.logmag);
  const double s = hi.sign == lo.sign ? 1.0 + r : 1.0 - r;
  if (s == 0.0) return SignedLog::zero();
  return {hi.sign, hi.logmag + std::log(s)};
}

SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }

SignedLog product(std::span<const SignedLog> factors) {
  std::vector<SignedLog> sorted(factors.begin(), factors.end());
  std::sort(sorted.begin(), sorted.end(), [](const SignedLog& x, const SignedLog& y) {
    if (x.logmag != y.logmag) return x.logmag < y.logmag;
    return x.sign < y.sign;
  });
  SignedLog out = SignedLog::one();
  for (const auto& f : sorted) out = out * f;
  return out;
}

SignedLog PhaseLog::to_signed() const {
  if (is_zero()) return SignedLog::zero();
  return {std::cos(phase) >= 0.0 ? 1 : -1, logmag};
}

}  // namespace wigcp
