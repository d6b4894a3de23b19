#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace wigcp {

/// Argument outside the domain of a formula (e.g. |lambda| > 2 for the semicircle).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Successive quadrature refinements disagree by more than the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double coarse, double fine)
      : std::runtime_error(what + " (coarse=" + fmt(coarse) + ", fine=" + fmt(fine) + ")"),
        coarse_(coarse),
        fine_(fine) {}

  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }

 private:
  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
  double coarse_;
  double fine_;
};

}  // namespace wigcp
