#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wigcp {

/// One verified claim: `measured op tolerance` must hold.
struct CheckRow {
  std::string name;
  double measured = 0.0;
  std::string op;  // "<=", "<", ">", "==" or "info"
  double tolerance = 0.0;
  bool passed = false;
};

bool all_passed(const std::vector<CheckRow>& rows);

/// Monte Carlo vs exact expansion on n in {1,2,3} (m = 1), plus n = 2, m = 2,
/// lambda pairs {(0,0), (0.5,0.5), (0.3,0.7)}, Gaussian and Rademacher laws.
/// Passes when |MC - exact| <= 4 standard errors.
std::vector<CheckRow> check_oracle(std::uint64_t samples, std::uint64_t seed, int workers,
                                   bool include_m2 = true);

/// Auxiliary-field representation vs exact expansion at n in {1,2,3} and
/// kappa4 in {0, -1/2} (relative 1e-3), the finite-n contour form vs the
/// auxiliary-field value at n = 3, and the contour sensitivity to (a, A).
std::vector<CheckRow> check_representation();

/// Cauchy determinant identity over `cauchy_instances` random instances with
/// m up to 4, and configuration sum vs theorem1_rhs for m in {1,2,3}.
std::vector<CheckRow> check_identity(std::uint64_t seed, int cauchy_instances = 100,
                                     int draws_per_m = 50);

/// Landscape lemma at lambda0 for each n.
std::vector<CheckRow> check_landscape(const std::vector<double>& lambda0s,
                                      const std::vector<int>& ns);

/// Ratio constancy for each n.
std::vector<CheckRow> check_hciz(const std::vector<int>& ns, int trials, std::uint64_t samples,
                                 std::uint64_t seed, int workers);

}  // namespace wigcp
