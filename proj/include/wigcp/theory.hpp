#pragma once

#include <complex>
#include <vector>

#include "wigcp/signed_log.hpp"

namespace wigcp {

struct TheoryParams {
  double lambda0 = 0.0;
  int n = 1;
  int m = 1;
  double kappa4 = 0.0;
  std::vector<double> xi;

  /// Throws DomainError unless |lambda0| < 2, n, m >= 1 and xi has 2m entries.
  void validate() const;
};

/// Semicircle density (1/2pi) sqrt(4 - lambda^2); DomainError for |lambda| > 2.
double rho_sc(double lambda);

/// lambda / (2 rho_sc(lambda)); DomainError for |lambda| >= 2.
double alpha(double lambda);

/// sin(u)/u with the removable singularity filled in.
double sinc(double u);
std::complex<double> sinc(std::complex<double> u);

/// Leading form 2pi exp{n(lambda0^2 - 2)/2 + 2 alpha(lambda0) xi + kappa4}.
/// Uses lambda0, n and kappa4 from params; xi is the argument.
SignedLog D_n(double xi, const TheoryParams& params);

/// prod_{i<j} (x_j - x_i); 1 for fewer than two values.
SignedLog vandermonde(const std::vector<double>& values);

struct SineKernelValue {
  double value = 0.0;
  /// Some in-block gap fell below kConfluentGap and the limit was taken.
  bool confluent = false;
};

inline constexpr double kConfluentGap = 1e-8;

/// det[sinc(pi(xi_i - xi_{m+j}))]_{i,j<=m} / (Delta(xi_1..xi_m) Delta(xi_{m+1}..xi_{2m})).
///
/// Well conditioned for coincident or nearly coincident points: when the
/// plain quotient would lose precision the determinant of mixed divided
/// differences of the kernel is used instead, computed from contour
/// integrals around each block.
SineKernelValue sine_kernel_ratio(const std::vector<double>& xi);

/// The two evaluation routes, exposed for testing.
double sine_kernel_ratio_direct(const std::vector<double>& xi);
double sine_kernel_ratio_divided(const std::vector<double>& xi);

/// exp{m(m-1) kappa4 (lambda0^2 - 2)^2 / 2} pi^{-2m(m-1)} sine_kernel_ratio(xi).
double theorem1_prefactor(const TheoryParams& params);
double theorem1_rhs(const TheoryParams& params);

/// 2pi exp{n(lambda0^2-2)/2 + alpha(lambda0)(xi1+xi2) + |kappa4|} sinc(pi(xi1 - xi2)).
SignedLog gk_F2_asymptotic(const TheoryParams& params, double xi1, double xi2);

/// (n rho_sc(lambda0))^{m^2} prod_l sqrt(D_n(xi_l)): divides F_2m to give
/// the quantity whose limit is theorem1_rhs.
SignedLog theorem1_normalizer(const TheoryParams& params);

}  // namespace wigcp
