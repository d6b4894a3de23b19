#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "wigcp/detmc.hpp"
#include "wigcp/rng.hpp"

namespace wigcp {

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal moved into Q so that R_jj > 0.
Eigen::MatrixXcd haar_unitary(int n, RngStream& rng);

/// max |(U* U - I)_jk|
double unitarity_defect(const Eigen::MatrixXcd& u);

struct HaarOptions {
  int workers = 1;
  std::uint64_t chunk_size = 8192;
};

/// Monte Carlo over Haar U of exp{-tr(A - U* B U)^2 / 2}. A must be
/// Hermitian (so the integrand is real); B = diag(b).
Estimate hciz_lhs(const Eigen::MatrixXcd& A, const Eigen::VectorXd& b, std::uint64_t samples,
                  std::uint64_t seed, const HaarOptions& options = {});

/// det[exp{-(a_j - b_k)^2/2}] / (Delta(a) Delta(b)). DomainError if a or b repeats.
double hciz_rhs(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
/// Same with a taken as the eigenvalues of Hermitian A.
double hciz_rhs(const Eigen::MatrixXcd& A, const Eigen::VectorXd& b);

struct HciZPair {
  Eigen::MatrixXcd A;
  Eigen::VectorXd a;  // eigenvalues of A
  Eigen::VectorXd b;
  Estimate lhs;
  double rhs = 0.0;
  double ratio = 0.0;
  double ratio_stderr_rel = 0.0;
};

struct HciZReport {
  int n = 0;
  std::uint64_t samples = 0;
  std::vector<HciZPair> pairs;
  double fitted_c = 0.0;       // inverse-variance weighted mean of the ratios
  double fitted_c_stderr = 0.0;
  double dispersion = 0.0;     // max ratio / min ratio - 1
  double threshold = 0.0;      // 3 * combined relative stderr of the two extreme ratios
  bool passed = false;
};

/// Random Hermitian A = V diag(a) V* with Haar V, and diagonal B, with
/// eigenvalues in [-1.5, 1.5] at mutual distance >= 0.3.
HciZPair random_hciz_pair(int n, RngStream& rng);

/// Checks that lhs/rhs does not depend on (A, B). Pair p is drawn and
/// sampled from seeds derived from (seed, p).
HciZReport hciz_ratio_constancy(int n, int trials, std::uint64_t samples, std::uint64_t seed,
                                const HaarOptions& options = {});

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test against Uniform[0, 1).
KsResult ks_uniform(std::vector<double> u);

}  // namespace wigcp
