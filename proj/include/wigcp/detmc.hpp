#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "wigcp/ensembles.hpp"
#include "wigcp/signed_log.hpp"

namespace wigcp {

/// Log-determinant of a square real matrix via LU with partial pivoting.
/// An exact zero pivot gives sign 0. Throws DomainError on non-finite input.
SignedLog signed_log_det(const Eigen::MatrixXd& m);

/// Complex variant: returns exp(logmag + i*phase).
PhaseLog signed_log_det(const Eigen::MatrixXcd& m);

/// Reusable workspace so the Monte Carlo loop does not allocate per sample.
class CharpolyWorkspace {
 public:
  explicit CharpolyWorkspace(int n = 0);
  /// det(lambda I - H) for Hermitian H; the result is real.
  SignedLog shifted_det(const Eigen::MatrixXcd& h, double lambda);

 private:
  Eigen::MatrixXcd shifted_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

/// prod_j det(lambda_j I - H). Bit-identical under any permutation of lambdas.
SignedLog charpoly_product(const HermitianMatrix& h, const std::vector<double>& lambdas);
SignedLog charpoly_product(const Eigen::MatrixXcd& h, const std::vector<double>& lambdas,
                           CharpolyWorkspace& ws);

/// (n, m, lambda0, xi) with lambda_j = lambda0 + xi_j / (n rho_sc(lambda0)).
struct SpectralConfig {
  int n = 1;
  int m = 1;
  double lambda0 = 0.0;
  std::vector<double> xi;

  /// Throws DomainError if sizes mismatch or some lambda_j leaves (-2, 2).
  void validate() const;
  std::vector<double> lambdas() const;
};

/// Streaming mean/variance of sign*exp(logmag) samples.
///
/// Values are held relative to exp(shift), where shift is the largest
/// logmag seen so far; when a larger one arrives the running mean is scaled
/// by r = exp(old - new) and M2 by r^2. Merging follows Chan et al.
class SignedLogAccumulator {
 public:
  void add(const SignedLog& x);
  void merge(const SignedLogAccumulator& other);

  std::uint64_t count() const { return count_; }
  SignedLog mean() const;
  /// Standard error of the mean divided by |mean|; infinite when the mean is 0.
  double stderr_rel() const;

 private:
  void rescale_to(double shift);

  std::uint64_t count_ = 0;
  double shift_ = -std::numeric_limits<double>::infinity();
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Estimate {
  SignedLog mean;
  double stderr_rel = 0.0;
  std::uint64_t count = 0;
  /// Fingerprint of (config, law); 0 marks an empty estimate that merges with anything.
  std::uint64_t key = 0;
  /// Smallest stream id that contributed; fixes the merge order.
  std::uint64_t first_stream = 0;
  /// |mean| < 2 stderr: the sign of the estimate is not resolved.
  bool sign_unstable = false;
  SignedLogAccumulator acc;

  double value() const { return mean.to_double(); }
  double stderr_abs() const { return stderr_rel * std::abs(value()); }

  static Estimate from_accumulator(const SignedLogAccumulator& acc, std::uint64_t key,
                                   std::uint64_t first_stream);
};

/// Order-insensitive: the operand with the smaller first_stream is always
/// merged first, so merge(a, b) and merge(b, a) are bit-identical.
/// Throws std::invalid_argument when both keys are non-zero and differ.
Estimate merge_estimates(const Estimate& a, const Estimate& b);

/// Deterministic pairwise tree reduction in the given order.
Estimate reduce_estimates(const std::vector<Estimate>& parts);

struct EstimatorOptions {
  int workers = 1;
  /// Samples per RNG stream; chunk c uses stream id c. Independent of workers.
  std::uint64_t chunk_size = 8192;
  /// Law of the real diagonal entries (variance 1).
  EntryLaw diag_law = make_diagonal_law(LawKind::Gaussian);
};

std::uint64_t config_key(const SpectralConfig& config, const EntryLaw& law,
                         const EntryLaw& diag_law);

/// Monte Carlo estimate of F_2m = E prod_j det(lambda_j - H).
/// The result depends on (config, law, samples, seed, chunk_size) only.
Estimate estimate_F2m(const SpectralConfig& config, const EntryLaw& law, std::uint64_t samples,
                      std::uint64_t seed, const EstimatorOptions& options = {});

/// Same with explicit lambdas (no spectral scaling), for small-n fixtures.
Estimate estimate_F2m_at(int n, const std::vector<double>& lambdas, const EntryLaw& law,
                         std::uint64_t samples, std::uint64_t seed,
                         const EstimatorOptions& options = {});

/// Runs `body(chunk_index, chunk_samples)` for every chunk on `workers`
/// threads and reduces the per-chunk estimates in chunk order.
template <class Body>
Estimate run_chunked(std::uint64_t samples, std::uint64_t chunk_size, int workers, Body body);

}  // namespace wigcp

#include "wigcp/detail/chunked.hpp"
