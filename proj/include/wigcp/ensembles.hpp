#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wigcp/rng.hpp"

namespace wigcp {

/// Highest moment order tabulated for every law (4 m_max with m_max = 4).
inline constexpr int kMaxMomentOrder = 16;

enum class LawKind { Gaussian, Rademacher, UniformScaled, TwoPointMixture };

/// Off-diagonal laws describe Re W_jk and Im W_jk (variance 1/2 each);
/// diagonal laws describe the real W_jj (variance 1).
enum class LawRole { OffDiagonalComponent, Diagonal };

struct LawParams {
  /// TwoPointMixture: probability mass on the inner pair +-a.
  double mixture_weight = 0.25;
  /// TwoPointMixture: target fourth moment of the off-diagonal component law.
  double mu4 = 0.75;
};

/// A symmetric real law with its analytic moment table.
///
/// moments[k] = E X^k for k = 0..kMaxMomentOrder; odd entries are zero.
/// kappa4 = mu4 - 3 mu2^2, which is mu4 - 3/4 for off-diagonal laws.
struct EntryLaw {
  LawKind kind = LawKind::Gaussian;
  LawRole role = LawRole::OffDiagonalComponent;
  LawParams params{};
  double scale = 0.0;   // Gaussian sigma, uniform half-width, Rademacher atom
  double inner = 0.0;   // mixture atoms +-inner (prob p) and +-outer (prob 1-p)
  double outer = 0.0;
  std::vector<double> moments;
  double kappa4 = 0.0;

  double mu(int k) const { return moments.at(static_cast<std::size_t>(k)); }
  double variance() const { return mu(2); }
  std::string name() const;

  double sample(RngStream& rng) const;
};

/// Off-diagonal component law with E X^2 = 1/2.
/// Throws std::invalid_argument for parameters that admit no such law.
EntryLaw make_entry_law(LawKind kind, const LawParams& params = {});

/// Same family rescaled to unit variance, for the real diagonal entries.
EntryLaw make_diagonal_law(LawKind kind, const LawParams& params = {});

/// Parses "gaussian", "rademacher", "uniform", "mixture".
LawKind parse_law_kind(const std::string& name);
std::string to_string(LawKind kind);

/// Dense Hermitian matrix; conjugate symmetry holds bit-for-bit.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Builds from the upper triangle (including the diagonal) of `m`; the
  /// strictly lower part of `m` is ignored and the diagonal's imaginary part dropped.
  static HermitianMatrix from_upper(const Eigen::MatrixXcd& m);

  int n() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  std::complex<double> operator()(int j, int k) const { return entries_(j, k); }

 private:
  Eigen::MatrixXcd entries_;
};

/// H = W / sqrt(n) with W_jk = X + iY (X, Y ~ law) above the diagonal and
/// real W_jj ~ diag_law.
HermitianMatrix sample_wigner(int n, const EntryLaw& law, const EntryLaw& diag_law,
                              RngStream& rng);

/// In-place variant that reuses the storage of `out`.
void sample_wigner_into(int n, const EntryLaw& law, const EntryLaw& diag_law, RngStream& rng,
                        Eigen::MatrixXcd& out);

struct MomentEstimate {
  int order = 0;
  double mean = 0.0;
  double stderr = 0.0;
};

/// Sample moments E X^k, k = 1..order, with standard errors.
std::vector<MomentEstimate> empirical_moments(const EntryLaw& law, int order,
                                              std::uint64_t sample_count, RngStream& rng);

}  // namespace wigcp
