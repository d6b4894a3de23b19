#pragma once

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wigcp/ensembles.hpp"

namespace wigcp {

/// Polynomial in the real degrees of freedom of W: w_jj, then (Re w_jk, Im w_jk)
/// for j < k. Exponents are packed 4 bits per variable.
class MomentPolynomial {
 public:
  explicit MomentPolynomial(int n);

  static MomentPolynomial constant(int n, std::complex<double> c);
  /// c * variable
  static MomentPolynomial variable(int n, int var, std::complex<double> c);

  int n() const { return n_; }
  int variable_count() const { return n_ * n_; }
  std::size_t term_count() const { return terms_.size(); }
  int exponent(std::uint64_t packed, int var) const;

  MomentPolynomial& operator+=(const MomentPolynomial& other);
  friend MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b);

  /// E over independent entries: zero if any exponent is odd, otherwise the
  /// product of the tabulated moments.
  std::complex<double> expectation(const EntryLaw& law, const EntryLaw& diag_law) const;

  const std::unordered_map<std::uint64_t, std::complex<double>>& terms() const { return terms_; }

  /// Index of w_jj and of Re/Im w_jk (j < k).
  int diag_var(int j) const { return j; }
  int re_var(int j, int k) const;
  int im_var(int j, int k) const { return re_var(j, k) + 1; }

 private:
  int n_;
  std::unordered_map<std::uint64_t, std::complex<double>> terms_;
};

/// det(lambda I - W / sqrt n) as a polynomial, by permutation expansion.
MomentPolynomial charpoly_polynomial(int n, double lambda);

/// E prod_j det(lambda_j - H) exactly, for n <= 3 and m <= 2.
double exact_F2m_small(int n, int m, const std::vector<double>& lambdas, const EntryLaw& law,
                       const EntryLaw& diag_law);

/// dF_2/dkappa4 at m = 1: finite difference between the Gaussian and
/// Rademacher laws, exact because F_2 is affine in mu4.
double oracle_kappa4_slope(int n, const std::vector<double>& lambdas);

}  // namespace wigcp
