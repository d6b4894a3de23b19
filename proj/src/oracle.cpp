#include "wigcp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wigcp/errors.hpp"

namespace wigcp {

namespace {

constexpr int kBits = 4;
constexpr std::uint64_t kMask = (1u << kBits) - 1;

}  // namespace

MomentPolynomial::MomentPolynomial(int n) : n_(n) {
  if (n < 1 || n * n * kBits > 64) throw DomainError("MomentPolynomial: unsupported n");
}

MomentPolynomial MomentPolynomial::constant(int n, std::complex<double> c) {
  MomentPolynomial p(n);
  if (c != 0.0) p.terms_[0] = c;
  return p;
}

MomentPolynomial MomentPolynomial::variable(int n, int var, std::complex<double> c) {
  MomentPolynomial p(n);
  if (c != 0.0) p.terms_[std::uint64_t{1} << (kBits * var)] = c;
  return p;
}

int MomentPolynomial::re_var(int j, int k) const {
  if (j > k) std::swap(j, k);
  // off-diagonal pairs in row-major order after the n diagonal variables
  int idx = 0;
  for (int r = 0; r < j; ++r) idx += n_ - 1 - r;
  idx += k - j - 1;
  return n_ + 2 * idx;
}

int MomentPolynomial::exponent(std::uint64_t packed, int var) const {
  return static_cast<int>((packed >> (kBits * var)) & kMask);
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& other) {
  for (const auto& [k, c] : other.terms_) {
    auto& slot = terms_[k];
    slot += c;
  }
  return *this;
}

MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("MomentPolynomial: size mismatch");
  MomentPolynomial out(a.n_);
  const int vars = a.variable_count();
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      for (int v = 0; v < vars; ++v) {
        if (((ka >> (kBits * v)) & kMask) + ((kb >> (kBits * v)) & kMask) > kMask) {
          throw DomainError("MomentPolynomial: exponent overflow");
        }
      }
      out.terms_[ka + kb] += ca * cb;
    }
  }
  return out;
}

std::complex<double> MomentPolynomial::expectation(const EntryLaw& law,
                                                   const EntryLaw& diag_law) const {
  std::complex<double> sum = 0;
  // sorted for a reproducible summation order
  std::vector<std::uint64_t> keys;
  keys.reserve(terms_.size());
  for (const auto& kv : terms_) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t key : keys) {
    double moment = 1.0;
    for (int v = 0; v < variable_count() && moment != 0.0; ++v) {
      const int e = exponent(key, v);
      if (e % 2 == 1) {
        moment = 0.0;
      } else if (e > 0) {
        moment *= (v < n_ ? diag_law : law).mu(e);
      }
    }
    if (moment != 0.0) sum += terms_.at(key) * moment;
  }
  return sum;
}

MomentPolynomial charpoly_polynomial(int n, double lambda) {
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  MomentPolynomial proto(n);
  // entry (j, k) of lambda I - W/sqrt(n)
  auto entry = [&](int j, int k) {
    if (j == k) {
      MomentPolynomial e = MomentPolynomial::constant(n, lambda);
      e += MomentPolynomial::variable(n, proto.diag_var(j), -s);
      return e;
    }
    // W_jk = x + i y for j < k, and x - i y below the diagonal
    const double im_sign = j < k ? 1.0 : -1.0;
    MomentPolynomial e = MomentPolynomial::variable(n, proto.re_var(j, k), -s);
    e += MomentPolynomial::variable(n, proto.im_var(j, k), std::complex<double>(0, -s * im_sign));
    return e;
  };
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  MomentPolynomial det(n);
  do {
    int sign = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    MomentPolynomial term = MomentPolynomial::constant(n, sign);
    for (int i = 0; i < n; ++i) term = term * entry(i, perm[i]);
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

double exact_F2m_small(int n, int m, const std::vector<double>& lambdas, const EntryLaw& law,
                       const EntryLaw& diag_law) {
  if (n < 1 || n > 3 || m < 1 || m > 2) {
    throw DomainError("exact_F2m_small: supported sizes are n <= 3, m <= 2");
  }
  if (lambdas.size() != static_cast<std::size_t>(2 * m)) {
    throw DomainError("exact_F2m_small: need 2m spectral points");
  }
  // multiply in sorted order so the result is symmetric in the lambdas bit-for-bit
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  MomentPolynomial prod = MomentPolynomial::constant(n, 1.0);
  for (double l : sorted) prod = prod * charpoly_polynomial(n, l);
  return prod.expectation(law, diag_law).real();
}

double oracle_kappa4_slope(int n, const std::vector<double>& lambdas) {
  if (lambdas.size() != 2) throw DomainError("oracle_kappa4_slope: m = 1 only");
  const EntryLaw g = make_entry_law(LawKind::Gaussian);
  const EntryLaw r = make_entry_law(LawKind::Rademacher);
  const EntryLaw d = make_diagonal_law(LawKind::Gaussian);
  return (exact_F2m_small(n, 1, lambdas, g, d) - exact_F2m_small(n, 1, lambdas, r, d)) /
         (g.kappa4 - r.kappa4);
}

}  // namespace wigcp
