#include "wigcp/hciz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wigcp/errors.hpp"
#include "wigcp/theory.hpp"

namespace wigcp {

namespace {

std::uint64_t pair_key(const Eigen::MatrixXcd& A, const Eigen::VectorXd& b) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](double x) {
    if (x == 0.0) x = 0.0;
    const auto* c = reinterpret_cast<const unsigned char*>(&x);
    for (std::size_t i = 0; i < sizeof x; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  };
  for (Eigen::Index i = 0; i < A.size(); ++i) {
    mix(A.data()[i].real());
    mix(A.data()[i].imag());
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) mix(b(i));
  return h == 0 ? 1 : h;
}

Eigen::VectorXd separated_uniform(int n, RngStream& rng) {
  Eigen::VectorXd v(n);
  for (;;) {
    for (int i = 0; i < n; ++i) v(i) = -1.5 + 3.0 * rng.uniform();
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) gap = std::min(gap, std::abs(v(i) - v(j)));
    if (gap >= 0.3) return v;
  }
}

}  // namespace

Eigen::MatrixXcd haar_unitary(int n, RngStream& rng) {
  if (n < 1) throw DomainError("haar_unitary: n must be >= 1");
  Eigen::MatrixXcd z(n, n);
  const double s = std::sqrt(0.5);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = {s * rng.normal(), s * rng.normal()};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd e = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return e.cwiseAbs().maxCoeff();
}

Estimate hciz_lhs(const Eigen::MatrixXcd& A, const Eigen::VectorXd& b, std::uint64_t samples,
                  std::uint64_t seed, const HaarOptions& options) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n || n < 1) {
    throw DomainError("hciz_lhs: A must be n x n and b of length n");
  }
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
    throw DomainError("hciz_lhs: A must be Hermitian");
  }
  const std::uint64_t key = pair_key(A, b);
  return run_chunked(
      samples, options.chunk_size, options.workers, [&](std::uint64_t chunk, std::uint64_t count) {
        RngStream rng(seed, chunk);
        SignedLogAccumulator acc;
        Eigen::MatrixXcd m(n, n);
        for (std::uint64_t s = 0; s < count; ++s) {
          double tr2;
          if (n == 1) {
            // U* B U = B exactly for a phase
            const double d = A(0, 0).real() - b(0);
            tr2 = d * d;
          } else {
            const Eigen::MatrixXcd u = haar_unitary(static_cast<int>(n), rng);
            m.noalias() = u.adjoint() * b.asDiagonal() * u;
            m = A - m;
            // tr(M^2) = sum |M_jk|^2 for Hermitian M
            tr2 = m.squaredNorm();
          }
          acc.add(SignedLog::from_log(-0.5 * tr2));
        }
        return Estimate::from_accumulator(acc, key, chunk);
      });
}

double hciz_rhs(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size();
  if (b.size() != n || n < 1) throw DomainError("hciz_rhs: a and b must have equal length");
  std::vector<double> av(a.data(), a.data() + n), bv(b.data(), b.data() + n);
  const SignedLog dd = vandermonde(av) * vandermonde(bv);
  if (dd.is_zero()) throw DomainError("hciz_rhs: coincident eigenvalues");
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l) {
      const double d = a(j) - b(l);
      k(j, l) = std::exp(-0.5 * d * d);
    }
  return (SignedLog::from_double(k.determinant()) / dd).to_double();
}

double hciz_rhs(const Eigen::MatrixXcd& A, const Eigen::VectorXd& b) {
  if (A.rows() == 1) return hciz_rhs(Eigen::VectorXd(Eigen::VectorXd::Constant(1, A(0, 0).real())), b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  return hciz_rhs(Eigen::VectorXd(es.eigenvalues()), b);
}

HciZPair random_hciz_pair(int n, RngStream& rng) {
  HciZPair p;
  p.a = separated_uniform(n, rng);
  p.b = separated_uniform(n, rng);
  const Eigen::MatrixXcd v = haar_unitary(n, rng);
  p.A = v * p.a.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  p.A = 0.5 * (p.A + p.A.adjoint()).eval();
  return p;
}

HciZReport hciz_ratio_constancy(int n, int trials, std::uint64_t samples, std::uint64_t seed,
                                const HaarOptions& options) {
  if (n < 1) throw DomainError("hciz_ratio_constancy: n must be >= 1");
  if (trials < 2) throw DomainError("hciz_ratio_constancy: need at least 2 trials");
  HciZReport rep;
  rep.n = n;
  rep.samples = samples;
  double wsum = 0, wxsum = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream pair_rng(derive_seed(seed, 2 * static_cast<std::uint64_t>(t)), 0);
    HciZPair p = random_hciz_pair(n, pair_rng);
    p.lhs = hciz_lhs(p.A, p.b, samples, derive_seed(seed, 2 * static_cast<std::uint64_t>(t) + 1),
                     options);
    p.rhs = n == 1 ? hciz_rhs(Eigen::VectorXd(Eigen::VectorXd::Constant(1, p.A(0, 0).real())), p.b)
                   : hciz_rhs(p.a, p.b);
    // ratio in the log domain so that equal inputs give exactly 1
    SignedLog rhs_log = SignedLog::from_double(p.rhs);
    if (n == 1) {
      const double d = p.A(0, 0).real() - p.b(0);
      rhs_log = SignedLog::from_log(-0.5 * d * d);
    }
    const SignedLog ratio = p.lhs.mean / rhs_log;
    p.ratio = ratio.to_double();
    p.ratio_stderr_rel = p.lhs.stderr_rel;
    if (p.ratio_stderr_rel > 0) {
      const double se = p.ratio_stderr_rel * std::abs(p.ratio);
      wsum += 1.0 / (se * se);
      wxsum += p.ratio / (se * se);
    }
    rep.pairs.push_back(std::move(p));
  }
  const auto [lo, hi] = std::minmax_element(
      rep.pairs.begin(), rep.pairs.end(),
      [](const HciZPair& x, const HciZPair& y) { return x.ratio < y.ratio; });
  if (wsum > 0) {
    rep.fitted_c = wxsum / wsum;
    rep.fitted_c_stderr = 1.0 / std::sqrt(wsum);
  } else {
    rep.fitted_c = lo->ratio;
  }
  rep.dispersion = hi->ratio / lo->ratio - 1.0;
  rep.threshold = 3.0 * std::hypot(lo->ratio_stderr_rel, hi->ratio_stderr_rel);
  rep.passed = rep.threshold > 0 ? rep.dispersion < rep.threshold : rep.dispersion == 0.0;
  return rep;
}

KsResult ks_uniform(std::vector<double> u) {
  if (u.empty()) throw std::invalid_argument("ks_uniform: no samples");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, (i + 1) / n - u[i], u[i] - i / n});
  }
  // asymptotic Kolmogorov distribution with the Stephens correction
  const double sq = std::sqrt(n);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  double p = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace wigcp
