#include "wigcp/detmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "wigcp/errors.hpp"
#include "wigcp/rng.hpp"
#include "wigcp/theory.hpp"

namespace wigcp {

namespace {

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  if (!m.allFinite()) throw DomainError("determinant of a matrix with non-finite entries");
}

// sign of the permutation of an LU factorization
template <class Lu>
int permutation_sign(const Lu& lu) {
  return static_cast<int>(lu.permutationP().determinant());
}

// FNV-1a over raw bytes
struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t len) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  }
  void f64(double x) {
    if (x == 0.0) x = 0.0;  // fold -0
    bytes(&x, sizeof x);
  }
  void i64(std::int64_t x) { bytes(&x, sizeof x); }
};

void hash_law(Fnv& f, const EntryLaw& law) {
  f.i64(static_cast<std::int64_t>(law.kind));
  f.i64(static_cast<std::int64_t>(law.role));
  f.f64(law.scale);
  f.f64(law.inner);
  f.f64(law.outer);
  f.f64(law.params.mixture_weight);
}

std::uint64_t lambdas_key(int n, std::vector<double> lambdas, const EntryLaw& law,
                          const EntryLaw& diag_law) {
  std::sort(lambdas.begin(), lambdas.end());
  Fnv f;
  f.i64(n);
  f.i64(static_cast<std::int64_t>(lambdas.size()));
  for (double x : lambdas) f.f64(x);
  hash_law(f, law);
  hash_law(f, diag_law);
  return f.h == 0 ? 1 : f.h;
}

}  // namespace

SignedLog signed_log_det(const Eigen::MatrixXd& m) {
  require_finite(m);
  if (m.rows() == 0) return SignedLog::one();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  int sign = permutation_sign(lu);
  double logmag = 0.0;
  const auto& f = lu.matrixLU();
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double p = f(i, i);
    if (p == 0.0) return SignedLog::zero();
    if (p < 0) sign = -sign;
    logmag += std::log(std::abs(p));
  }
  return {sign, logmag};
}

PhaseLog signed_log_det(const Eigen::MatrixXcd& m) {
  require_finite(m);
  if (m.rows() == 0) return {0.0, 0.0};
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  double phase = permutation_sign(lu) < 0 ? M_PI : 0.0;
  double logmag = 0.0;
  const auto& f = lu.matrixLU();
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const std::complex<double> p = f(i, i);
    if (p == 0.0) return PhaseLog{};
    phase += std::arg(p);
    logmag += std::log(std::abs(p));
  }
  return {std::remainder(phase, 2.0 * M_PI), logmag};
}

CharpolyWorkspace::CharpolyWorkspace(int n) : shifted_(n, n), lu_(n) {}

SignedLog CharpolyWorkspace::shifted_det(const Eigen::MatrixXcd& h, double lambda) {
  const Eigen::Index n = h.rows();
  shifted_ = -h;
  shifted_.diagonal().array() += lambda;
  if (!shifted_.allFinite()) throw DomainError("charpoly_product: non-finite entries");
  lu_.compute(shifted_);
  int sign = permutation_sign(lu_);
  // det is real for Hermitian h; accumulate the complex pivot product's phase
  // as a unit complex number to keep the sign exact when all pivots are real.
  std::complex<double> unit = 1.0;
  double logmag = 0.0;
  const auto& f = lu_.matrixLU();
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> p = f(i, i);
    const double a = std::abs(p);
    if (a == 0.0) return SignedLog::zero();
    unit *= p / a;
    logmag += std::log(a);
  }
  if (unit.real() < 0) sign = -sign;
  return {sign, logmag};
}

SignedLog charpoly_product(const Eigen::MatrixXcd& h, const std::vector<double>& lambdas,
                           CharpolyWorkspace& ws) {
  SignedLog factors[16];
  std::vector<SignedLog> big;
  SignedLog* out = factors;
  if (lambdas.size() > 16) {
    big.resize(lambdas.size());
    out = big.data();
  }
  for (std::size_t j = 0; j < lambdas.size(); ++j) out[j] = ws.shifted_det(h, lambdas[j]);
  return product(std::span<const SignedLog>(out, lambdas.size()));
}

SignedLog charpoly_product(const HermitianMatrix& h, const std::vector<double>& lambdas) {
  if (lambdas.size() % 2 != 0) {
    throw std::invalid_argument("charpoly_product: number of lambdas must be even");
  }
  CharpolyWorkspace ws(h.n());
  return charpoly_product(h.matrix(), lambdas, ws);
}

void SpectralConfig::validate() const {
  if (n < 1) throw DomainError("n must be >= 1");
  if (m < 1) throw DomainError("m must be >= 1");
  if (!(std::abs(lambda0) < 2.0)) throw DomainError("lambda0 must lie in (-2, 2)");
  if (xi.size() != static_cast<std::size_t>(2 * m)) {
    throw DomainError("xi must have 2m = " + std::to_string(2 * m) + " entries, got " +
                      std::to_string(xi.size()));
  }
  for (double l : lambdas()) {
    if (!(std::abs(l) < 2.0)) {
      throw DomainError("spectral point " + std::to_string(l) + " leaves (-2, 2) at n = " +
                        std::to_string(n));
    }
  }
}

std::vector<double> SpectralConfig::lambdas() const {
  const double scale = n * rho_sc(lambda0);
  std::vector<double> out;
  out.reserve(xi.size());
  for (double x : xi) out.push_back(lambda0 + x / scale);
  return out;
}

void SignedLogAccumulator::rescale_to(double shift) {
  if (count_ > 0) {
    const double r = std::exp(shift_ - shift);
    mean_ *= r;
    m2_ *= r * r;
  }
  shift_ = shift;
}

void SignedLogAccumulator::add(const SignedLog& x) {
  if (!x.is_zero() && x.logmag > shift_) rescale_to(x.logmag);
  if (count_ == 0 && x.is_zero()) shift_ = std::max(shift_, 0.0);
  const double v = x.is_zero() ? 0.0 : x.sign * std::exp(x.logmag - shift_);
  ++count_;
  const double delta = v - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (v - mean_);
}

void SignedLogAccumulator::merge(const SignedLogAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  SignedLogAccumulator b = other;
  const double shift = std::max(shift_, b.shift_);
  rescale_to(shift);
  b.rescale_to(shift);
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(b.count_);
  const double n = na + nb;
  const double delta = b.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += b.m2_ + delta * delta * na * nb / n;
  count_ += b.count_;
}

SignedLog SignedLogAccumulator::mean() const {
  if (count_ == 0 || mean_ == 0.0) return SignedLog::zero();
  return {mean_ > 0 ? 1 : -1, shift_ + std::log(std::abs(mean_))};
}

double SignedLogAccumulator::stderr_rel() const {
  if (count_ < 2) return std::numeric_limits<double>::infinity();
  if (mean_ == 0.0) return m2_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(count_);
  const double var = std::max(0.0, m2_ / (n - 1.0));
  return std::sqrt(var / n) / std::abs(mean_);
}

Estimate Estimate::from_accumulator(const SignedLogAccumulator& acc, std::uint64_t key,
                                    std::uint64_t first_stream) {
  Estimate e;
  e.acc = acc;
  e.key = key;
  e.first_stream = first_stream;
  e.count = acc.count();
  e.mean = acc.mean();
  e.stderr_rel = acc.stderr_rel();
  e.sign_unstable = acc.count() >= 2 && e.stderr_rel > 0.5;
  return e;
}

Estimate merge_estimates(const Estimate& a, const Estimate& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  if (a.key != 0 && b.key != 0 && a.key != b.key) {
    throw std::invalid_argument("merge_estimates: estimates come from different configurations");
  }
  const bool a_first = a.first_stream <= b.first_stream;
  const Estimate& lo = a_first ? a : b;
  const Estimate& hi = a_first ? b : a;
  SignedLogAccumulator acc = lo.acc;
  acc.merge(hi.acc);
  return Estimate::from_accumulator(acc, lo.key != 0 ? lo.key : hi.key, lo.first_stream);
}

Estimate reduce_estimates(const std::vector<Estimate>& parts) {
  if (parts.empty()) return {};
  std::vector<Estimate> level = parts;
  while (level.size() > 1) {
    std::vector<Estimate> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(merge_estimates(level[i], level[i + 1]));
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level.swap(next);
  }
  return level.front();
}

std::uint64_t config_key(const SpectralConfig& config, const EntryLaw& law,
                         const EntryLaw& diag_law) {
  return lambdas_key(config.n, config.lambdas(), law, diag_law);
}

Estimate estimate_F2m_at(int n, const std::vector<double>& lambdas, const EntryLaw& law,
                         std::uint64_t samples, std::uint64_t seed,
                         const EstimatorOptions& options) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (lambdas.empty() || lambdas.size() % 2 != 0) {
    throw std::invalid_argument("estimate_F2m: need a positive even number of spectral points");
  }
  if (law.role != LawRole::OffDiagonalComponent) {
    throw std::invalid_argument("estimate_F2m: law must be an off-diagonal component law");
  }
  const std::uint64_t key = lambdas_key(n, lambdas, law, options.diag_law);
  const EntryLaw& diag = options.diag_law;
  return run_chunked(samples, options.chunk_size, options.workers,
                     [&](std::uint64_t chunk, std::uint64_t count) {
                       RngStream rng(seed, chunk);
                       CharpolyWorkspace ws(n);
                       Eigen::MatrixXcd h(n, n);
                       SignedLogAccumulator acc;
                       for (std::uint64_t s = 0; s < count; ++s) {
                         sample_wigner_into(n, law, diag, rng, h);
                         acc.add(charpoly_product(h, lambdas, ws));
                       }
                       return Estimate::from_accumulator(acc, key, chunk);
                     });
}

Estimate estimate_F2m(const SpectralConfig& config, const EntryLaw& law, std::uint64_t samples,
                      std::uint64_t seed, const EstimatorOptions& options) {
  config.validate();
  return estimate_F2m_at(config.n, config.lambdas(), law, samples, seed, options);
}

}  // namespace wigcp
