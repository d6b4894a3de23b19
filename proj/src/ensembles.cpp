#include "wigcp/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace wigcp {

namespace {

constexpr double kHalf = 0.5;

double double_factorial_odd(int k) {
  // (k-1)!! for even k
  double r = 1.0;
  for (int j = k - 1; j > 1; j -= 2) r *= j;
  return r;
}

// Moments from squared atoms / variances, so that mu2 and mu4 are exact
// (sqrt(1/2)^2 is not 1/2 in floating point).
void fill_moments(EntryLaw& law, double variance, double inner_sq, double outer_sq) {
  law.moments.assign(kMaxMomentOrder + 1, 0.0);
  law.moments[0] = 1.0;
  for (int k = 2; k <= kMaxMomentOrder; k += 2) {
    const int h = k / 2;
    double mk = 0.0;
    switch (law.kind) {
      case LawKind::Gaussian:
        mk = double_factorial_odd(k) * std::pow(variance, h);
        break;
      case LawKind::Rademacher:
        mk = std::pow(variance, h);
        break;
      case LawKind::UniformScaled:
        mk = std::pow(3.0 * variance, h) / (k + 1);
        break;
      case LawKind::TwoPointMixture: {
        const double p = law.params.mixture_weight;
        mk = p * std::pow(inner_sq, h) + (1.0 - p) * std::pow(outer_sq, h);
        break;
      }
    }
    law.moments[static_cast<std::size_t>(k)] = mk;
  }
  law.kappa4 = law.mu(4) - 3.0 * law.mu(2) * law.mu(2);
}

EntryLaw build(LawKind kind, const LawParams& params, double variance, LawRole role) {
  EntryLaw law;
  law.kind = kind;
  law.role = role;
  law.params = params;
  const double sd = std::sqrt(variance);
  double inner_sq = 0.0, outer_sq = 0.0;
  switch (kind) {
    case LawKind::Gaussian:
    case LawKind::Rademacher:
      law.scale = sd;
      break;
    case LawKind::UniformScaled:
      law.scale = std::sqrt(3.0 * variance);
      break;
    case LawKind::TwoPointMixture: {
      // Squared atoms X = a^2, Y = b^2 solve p X + (1-p) Y = 1/2 and
      // p X^2 + (1-p) Y^2 = mu4, i.e. X - Y = sqrt((mu4 - 1/4) / (p (1-p))).
      const double p = params.mixture_weight;
      if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("mixture weight must lie in (0, 1)");
      }
      if (!(params.mu4 >= 0.25)) {
        throw std::invalid_argument("mixture mu4 must be >= 1/4 (Jensen bound)");
      }
      const double gap = std::sqrt((params.mu4 - 0.25) / (p * (1.0 - p)));
      const double a2 = kHalf + (1.0 - p) * gap;
      const double b2 = kHalf - p * gap;
      if (b2 < 0.0) {
        throw std::invalid_argument("no two-point mixture with weight " + std::to_string(p) +
                                    " reaches mu4 = " + std::to_string(params.mu4));
      }
      // Rescale from the variance-1/2 solution to the requested variance.
      inner_sq = a2 * (variance / kHalf);
      outer_sq = b2 * (variance / kHalf);
      law.inner = std::sqrt(inner_sq);
      law.outer = std::sqrt(outer_sq);
      break;
    }
  }
  fill_moments(law, variance, inner_sq, outer_sq);
  if (std::abs(law.variance() - variance) > 1e-12 * variance) {
    throw std::invalid_argument("law " + law.name() + " violates the variance constraint");
  }
  return law;
}

}  // namespace

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::Gaussian: return "gaussian";
    case LawKind::Rademacher: return "rademacher";
    case LawKind::UniformScaled: return "uniform";
    case LawKind::TwoPointMixture: return "mixture";
  }
  return "unknown";
}

LawKind parse_law_kind(const std::string& name) {
  if (name == "gaussian") return LawKind::Gaussian;
  if (name == "rademacher") return LawKind::Rademacher;
  if (name == "uniform") return LawKind::UniformScaled;
  if (name == "mixture") return LawKind::TwoPointMixture;
  throw std::invalid_argument("unknown law '" + name +
                              "' (expected gaussian, rademacher, uniform, mixture)");
}

std::string EntryLaw::name() const {
  std::string s = to_string(kind);
  if (kind == LawKind::TwoPointMixture) {
    s += "(p=" + std::to_string(params.mixture_weight) + ",mu4=" + std::to_string(params.mu4) +
         ")";
  }
  return s;
}

double EntryLaw::sample(RngStream& rng) const {
  switch (kind) {
    case LawKind::Gaussian:
      return scale * rng.normal();
    case LawKind::Rademacher:
      return (rng() >> 63) ? scale : -scale;
    case LawKind::UniformScaled:
      return scale * (2.0 * rng.uniform() - 1.0);
    case LawKind::TwoPointMixture: {
      const std::uint64_t bits = rng();
      const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
      const double atom = u < params.mixture_weight ? inner : outer;
      return (bits & 1u) ? atom : -atom;
    }
  }
  return 0.0;
}

EntryLaw make_entry_law(LawKind kind, const LawParams& params) {
  return build(kind, params, kHalf, LawRole::OffDiagonalComponent);
}

EntryLaw make_diagonal_law(LawKind kind, const LawParams& params) {
  return build(kind, params, 1.0, LawRole::Diagonal);
}

HermitianMatrix HermitianMatrix::from_upper(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: not square");
  HermitianMatrix h;
  h.entries_ = m;
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    h.entries_(j, j) = {m(j, j).real(), 0.0};
    for (Eigen::Index k = j + 1; k < n; ++k) h.entries_(k, j) = std::conj(m(j, k));
  }
  return h;
}

void sample_wigner_into(int n, const EntryLaw& law, const EntryLaw& diag_law, RngStream& rng,
                        Eigen::MatrixXcd& out) {
  if (n < 1) throw std::invalid_argument("sample_wigner: n must be >= 1");
  out.resize(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    out(j, j) = {s * diag_law.sample(rng), 0.0};
    for (int k = j + 1; k < n; ++k) {
      const double x = law.sample(rng);
      const double y = law.sample(rng);
      out(j, k) = {s * x, s * y};
      out(k, j) = {s * x, -(s * y)};
    }
  }
}

HermitianMatrix sample_wigner(int n, const EntryLaw& law, const EntryLaw& diag_law,
                              RngStream& rng) {
  Eigen::MatrixXcd m;
  sample_wigner_into(n, law, diag_law, rng, m);
  return HermitianMatrix::from_upper(m);
}

std::vector<MomentEstimate> empirical_moments(const EntryLaw& law, int order,
                                              std::uint64_t sample_count, RngStream& rng) {
  if (order < 1 || order > kMaxMomentOrder) {
    throw std::invalid_argument("empirical_moments: order out of range");
  }
  if (sample_count < 2) throw std::invalid_argument("empirical_moments: need >= 2 samples");
  std::vector<double> sum(static_cast<std::size_t>(order) + 1, 0.0);
  std::vector<double> sum_sq(sum.size(), 0.0);
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    const double x = law.sample(rng);
    double p = 1.0;
    for (int k = 1; k <= order; ++k) {
      p *= x;
      sum[static_cast<std::size_t>(k)] += p;
      sum_sq[static_cast<std::size_t>(k)] += p * p;
    }
  }
  const double cnt = static_cast<double>(sample_count);
  std::vector<MomentEstimate> out;
  for (int k = 1; k <= order; ++k) {
    const double mean = sum[static_cast<std::size_t>(k)] / cnt;
    const double var =
        std::max(0.0, (sum_sq[static_cast<std::size_t>(k)] - cnt * mean * mean) / (cnt - 1.0));
    out.push_back({k, mean, std::sqrt(var / cnt)});
  }
  return out;
}

}  // namespace wigcp
