#include "wigcp/theory.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wigcp/errors.hpp"

namespace wigcp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double factorial(int k) {
  double r = 1.0;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

double min_gap(const std::vector<double>& v) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) g = std::min(g, std::abs(v[i] - v[j]));
  return g;
}

struct Circle {
  double center = 0.0;
  double radius = 1.0;
  double spread = 0.0;  // max distance of a node from the center
};

Circle enclosing_circle(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  Circle c;
  c.center = 0.5 * (*lo + *hi);
  c.spread = 0.5 * (*hi - *lo);
  c.radius = c.spread + 1.0;
  return c;
}

int node_count(const Circle& cx, const Circle& cy) {
  // aliasing of the entire kernel plus geometric decay (spread/radius)^N
  double n = 64.0 + std::ceil(4.0 * kPi * (cx.radius + cy.radius));
  for (const Circle* c : {&cx, &cy}) {
    if (c->spread > 0) n = std::max(n, std::ceil(40.0 / std::log(c->radius / c->spread)));
  }
  const int rounded = 8 * static_cast<int>(std::ceil(n / 8.0));
  return std::min(rounded, 4096);
}

// Row i of the result holds (z_a - c) / prod_{k<=i}(z_a - x_k) for each node z_a.
Eigen::MatrixXcd newton_weights(const std::vector<double>& x, const Circle& c, int nodes,
                                Eigen::VectorXcd& z) {
  const std::size_t m = x.size();
  z.resize(nodes);
  Eigen::MatrixXcd w(nodes, static_cast<Eigen::Index>(m));
  for (int a = 0; a < nodes; ++a) {
    const std::complex<double> e = std::polar(c.radius, 2.0 * kPi * a / nodes);
    z(a) = c.center + e;
    std::complex<double> acc = e;
    for (std::size_t i = 0; i < m; ++i) {
      acc /= (z(a) - x[i]);
      w(a, static_cast<Eigen::Index>(i)) = acc;
    }
  }
  return w;
}

double direct_error(const std::vector<double>& x, const std::vector<double>& y) {
  const double dd = std::abs((vandermonde(x) * vandermonde(y)).to_double());
  if (dd == 0.0) return std::numeric_limits<double>::infinity();
  return kEps * factorial(static_cast<int>(x.size())) / dd;
}

double divided_error(const std::vector<double>& x, const std::vector<double>& y) {
  const Circle cx = enclosing_circle(x);
  const Circle cy = enclosing_circle(y);
  return kEps * factorial(static_cast<int>(x.size())) * cx.radius * cy.radius *
         std::exp(kPi * (cx.radius + cy.radius));
}

void split_blocks(const std::vector<double>& xi, std::vector<double>& x, std::vector<double>& y) {
  if (xi.empty() || xi.size() % 2 != 0) {
    throw DomainError("sine kernel ratio needs 2m spectral offsets, got " +
                      std::to_string(xi.size()));
  }
  const std::size_t m = xi.size() / 2;
  x.assign(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(m));
  y.assign(xi.begin() + static_cast<std::ptrdiff_t>(m), xi.end());
}

}  // namespace

void TheoryParams::validate() const {
  if (!(std::abs(lambda0) < 2.0)) throw DomainError("lambda0 must lie in (-2, 2)");
  if (n < 1) throw DomainError("n must be >= 1");
  if (m < 1) throw DomainError("m must be >= 1");
  if (xi.size() != static_cast<std::size_t>(2 * m)) {
    throw DomainError("xi must have 2m = " + std::to_string(2 * m) + " entries");
  }
}

double rho_sc(double lambda) {
  if (!(std::abs(lambda) <= 2.0)) throw DomainError("rho_sc: |lambda| > 2");
  return std::sqrt(std::max(0.0, 4.0 - lambda * lambda)) / (2.0 * kPi);
}

double alpha(double lambda) {
  if (!(std::abs(lambda) < 2.0)) throw DomainError("alpha: |lambda| >= 2");
  return lambda / (2.0 * rho_sc(lambda));
}

double sinc(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

std::complex<double> sinc(std::complex<double> u) {
  if (std::abs(u) < 1e-3) {
    const std::complex<double> u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0;
  }
  return std::sin(u) / u;
}

SignedLog D_n(double xi, const TheoryParams& params) {
  const double l0 = params.lambda0;
  return SignedLog::from_log(std::log(2.0 * kPi) + params.n * (l0 * l0 - 2.0) / 2.0 +
                             2.0 * alpha(l0) * xi + params.kappa4);
}

SignedLog vandermonde(const std::vector<double>& values) {
  std::vector<SignedLog> factors;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      factors.push_back(SignedLog::from_double(values[j] - values[i]));
  return product(factors);
}

double sine_kernel_ratio_direct(const std::vector<double>& xi) {
  std::vector<double> x, y;
  split_blocks(xi, x, y);
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      k(i, j) = sinc(kPi * (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]));
  return k.determinant() / (vandermonde(x) * vandermonde(y)).to_double();
}

double sine_kernel_ratio_divided(const std::vector<double>& xi) {
  std::vector<double> x, y;
  split_blocks(xi, x, y);
  const Circle cx = enclosing_circle(x);
  const Circle cy = enclosing_circle(y);
  const int nodes = node_count(cx, cy);
  Eigen::VectorXcd z, w;
  const Eigen::MatrixXcd wz = newton_weights(x, cx, nodes, z);
  const Eigen::MatrixXcd ww = newton_weights(y, cy, nodes, w);
  Eigen::MatrixXcd f(nodes, nodes);
  for (int a = 0; a < nodes; ++a)
    for (int b = 0; b < nodes; ++b) f(a, b) = sinc(kPi * (z(a) - w(b)));
  // K_ij = f[x_1..x_i; y_1..y_j], the trapezoid rule on both circles
  const Eigen::MatrixXcd k =
      wz.transpose() * f * ww / (static_cast<double>(nodes) * static_cast<double>(nodes));
  return k.determinant().real();
}

SineKernelValue sine_kernel_ratio(const std::vector<double>& xi) {
  std::vector<double> x, y;
  split_blocks(xi, x, y);
  if (x.size() == 1) return {sinc(kPi * (x[0] - y[0])), false};
  const bool confluent = std::min(min_gap(x), min_gap(y)) < kConfluentGap;
  if (confluent || divided_error(x, y) < direct_error(x, y)) {
    return {sine_kernel_ratio_divided(xi), confluent};
  }
  return {sine_kernel_ratio_direct(xi), false};
}

double theorem1_prefactor(const TheoryParams& params) {
  const double mm1 = params.m * (params.m - 1.0);
  const double s = params.lambda0 * params.lambda0 - 2.0;
  return std::exp(mm1 * params.kappa4 * s * s / 2.0) * std::pow(kPi, -2.0 * mm1);
}

double theorem1_rhs(const TheoryParams& params) {
  params.validate();
  return theorem1_prefactor(params) * sine_kernel_ratio(params.xi).value;
}

SignedLog gk_F2_asymptotic(const TheoryParams& params, double xi1, double xi2) {
  const double l0 = params.lambda0;
  const SignedLog amp = SignedLog::from_log(std::log(2.0 * kPi) + params.n * (l0 * l0 - 2.0) / 2.0 +
                                            alpha(l0) * (xi1 + xi2) + std::abs(params.kappa4));
  return amp * SignedLog::from_double(sinc(kPi * (xi1 - xi2)));
}

SignedLog theorem1_normalizer(const TheoryParams& params) {
  params.validate();
  double logsum = params.m * params.m * std::log(params.n * rho_sc(params.lambda0));
  for (double x : params.xi) logsum += 0.5 * D_n(x, params).logmag;
  return SignedLog::from_log(logsum);
}

}  // namespace wigcp
