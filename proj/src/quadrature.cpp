#include "wigcp/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wigcp {

namespace {

// diag = recurrence a_j, off = sqrt(b_j); mu0 = integral of the weight
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0) {
  const Eigen::Index k = diag.size();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k, k);
  j.diagonal() = diag;
  if (k > 1) {
    j.diagonal(1) = off;
    j.diagonal(-1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  if (es.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigensolver failed");
  QuadratureRule r;
  r.nodes.resize(static_cast<std::size_t>(k));
  r.weights.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    r.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    r.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return r;
}

// Rules for even weights are exactly symmetric about 0.
QuadratureRule symmetrized(QuadratureRule r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    const double w = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

void check_order(int k) {
  if (k < 1) throw std::invalid_argument("quadrature order must be >= 1");
}

}  // namespace

QuadratureRule gauss_legendre(int k) {
  check_order(k);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd off(std::max(k - 1, 0));
  for (int i = 1; i < k; ++i) off(i - 1) = i / std::sqrt(4.0 * i * i - 1.0);
  return symmetrized(golub_welsch(diag, off, 2.0));
}

QuadratureRule gauss_hermite(int k) {
  check_order(k);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd off(std::max(k - 1, 0));
  for (int i = 1; i < k; ++i) off(i - 1) = std::sqrt(i / 2.0);
  return symmetrized(golub_welsch(diag, off, std::sqrt(std::numbers::pi)));
}

QuadratureRule gauss_laguerre(int k) {
  check_order(k);
  Eigen::VectorXd diag(k);
  Eigen::VectorXd off(std::max(k - 1, 0));
  for (int i = 0; i < k; ++i) diag(i) = 2.0 * i + 1.0;
  for (int i = 1; i < k; ++i) off(i - 1) = i;
  return golub_welsch(diag, off, 1.0);
}

QuadratureRule composite_legendre(double a, double b, int panels, int k) {
  if (panels < 1) throw std::invalid_argument("composite_legendre: panels must be >= 1");
  const QuadratureRule base = gauss_legendre(k);
  QuadratureRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < base.size(); ++i) {
      r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      r.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return r;
}

}  // namespace wigcp
