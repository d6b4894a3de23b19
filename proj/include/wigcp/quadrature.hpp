#pragma once

#include <vector>

namespace wigcp {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss rules from the Jacobi matrix of the three-term recurrence
/// (Golub-Welsch). All are exact for polynomials of degree <= 2k - 1
/// against their weight.
QuadratureRule gauss_legendre(int k);   // [-1, 1], weight 1
QuadratureRule gauss_hermite(int k);    // R, weight exp(-x^2)
QuadratureRule gauss_laguerre(int k);   // [0, inf), weight exp(-x)

/// k-point Gauss-Legendre on each of `panels` equal panels of [a, b].
QuadratureRule composite_legendre(double a, double b, int panels, int k);

}  // namespace wigcp
