#include <doctest.h>

#include <cmath>

#include "wigcp/errors.hpp"
#include "wigcp/hciz.hpp"

using namespace wigcp;

namespace {
Eigen::MatrixXcd diag_matrix(std::initializer_list<double> d) {
  Eigen::VectorXd v(d.size());
  int i = 0;
  for (double x : d) v(i++) = x;
  return Eigen::MatrixXcd(v.cast<std::complex<double>>().asDiagonal());
}
Eigen::VectorXd vec(std::initializer_list<double> d) {
  Eigen::VectorXd v(d.size());
  int i = 0;
  for (double x : d) v(i++) = x;
  return v;
}
}  // namespace

TEST_CASE("Haar unitaries are unitary") {
  RngStream rng(1, 0);
  for (int n : {1, 2, 3, 8, 20})
    for (int t = 0; t < 10; ++t) CHECK(unitarity_defect(haar_unitary(n, rng)) < 1e-12);
}

TEST_CASE("n = 1 Haar phases are uniform") {
  RngStream rng(2, 0);
  std::vector<double> u;
  for (int i = 0; i < 100000; ++i) {
    const auto z = haar_unitary(1, rng)(0, 0);
    CHECK(std::abs(std::abs(z) - 1.0) < 1e-14);
    u.push_back(std::arg(z) / (2 * M_PI) + 0.5);
  }
  CHECK(ks_uniform(u).p_value > 1e-3);
}

TEST_CASE("KS statistic detects a non-uniform sample") {
  std::vector<double> u;
  for (int i = 0; i < 1000; ++i) u.push_back(std::pow((i + 0.5) / 1000.0, 2));
  CHECK(ks_uniform(u).p_value < 1e-6);
}

TEST_CASE("Haar entries have E|U_jk|^2 = 1/n") {
  RngStream rng(3, 0);
  const int n = 3, N = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    const double x = std::norm(haar_unitary(n, rng)(0, 2));
    s += x;
    s2 += x * x;
  }
  const double mean = s / N, se = std::sqrt((s2 / N - mean * mean) / N);
  CHECK(std::abs(mean - 1.0 / n) < 5 * se);
}

TEST_CASE("HCIZ right-hand side") {
  CHECK(hciz_rhs(vec({0.3}), vec({1.0})) == doctest::Approx(std::exp(-0.245)).epsilon(1e-15));
  const double ref = (std::exp(-0.5) - std::exp(-2.5)) / 2.0;
  CHECK(hciz_rhs(vec({0.0, 1.0}), vec({0.0, 2.0})) == doctest::Approx(ref).epsilon(1e-14));
  // swap symmetry
  CHECK(hciz_rhs(vec({1.0, 0.0}), vec({2.0, 0.0})) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(hciz_rhs(vec({0.0, 2.0}), vec({0.0, 1.0})) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(hciz_rhs(diag_matrix({1.0, 0.0}), vec({0.0, 2.0})) == doctest::Approx(ref).epsilon(1e-12));
  CHECK_THROWS_AS(hciz_rhs(vec({1.0, 1.0}), vec({0.0, 2.0})), DomainError);
}

TEST_CASE("n = 1 left-hand side is exact") {
  const Estimate e = hciz_lhs(diag_matrix({0.7}), vec({-0.2}), 1000, 1);
  CHECK(e.value() == doctest::Approx(std::exp(-0.405)).epsilon(1e-15));
  CHECK(e.stderr_rel == 0.0);
  CHECK(e.value() / hciz_rhs(vec({0.7}), vec({-0.2})) == 1.0);
  const HciZReport r = hciz_ratio_constancy(1, 5, 1000, 1);
  CHECK(r.passed);
  CHECK(r.fitted_c == 1.0);
  CHECK(r.dispersion == 0.0);
}

TEST_CASE("B = 0 gives exp(-tr A^2 / 2) with no variance") {
  const Eigen::MatrixXcd A = diag_matrix({0.5, -1.0, 0.25});
  const Estimate e = hciz_lhs(A, Eigen::VectorXd::Zero(3), 2000, 4);
  CHECK(e.value() == doctest::Approx(std::exp(-0.5 * (0.25 + 1.0 + 0.0625))).epsilon(1e-13));
  CHECK(e.stderr_rel < 1e-13);
}

TEST_CASE("left-hand side is invariant under unitary conjugation of A") {
  RngStream rng(5, 0);
  const Eigen::MatrixXcd A = diag_matrix({0.9, -0.4, 0.1});
  const Eigen::MatrixXcd W = haar_unitary(3, rng);
  const Eigen::MatrixXcd B = W.adjoint() * A * W;
  const Eigen::MatrixXcd Bh = 0.5 * (B + B.adjoint());
  const Eigen::VectorXd b = vec({1.0, 0.0, -0.6});
  const Estimate x = hciz_lhs(A, b, 200000, 6);
  const Estimate y = hciz_lhs(Bh, b, 200000, 7);
  CHECK(std::abs(x.value() - y.value()) < 4 * std::hypot(x.stderr_abs(), y.stderr_abs()));
}

TEST_CASE("ratio constant is the product of factorials") {
  const HciZReport r2 = hciz_ratio_constancy(2, 4, 100000, 3);
  CHECK(std::abs(r2.fitted_c - 1.0) < 5 * r2.fitted_c_stderr);
  const HciZReport r3 = hciz_ratio_constancy(3, 4, 100000, 3);
  CHECK(std::abs(r3.fitted_c - 2.0) < 5 * r3.fitted_c_stderr);
  CHECK(r3.pairs.size() == 4);
  for (const auto& p : r3.pairs) {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        CHECK(std::abs(p.a(i) - p.a(j)) >= 0.3 - 1e-12);
        CHECK(std::abs(p.b(i) - p.b(j)) >= 0.3 - 1e-12);
      }
  }
}

TEST_CASE("ratio report is reproducible and worker independent") {
  HaarOptions four;
  four.workers = 4;
  four.chunk_size = 5000;
  HaarOptions one = four;
  one.workers = 1;
  const HciZReport a = hciz_ratio_constancy(2, 3, 20000, 9, one);
  const HciZReport b = hciz_ratio_constancy(2, 3, 20000, 9, four);
  CHECK(a.fitted_c == b.fitted_c);
  CHECK(a.dispersion == b.dispersion);
}
