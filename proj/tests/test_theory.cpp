#include <doctest.h>

#include <cmath>

#include "wigcp/errors.hpp"
#include "wigcp/theory.hpp"

using namespace wigcp;

TEST_CASE("semicircle density and alpha") {
  CHECK(rho_sc(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
  CHECK(rho_sc(2.0) == 0.0);
  CHECK(rho_sc(-2.0) == 0.0);
  CHECK(rho_sc(1.0) == doctest::Approx(0.2756644477).epsilon(1e-10));
  CHECK_THROWS_AS(rho_sc(2.1), DomainError);
  CHECK(alpha(0.0) == 0.0);
  CHECK(alpha(1.0) == doctest::Approx(1.8137993642).epsilon(1e-10));
  CHECK(alpha(-0.5) == -alpha(0.5));
  CHECK_THROWS_AS(alpha(2.0), DomainError);
}

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6).epsilon(1e-16));
  CHECK(sinc(M_PI / 2) == doctest::Approx(2.0 / M_PI).epsilon(1e-15));
  CHECK(std::abs(sinc(std::complex<double>(0.3, 0.0)) - sinc(0.3)) < 1e-15);
}

TEST_CASE("D_n leading form") {
  TheoryParams p{0.0, 4, 1, 0.0, {0.0, 0.0}};
  CHECK(D_n(0.0, p).to_double() == doctest::Approx(2 * M_PI * std::exp(-4.0)).epsilon(1e-14));
  CHECK(D_n(0.0, p).to_double() == doctest::Approx(0.1150805).epsilon(1e-6));
  TheoryParams p2 = p;
  p2.n = 2;
  CHECK(D_n(0.0, p2).logmag - D_n(0.0, p).logmag == doctest::Approx(2.0).epsilon(1e-14));
  TheoryParams r{std::sqrt(2.0), 1000, 1, 0.0, {0.0, 0.0}};
  CHECK(D_n(0.0, r).logmag == doctest::Approx(std::log(2 * M_PI)).epsilon(1e-12));
}

TEST_CASE("Vandermonde") {
  CHECK(vandermonde({0.3}).to_double() == 1.0);
  CHECK(vandermonde({}).to_double() == 1.0);
  CHECK(vandermonde({1, 2, 3}).to_double() == doctest::Approx(2.0));
  CHECK(vandermonde({1, 1, 3}).sign == 0);
  CHECK(vandermonde({2, 1}).to_double() == doctest::Approx(-1.0));
}

TEST_CASE("sine kernel ratio examples") {
  const SineKernelValue c = sine_kernel_ratio({0.4, 0.4});
  CHECK(c.value == 1.0);
  CHECK(sine_kernel_ratio({0.25, -0.25}).value == doctest::Approx(2.0 / M_PI).epsilon(1e-15));

  // limit of the 2x2 ratio at coincident points: det[[f, f_y], [f_x, f_xy]] = pi^2 / 3
  const SineKernelValue all = sine_kernel_ratio({0.1, 0.1, 0.1, 0.1});
  CHECK(all.confluent);
  CHECK(all.value == doctest::Approx(M_PI * M_PI / 3).epsilon(1e-12));
  const double e2 = sine_kernel_ratio({1e-2, 2e-2, 3e-2, 4e-2}).value;
  const double e3 = sine_kernel_ratio({1e-3, 2e-3, 3e-3, 4e-3}).value;
  CHECK(std::abs(e3 - all.value) < 1e-4 * all.value);
  CHECK(std::abs(e3 - all.value) < std::abs(e2 - all.value));
}

TEST_CASE("sine kernel ratio is shift invariant and block symmetric") {
  const std::vector<std::vector<double>> cases{
      {0.1, 0.9, -0.4, 0.35}, {0.0, 0.5, 1.0, 1.7, -0.3, 0.2}, {0.2, 0.2 + 1e-5, 0.8, 1.1}};
  for (const auto& xi : cases) {
    const double v = sine_kernel_ratio(xi).value;
    for (double c : {-3.0, 0.5, 7.25}) {
      std::vector<double> s = xi;
      for (double& x : s) x += c;
      CHECK(std::abs(sine_kernel_ratio(s).value - v) <= 1e-10 * std::max(1.0, std::abs(v)));
    }
    const std::size_t m = xi.size() / 2;
    std::vector<double> sw = xi;
    std::swap(sw[0], sw[1]);
    CHECK(sine_kernel_ratio(sw).value == doctest::Approx(v).epsilon(1e-10));
    sw = xi;
    std::swap(sw[m], sw[2 * m - 1]);
    CHECK(sine_kernel_ratio(sw).value == doctest::Approx(v).epsilon(1e-10));
  }
}

TEST_CASE("confluent evaluation is continuous") {
  // a pair in the first block straddles 0.2 with the given gap
  const auto at_gap = [](int m, double gap) {
    std::vector<double> xi{0.2 - gap / 2, 0.2 + gap / 2};
    for (int i = 2; i < m; ++i) xi.push_back(0.2 + 0.37 * i);
    for (int i = 0; i < m; ++i) xi.push_back(0.6 + 0.45 * i);
    return sine_kernel_ratio(xi).value;
  };
  for (int m : {2, 3}) {
    const double va = at_gap(m, 1e-4), vb = at_gap(m, 1e-6);
    CHECK(std::abs(va - vb) <= 1e-6 * std::abs(vb));
    CHECK(at_gap(m, 1e-10) == doctest::Approx(vb).epsilon(1e-9));
  }
}

TEST_CASE("direct and divided-difference routes agree at moderate gaps") {
  const std::vector<double> xi{0.1, 0.9, 0.45, -0.35};
  CHECK(sine_kernel_ratio_divided(xi) ==
        doctest::Approx(sine_kernel_ratio_direct(xi)).epsilon(1e-11));
  const std::vector<double> xi3{0.0, 0.6, 1.3, 0.2, 0.9, -0.5};
  CHECK(sine_kernel_ratio_divided(xi3) ==
        doctest::Approx(sine_kernel_ratio_direct(xi3)).epsilon(1e-10));
}

TEST_CASE("theorem 1 right-hand side") {
  for (double k4 : {0.0, -0.5, 0.3})
    for (double l0 : {0.0, 1.2}) {
      TheoryParams p{l0, 10, 1, k4, {0.3, -0.45}};
      CHECK(theorem1_rhs(p) == sinc(M_PI * 0.75));
    }
  const std::vector<double> xi{0.1, 0.9, 0.45, -0.35};
  TheoryParams g{0.0, 10, 2, 0.0, xi};
  CHECK(theorem1_rhs(g) == doctest::Approx(sine_kernel_ratio(xi).value / std::pow(M_PI, 4)));
  TheoryParams r{0.0, 10, 2, -0.5, xi};
  CHECK(theorem1_rhs(r) ==
        doctest::Approx(std::exp(-2.0) * sine_kernel_ratio(xi).value / std::pow(M_PI, 4)));
  TheoryParams bad{2.0, 10, 1, 0.0, {0, 0}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  TheoryParams short_xi{0.0, 10, 2, 0.0, {0, 0}};
  CHECK_THROWS_AS(short_xi.validate(), DomainError);
}

TEST_CASE("Gotze-Kosters asymptotic") {
  TheoryParams p{0.0, 2, 1, 0.0, {0, 0}};
  CHECK(gk_F2_asymptotic(p, 0.0, 0.0).to_double() ==
        doctest::Approx(2 * M_PI * std::exp(-2.0)).epsilon(1e-14));
  // with kappa4 = 0 it is sqrt(D(xi1) D(xi2)) sinc
  TheoryParams q{0.8, 6, 1, 0.0, {0, 0}};
  const double x1 = 0.3, x2 = -0.2;
  const double pred = std::exp(0.5 * (D_n(x1, q).logmag + D_n(x2, q).logmag)) *
                      sinc(M_PI * (x1 - x2));
  CHECK(gk_F2_asymptotic(q, x1, x2).to_double() == doctest::Approx(pred).epsilon(1e-13));
  TheoryParams neg = q, pos = q;
  neg.kappa4 = -0.5;
  pos.kappa4 = 0.5;
  CHECK(gk_F2_asymptotic(neg, x1, x2) == gk_F2_asymptotic(pos, x1, x2));
  CHECK(D_n(x1, pos).logmag - D_n(x1, neg).logmag == doctest::Approx(1.0).epsilon(1e-14));
}
