#include <doctest.h>

#include <cmath>
#include <random>

#include "wigcp/detmc.hpp"
#include "wigcp/errors.hpp"
#include "wigcp/oracle.hpp"
#include "wigcp/saddle.hpp"
#include "wigcp/theory.hpp"

using namespace wigcp;

namespace {

cplx fd2(double t, double l0, double h = 1e-3) {
  return (-phase_V(t + 2 * h, l0) + 16.0 * phase_V(t + h, l0) - 30.0 * phase_V(t, l0) +
          16.0 * phase_V(t - h, l0) - phase_V(t - 2 * h, l0)) /
         (12.0 * h * h);
}

cplx fd1(double t, double l0, double h = 1e-3) {
  return (-phase_V(t + 2 * h, l0) + 8.0 * phase_V(t + h, l0) - 8.0 * phase_V(t - h, l0) +
          phase_V(t - 2 * h, l0)) /
         (12.0 * h);
}

// F_2 from the contour form with the finite-n factor, at lambda_j = lambda0 + xi_j / (n rho)
double contour_exact_F2(int n, double l0, double x1, double x2) {
  ContourOptions o;
  o.finite_n_factor = true;
  // the cut around the branch point drops O(a^{n+1}) at lambda0 = 0
  ContourSpec spec;
  spec.a = 1e-6;
  return contour_F2_asymptotic(n, l0, 0.0, x1, x2, spec, o).F2.to_double();
}

}  // namespace

TEST_CASE("phase function") {
  CHECK(std::abs(phase_V(1.0, 0.0)) < 1e-15);
  for (double t : {0.1, 0.5, 1.7, 3.0, -0.8}) {
    const double ref = (t * t - 1.0 - std::log(t * t)) / 2.0;
    CHECK(std::abs(phase_V(t, 0.0).real() - ref) < 1e-14);
  }
  CHECK_THROWS_AS(phase_V(cplx(0.0, 0.5), 1.0), DomainError);
  const cplx t(0.4, -0.1);
  const cplx h(1e-6, 0.0);
  CHECK(std::abs((phase_V(t + h, 0.6) - phase_V(t - h, 0.6)) / (2e-6) - phase_V_prime(t, 0.6)) <
        1e-8);
}

TEST_CASE("saddle data examples") {
  const SaddleData s0 = saddle_data(0.0);
  CHECK(s0.x_plus == 1.0);
  CHECK(s0.x_minus == -1.0);
  CHECK(std::abs(s0.c_plus - cplx(2.0)) < 1e-15);
  CHECK(std::abs(s0.c_minus - cplx(2.0)) < 1e-15);
  CHECK(std::abs(s0.V_plus) < 1e-15);

  const SaddleData s1 = saddle_data(1.0);
  CHECK(s1.x_plus == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(s1.x_minus == doctest::Approx(-std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(std::abs(s1.c_plus - cplx(1.5, std::sqrt(3.0) / 2)) < 1e-14);
  CHECK(std::abs(s1.p_plus - cplx(std::sqrt(3.0) / 2, -0.5)) < 1e-15);

  const SaddleData s7 = saddle_data(0.7);
  CHECK(std::abs((s7.V_minus - s7.V_plus).real()) < 1e-14);
  CHECK_THROWS_AS(saddle_data(2.0), DomainError);
}

TEST_CASE("saddle invariants over a lambda0 grid") {
  for (double l0 : {-1.5, -0.6, 0.0, 0.3, 0.5, 1.0, 1.5, 1.9}) {
    const SaddleData s = saddle_data(l0);
    CHECK(s.V_plus_mismatch < 1e-12);
    CHECK(s.V_minus_mismatch < 1e-12);
    CHECK(std::abs(s.V_plus_direct.real()) < 1e-12);
    CHECK(std::abs(s.V_minus_direct.real()) < 1e-12);
    for (double x : {s.x_plus, s.x_minus}) {
      CHECK(std::abs(phase_V_prime(x, l0)) < 1e-14);
      CHECK(std::abs(fd1(x, l0)) < 1e-10);
    }
    CHECK(std::abs(fd2(s.x_plus, l0) - s.c_plus) < 1e-8);
    CHECK(std::abs(fd2(s.x_minus, l0) - s.c_minus) < 1e-8);
    CHECK(std::abs(s.c_plus - (1.0 + 1.0 / (s.p_plus * s.p_plus))) < 1e-14);
  }
}

TEST_CASE("landscape lemma") {
  for (double l0 : {0.0, 0.5, 1.0, 1.5})
    for (int n : {64, 256}) {
      const LandscapeReport r = verify_landscape(l0, n);
      CHECK_MESSAGE(r.passed, "lambda0 = " << l0 << " n = " << n);
      CHECK(r.min_location_error <= 1e-4);
      CHECK(r.re_V_at_saddles < 1e-12);
      CHECK(r.V2_minus_c < 1e-8);
      CHECK(r.fitted_C > 0.0);
    }
  const LandscapeReport r0 = verify_landscape(0.0, 64);
  CHECK(r0.re_V2_minus_quadratic < 1e-8);
}

TEST_CASE("exact representation examples") {
  const EntryLaw g = make_entry_law(LawKind::Gaussian);
  const EntryLaw r = make_entry_law(LawKind::Rademacher);
  CHECK(exact_F2_representation(1, 0.0, 0.0, g).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact_F2_representation(1, 0.0, 0.0, r).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact_F2_representation(2, 0.0, 0.0, g).value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(exact_F2_representation(2, 0.0, 0.0, r).value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(exact_F2_representation_kappa(3, 0.3, 0.7, 0.0).value ==
        doctest::Approx(0.421561).epsilon(1e-12));
}

TEST_CASE("exact representation matches the moment oracle and is symmetric") {
  const EntryLaw diag = make_diagonal_law(LawKind::Gaussian);
  for (LawKind k : {LawKind::Gaussian, LawKind::Rademacher}) {
    const EntryLaw law = make_entry_law(k);
    for (int n : {1, 2, 3})
      for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 0.5}, {0.3, 0.7}, {-1.1, 0.4}}) {
        const ExactRepresentation e = exact_F2_representation(n, a, b, law);
        const double o = exact_F2m_small(n, 1, {a, b}, law, diag);
        CHECK(e.value == doctest::Approx(o).epsilon(1e-12));
        CHECK(std::abs(e.imag) < 1e-12);
        CHECK(exact_F2_representation(n, b, a, law).value ==
              doctest::Approx(e.value).epsilon(1e-14));
      }
  }
}

TEST_CASE("exact representation agrees with Monte Carlo up to n = 4") {
  for (LawKind k : {LawKind::Gaussian, LawKind::Rademacher})
    for (int n : {1, 2, 3, 4}) {
      const EntryLaw law = make_entry_law(k);
      const Estimate e = estimate_F2m_at(n, {0.2, 0.6}, law, 200000, 100 + n);
      const double x = exact_F2_representation(n, 0.2, 0.6, law).value;
      CHECK(std::abs(e.value() - x) < 4.0 * e.stderr_abs());
    }
}

TEST_CASE("finite-n contour form is exact at kappa4 = 0") {
  const EntryLaw g = make_entry_law(LawKind::Gaussian);
  for (int n : {2, 3, 4, 5})
    for (double l0 : {0.0, 0.5, -1.2}) {
      const double x1 = 0.35, x2 = -0.2;
      const double nr = n * rho_sc(l0);
      const double ref = exact_F2_representation(n, l0 + x1 / nr, l0 + x2 / nr, g).value;
      CHECK(contour_exact_F2(n, l0, x1, x2) == doctest::Approx(ref).epsilon(1e-9));
    }
  // coincident points
  const double nr = 3 * rho_sc(0.5);
  const double ref = exact_F2_representation(3, 0.5 + 0.1 / nr, 0.5 + 0.1 / nr, g).value;
  CHECK(contour_exact_F2(3, 0.5, 0.1, 0.1) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("contour form symmetry and parameter sensitivity") {
  for (double k4 : {0.0, -0.5}) {
    const ContourResult a = contour_F2_asymptotic(32, 1.0, k4, 0.3, -0.2);
    const ContourResult b = contour_F2_asymptotic(32, 1.0, k4, -0.2, 0.3);
    CHECK(a.normalized == b.normalized);
    CHECK(a.imag_rel < 1e-8);
  }
  const SensitivityReport s = contour_sensitivity(64, 0.0, 0.0, 0.25, -0.25);
  CHECK(s.passed);
  CHECK(s.rel_change < 1e-8);
}

TEST_CASE("normalized contour form approaches the sine kernel") {
  const double target = 2.0 / M_PI;
  const double d128 =
      std::abs(contour_F2_asymptotic(128, 0.0, 0.0, 0.25, -0.25).normalized.real() - target);
  CHECK(d128 <= 0.1 * target);
  const double d64 =
      std::abs(contour_F2_asymptotic(64, 0.0, 0.0, 0.25, -0.25).normalized.real() - target);
  const double d32 =
      std::abs(contour_F2_asymptotic(32, 0.0, 0.0, 0.25, -0.25).normalized.real() - target);
  CHECK(d64 <= d32);
  CHECK(d128 <= d64);
  // order of convergence close to 1
  CHECK(std::log2(d64 / d128) > 0.8);
}

TEST_CASE("kappa4 drops out of the m = 1 normalized limit") {
  const double a = contour_F2_asymptotic(128, 0.0, 0.0, 0.25, -0.25).normalized.real();
  const double b = contour_F2_asymptotic(128, 0.0, -0.5, 0.25, -0.25).normalized.real();
  CHECK(std::abs(a - b) < 0.05 * std::abs(a));
}

TEST_CASE("Laplace sanity ratio tends to 1") {
  double prev = 1e300;
  for (int n : {64, 256, 1024}) {
    const double d = std::abs(laplace_ratio(n, 0.5) - 1.0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("configuration sum") {
  const std::vector<double> xi1{0.3, -0.45};
  CHECK(config_sum_leading(1, 0.0, 0.0, xi1) == doctest::Approx(sinc(M_PI * 0.75)).epsilon(1e-10));
  CHECK(config_sum_terms(1, 0.0, 0.0, xi1).size() == 2);
  CHECK(config_sum_terms(3, 0.0, 0.0, {0, 1, 2, 3, 4, 5}).size() == 20);

  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> ud(-1.5, 1.5);
  for (int m : {2, 3})
    for (auto [l0, k4] : {std::pair{0.0, 0.0}, {1.0, -0.5}, {0.4, 0.2}})
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> xi(2 * m);
        for (double& x : xi) x = ud(gen);
        TheoryParams p{l0, 10, m, k4, xi};
        const double rhs = theorem1_rhs(p);
        CHECK(std::abs(config_sum_leading(m, l0, k4, xi) - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
      }
  CHECK_THROWS(config_sum_leading(2, 0.0, 0.0, {0.1, 0.1, 0.5, 0.7}));
}

TEST_CASE("leading term closed form matches its configuration") {
  const std::vector<double> xi{0.1, 0.8, -0.3, 0.45};
  const auto terms = config_sum_terms(2, 0.6, -0.5, xi);
  const cplx closed = leading_term_closed_form(2, 0.6, -0.5, xi);
  bool found = false;
  for (const auto& t : terms)
    if (t.saddles == std::vector<int>{1, 1, -1, -1}) {
      found = true;
      CHECK(std::abs(t.contribution - closed) < 1e-12 * std::abs(closed));
    }
  CHECK(found);
}

TEST_CASE("Cauchy determinant identity") {
  CHECK(cauchy_det_identity_check({2.0}, {1.0}) == 0.0);
  CHECK(cauchy_det_closed_form({2.0}, {1.0}) == 1.0);
  CHECK(cauchy_det_identity_check({0.0, 1.0}, {3.0, 5.0}) < 1e-12);
  CHECK(cauchy_det_identity_check({0.0, 1.3, 2.9}, {-2.0, 4.1, 5.5}) < 1e-10);
  CHECK_THROWS(cauchy_det_identity_check({1.0, 1.0}, {3.0, 5.0}));
  CHECK_THROWS(cauchy_det_identity_check({1.0, 2.0}, {2.0, 5.0}));
}
