#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wigcp/ensembles.hpp"

using namespace wigcp;

namespace {

void check_invariants(const EntryLaw& law) {
  for (int k = 1; k <= kMaxMomentOrder; k += 2) CHECK(law.mu(k) == 0.0);
  CHECK(law.mu(2) == 0.5);
  CHECK(law.kappa4 == law.mu(4) - 0.75);
}

}  // namespace

TEST_CASE("analytic moment tables") {
  const EntryLaw g = make_entry_law(LawKind::Gaussian);
  check_invariants(g);
  CHECK(g.mu(4) == 0.75);
  CHECK(g.kappa4 == 0.0);
  CHECK(g.mu(8) == doctest::Approx(105.0 / 16.0).epsilon(1e-15));

  const EntryLaw r = make_entry_law(LawKind::Rademacher);
  check_invariants(r);
  CHECK(r.mu(4) == 0.25);
  CHECK(r.kappa4 == -0.5);

  const EntryLaw u = make_entry_law(LawKind::UniformScaled);
  check_invariants(u);
  CHECK(u.mu(4) == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(u.kappa4 == doctest::Approx(-0.3).epsilon(1e-14));

  const EntryLaw mix = make_entry_law(LawKind::TwoPointMixture, {0.25, 0.75});
  check_invariants(mix);
  CHECK(mix.mu(4) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(std::abs(mix.kappa4) < 1e-15);

  const EntryLaw heavy = make_entry_law(LawKind::TwoPointMixture, {0.1, 2.0});
  CHECK(heavy.mu(4) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("diagonal laws have unit variance") {
  for (LawKind k : {LawKind::Gaussian, LawKind::Rademacher, LawKind::UniformScaled,
                    LawKind::TwoPointMixture}) {
    const EntryLaw d = make_diagonal_law(k);
    CHECK(d.mu(2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.role == LawRole::Diagonal);
  }
  CHECK(make_diagonal_law(LawKind::Gaussian).mu(4) == 3.0);
}

TEST_CASE("invalid law parameters are rejected") {
  CHECK_THROWS_AS(make_entry_law(LawKind::TwoPointMixture, {1.5, 0.75}), std::invalid_argument);
  CHECK_THROWS_AS(make_entry_law(LawKind::TwoPointMixture, {0.25, 0.2}), std::invalid_argument);
  // mu4 = 3/4 needs p <= 1/3
  CHECK_THROWS_AS(make_entry_law(LawKind::TwoPointMixture, {0.5, 0.75}), std::invalid_argument);
  CHECK_THROWS_AS(parse_law_kind("cauchy"), std::invalid_argument);
  CHECK(parse_law_kind("uniform") == LawKind::UniformScaled);
}

TEST_CASE("sampled matrices are exactly Hermitian and reproducible") {
  const EntryLaw law = make_entry_law(LawKind::UniformScaled);
  const EntryLaw diag = make_diagonal_law(LawKind::Gaussian);
  RngStream r1(5, 3), r2(5, 3);
  for (int n : {1, 2, 7}) {
    const HermitianMatrix h = sample_wigner(n, law, diag, r1);
    const HermitianMatrix h2 = sample_wigner(n, law, diag, r2);
    CHECK(h.matrix() == h2.matrix());
    for (int j = 0; j < n; ++j) {
      CHECK(h(j, j).imag() == 0.0);
      for (int k = 0; k < n; ++k) {
        CHECK(h(j, k).real() == h(k, j).real());
        CHECK(h(j, k).imag() == -h(k, j).imag());
      }
    }
  }
}

TEST_CASE("n = 1 diagonal entry has mean 0 and second moment 1") {
  const EntryLaw law = make_entry_law(LawKind::Gaussian);
  const EntryLaw diag = make_diagonal_law(LawKind::Gaussian);
  RngStream rng(11, 0);
  const int n = 1000000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double w = sample_wigner(1, law, diag, rng)(0, 0).real();
    s += w;
    s2 += w * w;
    s4 += w * w * w * w;
  }
  const double mean = s / n, m2 = s2 / n;
  CHECK(std::abs(mean) < 5.0 * std::sqrt(m2 / n));
  CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt((s4 / n - m2 * m2) / n));
}

TEST_CASE("n = 64 Gaussian off-diagonal |W_jk|^2 averages to 1") {
  const EntryLaw law = make_entry_law(LawKind::Gaussian);
  const EntryLaw diag = make_diagonal_law(LawKind::Gaussian);
  RngStream rng(12, 0);
  const int n = 64;
  double s = 0, s2 = 0;
  long count = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianMatrix h = sample_wigner(n, law, diag, rng);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double a = std::norm(h(j, k)) * n;
        s += a;
        s2 += a * a;
        ++count;
      }
  }
  const double mean = s / count;
  const double se = std::sqrt((s2 / count - mean * mean) / count);
  CHECK(std::abs(mean - 1.0) < 5.0 * se);
}

TEST_CASE("empirical moments match the analytic tables") {
  RngStream rng(13, 0);
  const auto g = empirical_moments(make_entry_law(LawKind::Gaussian), 4, 1000000, rng);
  CHECK(std::abs(g[1].mean - 0.5) < 5.0 * g[1].stderr);
  CHECK(std::abs(g[2].mean) < 5.0 * g[2].stderr);

  // |x| = 1/sqrt 2 on every draw
  const auto r = empirical_moments(make_entry_law(LawKind::Rademacher), 4, 1000, rng);
  CHECK(std::abs(r[3].mean - 0.25) < 1e-15);

  for (LawKind k : {LawKind::Gaussian, LawKind::Rademacher, LawKind::UniformScaled,
                    LawKind::TwoPointMixture}) {
    const EntryLaw law = make_entry_law(k);
    const auto m = empirical_moments(law, 4, 1000000, rng);
    CHECK(std::abs(m[0].mean) < 5.0 * m[0].stderr);
    CHECK(std::abs(m[2].mean) < 5.0 * m[2].stderr);
    CHECK(std::abs(m[1].mean - law.mu(2)) < 5.0 * m[1].stderr + 1e-15);
    CHECK(std::abs(m[3].mean - law.mu(4)) < 5.0 * m[3].stderr + 1e-15);
  }
  CHECK_THROWS_AS(empirical_moments(make_entry_law(LawKind::Gaussian), 17, 10, rng),
                  std::invalid_argument);
}
