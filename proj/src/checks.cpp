#include "wigcp/checks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wigcp/detmc.hpp"
#include "wigcp/hciz.hpp"
#include "wigcp/oracle.hpp"
#include "wigcp/saddle.hpp"
#include "wigcp/theory.hpp"

namespace wigcp {

namespace {

CheckRow make_row(std::string name, double measured, const std::string& op, double tol) {
  bool ok = false;
  if (op == "<=") ok = measured <= tol;
  else if (op == "<") ok = measured < tol;
  else if (op == ">") ok = measured > tol;
  else if (op == "==") ok = measured == tol;
  else if (op == "info") ok = true;
  return {std::move(name), measured, op, tol, ok};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string pair_name(const std::vector<double>& l) {
  std::string s = "(";
  for (std::size_t i = 0; i < l.size(); ++i) s += (i ? "," : "") + fmt(l[i]);
  return s + ")";
}

// values in [lo, hi] with pairwise distance >= gap
std::vector<double> spaced(RngStream& rng, int count, double lo, double hi, double gap) {
  for (;;) {
    std::vector<double> v(count);
    for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
    bool ok = true;
    for (int i = 0; i < count && ok; ++i)
      for (int j = i + 1; j < count && ok; ++j) ok = std::abs(v[i] - v[j]) >= gap;
    if (ok) return v;
  }
}

const std::vector<std::vector<double>> kLambdaPairs = {{0.0, 0.0}, {0.5, 0.5}, {0.3, 0.7}};

}  // namespace

bool all_passed(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.passed; });
}

std::vector<CheckRow> check_oracle(std::uint64_t samples, std::uint64_t seed, int workers,
                                   bool include_m2) {
  std::vector<CheckRow> rows;
  const EntryLaw diag = make_diagonal_law(LawKind::Gaussian);
  EstimatorOptions opt;
  opt.workers = workers;
  std::uint64_t tag = 0;
  auto run = [&](int n, const std::vector<double>& lambdas, LawKind kind) {
    const EntryLaw law = make_entry_law(kind);
    const double exact = exact_F2m_small(n, static_cast<int>(lambdas.size() / 2), lambdas, law, diag);
    const Estimate e = estimate_F2m_at(n, lambdas, law, samples, derive_seed(seed, tag++), opt);
    const double z = std::abs(e.value() - exact) / e.stderr_abs();
    rows.push_back(make_row("n=" + std::to_string(n) + " m=" + std::to_string(lambdas.size() / 2) +
                                " lambda=" + pair_name(lambdas) + " " + to_string(kind) +
                                " |MC-exact|/stderr",
                            z, "<=", 4.0));
  };
  for (int n = 1; n <= 3; ++n)
    for (const auto& l : kLambdaPairs)
      for (LawKind k : {LawKind::Gaussian, LawKind::Rademacher}) run(n, l, k);
  if (include_m2) {
    for (const auto& l : kLambdaPairs)
      for (LawKind k : {LawKind::Gaussian, LawKind::Rademacher})
        run(2, {l[0], l[1], l[0], l[1]}, k);
  }
  return rows;
}

std::vector<CheckRow> check_representation() {
  std::vector<CheckRow> rows;
  const EntryLaw diag = make_diagonal_law(LawKind::Gaussian);
  for (int n = 1; n <= 3; ++n) {
    for (LawKind k : {LawKind::Gaussian, LawKind::Rademacher}) {
      const EntryLaw law = make_entry_law(k);
      for (const auto& l : kLambdaPairs) {
        const double exact = exact_F2m_small(n, 1, l, law, diag);
        const double rep = exact_F2_representation(n, l[0], l[1], law).value;
        rows.push_back(make_row("n=" + std::to_string(n) + " kappa4=" + fmt(law.kappa4) +
                                    " lambda=" + pair_name(l) + " relative error",
                                std::abs(rep - exact) / std::abs(exact), "<=", 1e-3));
      }
    }
  }
  // the contour form with its finite-n factor is exact at kappa4 = 0
  {
    const int n = 3;
    const double l0 = 0.5, x1 = 0.3, x2 = -0.2;
    ContourOptions co;
    co.finite_n_factor = true;
    const ContourResult c = contour_F2_asymptotic(n, l0, 0.0, x1, x2, {}, co);
    const double scale = n * rho_sc(l0);
    const double exact =
        exact_F2_representation_kappa(n, l0 + x1 / scale, l0 + x2 / scale, 0.0).value;
    rows.push_back(make_row("contour vs auxiliary field, n=3 lambda0=0.5 relative error",
                            std::abs(c.F2.to_double() - exact) / std::abs(exact), "<=", 1e-8));
  }
  {
    const SensitivityReport s = contour_sensitivity(64, 0.0, 0.0, 0.25, -0.25);
    rows.push_back(make_row("contour sensitivity to (a/2, 2A), n=64", s.rel_change, "<", 1e-8));
  }
  return rows;
}

std::vector<CheckRow> check_identity(std::uint64_t seed, int cauchy_instances, int draws_per_m) {
  std::vector<CheckRow> rows;
  RngStream rng(derive_seed(seed, 0), 0);
  double worst = 0.0;
  for (int i = 0; i < cauchy_instances; ++i) {
    const int m = 1 + i % 4;
    const std::vector<double> a = spaced(rng, m, -1.0, 1.0, 0.1);
    const std::vector<double> b = spaced(rng, m, 1.5, 3.5, 0.1);
    worst = std::max(worst, cauchy_det_identity_check(a, b));
  }
  rows.push_back(make_row("Cauchy determinant identity, " + std::to_string(cauchy_instances) +
                              " instances m<=4, max deviation",
                          worst, "<", 1e-10));

  RngStream xr(derive_seed(seed, 1), 0);
  for (int m = 1; m <= 3; ++m) {
    double worst_rel = 0.0;
    for (int d = 0; d < draws_per_m; ++d) {
      const double l0 = (d % 2 == 0) ? 0.0 : 1.0;
      const double k4 = (d % 4 < 2) ? 0.0 : -0.5;
      const std::vector<double> xi = spaced(xr, 2 * m, -1.5, 1.5, 0.05);
      TheoryParams tp;
      tp.lambda0 = l0;
      tp.m = m;
      tp.kappa4 = k4;
      tp.xi = xi;
      const double rhs = theorem1_rhs(tp);
      const double cs = config_sum_leading(m, l0, k4, xi);
      worst_rel = std::max(worst_rel, std::abs(cs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    rows.push_back(make_row("configuration sum vs theorem, m=" + std::to_string(m) + ", " +
                                std::to_string(draws_per_m) + " draws, max deviation",
                            worst_rel, "<=", 1e-8));
  }
  return rows;
}

std::vector<CheckRow> check_landscape(const std::vector<double>& lambda0s,
                                      const std::vector<int>& ns) {
  std::vector<CheckRow> rows;
  for (double l0 : lambda0s) {
    for (int n : ns) {
      const LandscapeReport r = verify_landscape(l0, n);
      const std::string tag = "lambda0=" + fmt(l0) + " n=" + std::to_string(n) + " ";
      rows.push_back(make_row(tag + "|argmin Re V - x_pm|", r.min_location_error, "<=", 1e-4));
      rows.push_back(make_row(tag + "|Re V(x_pm)|", r.re_V_at_saddles, "<=", 1e-12));
      rows.push_back(make_row(tag + "|V'(x_pm)|", r.V_prime_at_saddles, "<", 1e-10));
      rows.push_back(make_row(tag + "|V''(x_pm) - c_pm|", r.V2_minus_c, "<=", 1e-8));
      rows.push_back(make_row(tag + "|(Re V)''(x_pm) - (4-lambda0^2)/2|", r.re_V2_minus_quadratic,
                              "<=", 1e-6));
      rows.push_back(make_row(tag + "fitted C outside U_n(x_pm)", r.fitted_C, ">", 0.0));
    }
  }
  return rows;
}

std::vector<CheckRow> check_hciz(const std::vector<int>& ns, int trials, std::uint64_t samples,
                                 std::uint64_t seed, int workers) {
  std::vector<CheckRow> rows;
  HaarOptions opt;
  opt.workers = workers;
  for (int n : ns) {
    const HciZReport r =
        hciz_ratio_constancy(n, trials, samples, derive_seed(seed, static_cast<std::uint64_t>(n)),
                             opt);
    const std::string tag = "n=" + std::to_string(n) + " ";
    if (n == 1) {
      rows.push_back(make_row(tag + "max |ratio - 1|", r.dispersion, "==", 0.0));
      double dev = 0;
      for (const auto& p : r.pairs) dev = std::max(dev, std::abs(p.ratio - 1.0));
      rows.back().measured = dev;
      rows.back().passed = dev == 0.0;
    } else {
      rows.push_back(make_row(tag + "ratio dispersion max/min-1 vs 3 combined stderr",
                              r.dispersion, "<", r.threshold));
    }
    rows.push_back(make_row(tag + "fitted c_n", r.fitted_c, "info", r.fitted_c_stderr));
  }
  return rows;
}

}  // namespace wigcp
