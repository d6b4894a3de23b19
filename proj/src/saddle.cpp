#include "wigcp/saddle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "wigcp/errors.hpp"
#include "wigcp/quadrature.hpp"
#include "wigcp/theory.hpp"

namespace wigcp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_bulk(double lambda0) {
  if (!(std::abs(lambda0) < 2.0)) throw DomainError("lambda0 must lie in (-2, 2)");
}

cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

// reduce a complex difference to |.| with the imaginary part taken mod 2 pi
double mod_2pi_i(cplx d) {
  return std::abs(cplx(d.real(), std::remainder(d.imag(), 2.0 * kPi)));
}

// five-point central differences
cplx fd1(const auto& f, double x, double h) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}
cplx fd2(const auto& f, double x, double h) {
  return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
         (12.0 * h * h);
}

// Real parameter ranges of L_a^A = {t : a <= |t - i lambda0/2| <= A}.
std::vector<std::pair<double, double>> contour_segments(double lambda0, double a, double A) {
  if (!(a > 0 && a < A)) throw std::invalid_argument("contour needs 0 < a < A");
  const double q = lambda0 * lambda0 / 4.0;
  if (A * A <= q) throw std::invalid_argument("contour: A too small for lambda0");
  const double hi = std::sqrt(A * A - q);
  const double lo = std::sqrt(std::max(a * a - q, 0.0));
  if (lo > 0) return {{-hi, -lo}, {lo, hi}};
  return {{-hi, hi}};
}

struct Nodes {
  std::vector<double> t;
  std::vector<cplx> base;  // weight * exp(-n V(t))
};

Nodes contour_nodes(int n, double lambda0, const ContourSpec& spec, double width) {
  const QuadratureRule gl = gauss_legendre(spec.order);
  Nodes all;
  std::vector<double> w;
  for (auto [s0, s1] : contour_segments(lambda0, spec.a, spec.A)) {
    const int panels = std::max(1, static_cast<int>(std::ceil((s1 - s0) / width)));
    const double h = (s1 - s0) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = s0 + (p + 0.5) * h;
      for (std::size_t i = 0; i < gl.size(); ++i) {
        all.t.push_back(mid + 0.5 * h * gl.nodes[i]);
        w.push_back(0.5 * h * gl.weights[i]);
      }
    }
  }
  // drop nodes where e^{-n Re V} < 1e-22; Re V >= 0 on the real line
  Nodes kept;
  const double cut = std::log(1e-22);
  for (std::size_t i = 0; i < all.t.size(); ++i) {
    const cplx nv = -static_cast<double>(n) * phase_V(all.t[i], lambda0);
    if (nv.real() < cut) continue;
    kept.t.push_back(all.t[i]);
    kept.base.push_back(w[i] * std::exp(nv));
  }
  return kept;
}

// The double integral of e^{-nV(t1)-nV(t2)} e^{-i(xi1 t1 + xi2 t2)/rho} K(t1, t2) e^{kappa4 q1 q2}
// with K = (t1 - t2)/(xi1 - xi2), or -i (t1 - t2)^2/(2 rho) when coincident.
cplx contour_integral(const Nodes& nd, double lambda0, double kappa4, double xi1, double xi2,
                      double rho, bool coincident) {
  const std::size_t N = nd.t.size();
  std::vector<cplx> b1(N), b2(N), q(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double t = nd.t[i];
    b1[i] = nd.base[i] * std::exp(-kI * (xi1 * t / rho));
    b2[i] = nd.base[i] * std::exp(-kI * (xi2 * t / rho));
    const cplx p = t - kI * (lambda0 / 2.0);
    q[i] = 1.0 / (p * p);
  }
  if (kappa4 == 0.0) {
    cplx s10 = 0, s11 = 0, s12 = 0, s20 = 0, s21 = 0, s22 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double t = nd.t[i];
      s10 += b1[i];
      s11 += b1[i] * t;
      s12 += b1[i] * t * t;
      s20 += b2[i];
      s21 += b2[i] * t;
      s22 += b2[i] * t * t;
    }
    if (coincident) return -kI / (2.0 * rho) * (s12 * s20 - 2.0 * s11 * s21 + s10 * s22);
    return (s11 * s20 - s10 * s21) / (xi1 - xi2);
  }
  cplx total = 0;
  for (std::size_t a = 0; a < N; ++a) {
    cplx row = 0;
    for (std::size_t b = 0; b < N; ++b) {
      const double d = nd.t[a] - nd.t[b];
      const cplx k = coincident ? cplx(d * d) : cplx(d);
      row += b2[b] * k * std::exp(kappa4 * q[a] * q[b]);
    }
    total += b1[a] * row;
  }
  if (coincident) return -kI / (2.0 * rho) * total;
  return total / (xi1 - xi2);
}

// inversion count parity
int permutation_sign(const std::vector<int>& perm) {
  int s = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) s = -s;
  return s;
}

void require_distinct(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (std::abs(v[i] - v[j]) < kConfluentGap) throw DomainError(what);
}

}  // namespace

cplx phase_V(cplx t, double lambda0) {
  const cplx p = t - kI * (lambda0 / 2.0);
  if (p == 0.0) throw DomainError("phase_V: branch point t = i lambda0/2");
  return t * t / 2.0 + kI * lambda0 * t / 2.0 - std::log(p) - (4.0 - lambda0 * lambda0) / 8.0;
}

cplx phase_V_prime(cplx t, double lambda0) {
  const cplx p = t - kI * (lambda0 / 2.0);
  if (p == 0.0) throw DomainError("phase_V_prime: branch point t = i lambda0/2");
  return t + kI * (lambda0 / 2.0) - 1.0 / p;
}

SaddleData saddle_data(double lambda0) {
  require_bulk(lambda0);
  SaddleData s;
  s.lambda0 = lambda0;
  const double r = std::sqrt(4.0 - lambda0 * lambda0);
  s.x_plus = r / 2.0;
  s.x_minus = -r / 2.0;
  s.p_plus = s.x_plus - kI * (lambda0 / 2.0);
  s.p_minus = s.x_minus - kI * (lambda0 / 2.0);
  s.c_plus = 1.0 + 1.0 / (s.p_plus * s.p_plus);
  s.c_minus = 1.0 + 1.0 / (s.p_minus * s.p_minus);
  const double as = std::asin(-lambda0 / 2.0);
  s.V_plus = kI * (lambda0 * r / 4.0) - kI * as;
  s.V_minus = -kI * (lambda0 * r / 4.0) + kI * as - kI * kPi;
  s.V_plus_direct = phase_V(s.x_plus, lambda0);
  s.V_minus_direct = phase_V(s.x_minus, lambda0);
  s.V_plus_mismatch = mod_2pi_i(s.V_plus - s.V_plus_direct);
  s.V_minus_mismatch = mod_2pi_i(s.V_minus - s.V_minus_direct);
  return s;
}

LandscapeReport verify_landscape(double lambda0, int n, double a, double A) {
  require_bulk(lambda0);
  if (n < 2) throw DomainError("verify_landscape: n must be >= 2");
  const SaddleData sd = saddle_data(lambda0);
  LandscapeReport rep;
  rep.lambda0 = lambda0;
  rep.n = n;
  rep.grid_step = 1e-4;
  rep.window_halfwidth = std::log(n) / std::sqrt(static_cast<double>(n));

  double best_plus = std::numeric_limits<double>::infinity();
  double best_minus = best_plus;
  double fitted = best_plus;
  const double scale = n / (std::log(n) * std::log(n));
  for (auto [s0, s1] : contour_segments(lambda0, a, A)) {
    const auto steps = static_cast<long>(std::floor((s1 - s0) / rep.grid_step));
    for (long k = 0; k <= steps; ++k) {
      const double t = s0 + k * rep.grid_step;
      const double re = phase_V(t, lambda0).real();
      if (t > 0 && re < best_plus) {
        best_plus = re;
        rep.min_plus = t;
      }
      if (t < 0 && re < best_minus) {
        best_minus = re;
        rep.min_minus = t;
      }
      const bool in_window = std::abs(t - sd.x_plus) < rep.window_halfwidth ||
                             std::abs(t - sd.x_minus) < rep.window_halfwidth;
      if (!in_window) fitted = std::min(fitted, re * scale);
    }
  }
  rep.fitted_C = fitted;
  rep.min_location_error =
      std::max(std::abs(rep.min_plus - sd.x_plus), std::abs(rep.min_minus - sd.x_minus));

  const double h = 1e-3;
  auto V = [&](double t) { return phase_V(t, lambda0); };
  auto reV = [&](double t) { return cplx(phase_V(t, lambda0).real()); };
  const double quad = (4.0 - lambda0 * lambda0) / 2.0;
  for (auto [x, c] : {std::pair{sd.x_plus, sd.c_plus}, std::pair{sd.x_minus, sd.c_minus}}) {
    rep.re_V_at_saddles = std::max(rep.re_V_at_saddles, std::abs(V(x).real()));
    rep.V_prime_at_saddles = std::max(rep.V_prime_at_saddles, std::abs(fd1(V, x, h)));
    rep.V2_minus_c = std::max(rep.V2_minus_c, std::abs(fd2(V, x, h) - c));
    rep.re_V2_minus_quadratic =
        std::max(rep.re_V2_minus_quadratic, std::abs(fd2(reV, x, h).real() - quad));
  }

  auto fail_if = [&](bool bad, const std::string& msg) {
    if (bad) rep.failures.push_back(msg);
  };
  fail_if(!(rep.min_location_error <= rep.grid_step), "Re V minima not at x_pm");
  fail_if(!(rep.re_V_at_saddles <= 1e-12), "Re V(x_pm) != 0");
  fail_if(!(rep.V_prime_at_saddles < 1e-10), "V'(x_pm) != 0");
  fail_if(!(rep.V2_minus_c <= 1e-8), "V''(x_pm) != c_pm");
  fail_if(!(rep.re_V2_minus_quadratic <= 1e-6), "(Re V)''(x_pm) != (4 - lambda0^2)/2");
  fail_if(!(rep.fitted_C > 0), "Re V lower bound outside U_n(x_pm) has C <= 0");
  rep.passed = rep.failures.empty();
  return rep;
}

ExactRepresentation exact_F2_representation_kappa(int n, double lambda1, double lambda2,
                                                  double kappa4, double tol) {
  if (n < 1) throw DomainError("exact_F2_representation: n must be >= 1");
  const bool with_p = kappa4 != 0.0;
  const cplx eps = kappa4 > 0 ? cplx(kappa4) : -kI * kappa4;
  const double nn = n;

  auto evaluate = [&](int k, double& scale) {
    const QuadratureRule gh = gauss_hermite(k);
    const QuadratureRule lag = gauss_laguerre(k);
    const double sqpi = std::sqrt(kPi);
    // E over tau ~ N(0, 1/n) and p ~ N(0, 1/(2|kappa4|)) with Gauss-Hermite,
    // r = |u|^2 ~ Exp(mean 1/n) with Gauss-Laguerre
    std::vector<double> tau(k), wt(k), r(k), wr(k), p(with_p ? k : 1), wp(with_p ? k : 1);
    for (int i = 0; i < k; ++i) {
      tau[i] = gh.nodes[i] * std::sqrt(2.0 / nn);
      wt[i] = gh.weights[i] / sqpi;
      r[i] = lag.nodes[i] / nn;
      wr[i] = lag.weights[i];
    }
    if (with_p) {
      for (int i = 0; i < k; ++i) {
        p[i] = gh.nodes[i] / std::sqrt(std::abs(kappa4));
        wp[i] = gh.weights[i] / sqpi;
      }
    } else {
      p[0] = 0.0;
      wp[0] = 1.0;
    }
    cplx sum = 0;
    scale = 0;
    for (int i1 = 0; i1 < k; ++i1) {
      const cplx d1 = tau[i1] - kI * lambda1;
      for (int i2 = 0; i2 < k; ++i2) {
        const cplx d12 = d1 * (tau[i2] - kI * lambda2);
        const double w12 = wt[i1] * wt[i2];
        for (int j = 0; j < k; ++j) {
          const cplx det = d12 - r[j];
          const double w123 = w12 * wr[j];
          for (std::size_t l = 0; l < p.size(); ++l) {
            const cplx f = ipow(det + 2.0 * p[l] * eps / nn, n) * (w123 * wp[l]);
            sum += f;
            scale += std::abs(f);
          }
        }
      }
    }
    return (n % 2 == 0 ? 1.0 : -1.0) * sum;
  };

  const int k = n / 2 + 2;
  double scale_lo = 0, scale_hi = 0;
  const cplx lo = evaluate(k, scale_lo);
  const cplx hi = evaluate(k + 2, scale_hi);
  ExactRepresentation out;
  out.value = hi.real();
  out.imag = hi.imag();
  out.nodes_per_axis = k + 2;
  out.refinement_change = std::abs(hi - lo);
  if (out.refinement_change > tol * std::max(std::abs(hi), 1e-300) &&
      out.refinement_change > 1e3 * std::numeric_limits<double>::epsilon() * scale_hi) {
    throw NonConvergence("exact_F2_representation: refinements disagree", lo.real(), hi.real());
  }
  return out;
}

ExactRepresentation exact_F2_representation(int n, double lambda1, double lambda2,
                                            const EntryLaw& law, double tol) {
  return exact_F2_representation_kappa(n, lambda1, lambda2, law.kappa4, tol);
}

ContourResult contour_F2_asymptotic(int n, double lambda0, double kappa4, double xi1, double xi2,
                                    const ContourSpec& spec, const ContourOptions& options) {
  require_bulk(lambda0);
  if (n < 1) throw DomainError("contour_F2_asymptotic: n must be >= 1");
  const double rho = rho_sc(lambda0);
  const bool coincident = std::abs(xi1 - xi2) < kConfluentGap;
  // ordered so that the result is bit-symmetric in (xi1, xi2)
  const double x1 = std::max(xi1, xi2);
  const double x2 = std::min(xi1, xi2);

  double width = spec.panel_width > 0 ? spec.panel_width
                                      : std::min(0.25, 0.5 / std::sqrt(static_cast<double>(n)));
  cplx prev = contour_integral(contour_nodes(n, lambda0, spec, width), lambda0, kappa4, x1, x2,
                               rho, coincident);
  cplx cur = prev;
  int refinements = 0;
  int nodes = 0;
  for (;;) {
    width /= 2.0;
    const Nodes nd = contour_nodes(n, lambda0, spec, width);
    nodes = static_cast<int>(nd.t.size());
    cur = contour_integral(nd, lambda0, kappa4, x1, x2, rho, coincident);
    ++refinements;
    if (std::abs(cur - prev) <= spec.tol * std::abs(cur)) break;
    if (refinements >= spec.max_refinements) {
      throw NonConvergence("contour_F2_asymptotic: panel halving did not converge",
                           prev.real(), cur.real());
    }
    prev = cur;
  }

  TheoryParams tp;
  tp.lambda0 = lambda0;
  tp.n = n;
  tp.kappa4 = kappa4;
  const double log_D2 = 0.5 * (D_n(x1, tp).logmag + D_n(x2, tp).logmag);
  double log_scale = n * (lambda0 * lambda0 - 2.0) / 2.0 + alpha(lambda0) * (x1 + x2) - log_D2;
  if (options.finite_n_factor) log_scale += (x1 * x1 + x2 * x2) / (2.0 * n * rho * rho);
  const double sign_n = n % 2 == 0 ? 1.0 : -1.0;
  const cplx pref = kI * rho * static_cast<double>(n) * static_cast<double>(n) /
                    (2.0 * kPi * sign_n) * std::exp(log_scale);

  ContourResult res;
  res.normalized = pref * cur / (n * rho);
  res.normalized_log = SignedLog::from_double(res.normalized.real());
  res.log_D2 = log_D2;
  res.F2 = res.normalized_log * SignedLog::from_log(std::log(n * rho) + log_D2);
  res.imag_rel = std::abs(res.normalized.imag()) / std::max(std::abs(res.normalized.real()), 1e-300);
  res.nodes = nodes;
  res.refinements = refinements;
  res.coincident = coincident;
  return res;
}

SensitivityReport contour_sensitivity(int n, double lambda0, double kappa4, double xi1,
                                      double xi2, const ContourSpec& spec) {
  ContourSpec wide = spec;
  wide.a = spec.a / 2.0;
  wide.A = spec.A * 2.0;
  SensitivityReport rep;
  rep.base = contour_F2_asymptotic(n, lambda0, kappa4, xi1, xi2, spec).normalized.real();
  rep.widened = contour_F2_asymptotic(n, lambda0, kappa4, xi1, xi2, wide).normalized.real();
  rep.rel_change = std::abs(rep.widened - rep.base) / std::max(std::abs(rep.base), 1e-300);
  rep.passed = rep.rel_change < 1e-8;
  return rep;
}

cplx laplace_ratio(int n, double lambda0) {
  require_bulk(lambda0);
  const SaddleData sd = saddle_data(lambda0);
  const double half = std::log(n) / std::sqrt(static_cast<double>(n));
  const QuadratureRule q = composite_legendre(sd.x_plus - half, sd.x_plus + half, 64, 12);
  cplx num = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    num += q.weights[i] * std::exp(-static_cast<double>(n) * phase_V(q.nodes[i], lambda0));
  }
  const cplx den = std::sqrt(2.0 * kPi / (static_cast<double>(n) * sd.c_plus)) *
                   std::exp(-static_cast<double>(n) * sd.V_plus_direct);
  return num / den;
}

double cauchy_det_closed_form(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  if (b.size() != m) throw DomainError("cauchy determinant: blocks differ in size");
  double num = 1.0, den = 1.0;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = k + 1; l < m; ++l) num *= (a[k] - a[l]) * (b[k] - b[l]);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) den *= a[k] - b[l];
  const double sign = (m * (m - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * num / den;
}

double cauchy_det_identity_check(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  if (m == 0 || b.size() != m) throw DomainError("cauchy determinant: need two blocks of size m");
  require_distinct(a, "cauchy determinant: repeated a");
  require_distinct(b, "cauchy determinant: repeated b");
  Eigen::MatrixXd c(m, m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j) {
      if (a[k] == b[j]) throw DomainError("cauchy determinant: a_k = b_j");
      c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = 1.0 / (a[k] - b[j]);
    }
  return std::abs(c.determinant() - cauchy_det_closed_form(a, b));
}

std::vector<ConfigurationTerm> config_sum_terms(int m, double lambda0, double kappa4,
                                                const std::vector<double>& xi) {
  require_bulk(lambda0);
  if (m < 1 || xi.size() != static_cast<std::size_t>(2 * m)) {
    throw DomainError("config_sum: xi must have 2m entries");
  }
  require_distinct(xi, "config_sum: coincident xi (use the confluent sine-kernel path)");
  const std::vector<double> x(xi.begin(), xi.begin() + m);
  const std::vector<double> y(xi.begin() + m, xi.end());

  TheoryParams tp;
  tp.lambda0 = lambda0;
  tp.m = m;
  tp.kappa4 = kappa4;
  const double pref = theorem1_prefactor(tp);
  const double vdm = (vandermonde(x) * vandermonde(y)).to_double();
  const cplx two_i_pi_m = ipow(2.0 * kI * kPi, m);

  std::vector<ConfigurationTerm> terms;
  const unsigned full = 1u << m;
  for (unsigned rows_plus = 0; rows_plus < full; ++rows_plus) {
    const int r = std::popcount(rows_plus);
    for (unsigned cols_minus = 0; cols_minus < full; ++cols_minus) {
      if (std::popcount(cols_minus) != r) continue;
      std::vector<double> ap, am, bm, bp;
      std::vector<int> rp, rm, cm, cp;
      for (int i = 0; i < m; ++i) {
        if (rows_plus >> i & 1u) {
          rp.push_back(i);
          ap.push_back(x[i]);
        } else {
          rm.push_back(i);
          am.push_back(x[i]);
        }
        if (cols_minus >> i & 1u) {
          cm.push_back(i);
          bm.push_back(y[i]);
        } else {
          cp.push_back(i);
          bp.push_back(y[i]);
        }
      }
      // base permutation: rows_plus -> cols_minus and rows_minus -> cols_plus in order
      std::vector<int> perm(m);
      for (int k = 0; k < r; ++k) perm[rp[k]] = cm[k];
      for (int k = 0; k < m - r; ++k) perm[rm[k]] = cp[k];
      const double sigma = (m - r) % 2 == 0 ? 1.0 : -1.0;
      const double c1 = r > 0 ? cauchy_det_closed_form(ap, bm) : 1.0;
      const double c2 = r < m ? cauchy_det_closed_form(am, bp) : 1.0;
      ConfigurationTerm term;
      term.phase_signs.resize(2 * m);
      double phase = 0;
      for (int i = 0; i < m; ++i) {
        const int sx = (rows_plus >> i & 1u) ? 1 : -1;
        const int sy = (cols_minus >> i & 1u) ? -1 : 1;
        term.phase_signs[i] = sx;
        term.phase_signs[m + i] = sy;
        phase += sx * x[i] + sy * y[i];
      }
      for (int s : term.phase_signs) term.saddles.push_back(-s);
      const double coef = permutation_sign(perm) * sigma * c1 * c2;
      term.contribution = std::exp(kI * (kPi * phase)) * (coef * pref / vdm) / two_i_pi_m;
      terms.push_back(std::move(term));
    }
  }
  return terms;
}

double config_sum_leading(int m, double lambda0, double kappa4, const std::vector<double>& xi) {
  cplx s = 0;
  for (const auto& t : config_sum_terms(m, lambda0, kappa4, xi)) s += t.contribution;
  return s.real();
}

cplx leading_term_closed_form(int m, double lambda0, double kappa4, const std::vector<double>& xi) {
  require_bulk(lambda0);
  if (m < 1 || xi.size() != static_cast<std::size_t>(2 * m)) {
    throw DomainError("leading term: xi must have 2m entries");
  }
  TheoryParams tp;
  tp.lambda0 = lambda0;
  tp.m = m;
  tp.kappa4 = kappa4;
  double phase = 0, prod = 1;
  for (int i = 0; i < m; ++i) {
    phase += xi[m + i] - xi[i];
    for (int j = 0; j < m; ++j) prod *= xi[i] - xi[m + j];
  }
  const cplx i_pow = ipow(kI, m * (m + 1));
  return theorem1_prefactor(tp) * i_pow * std::exp(kI * (kPi * phase)) /
         (ipow(2.0 * kI * kPi, m) * prod);
}

}  // namespace wigcp
