#pragma once

#include <complex>
#include <string>
#include <vector>

#include "wigcp/ensembles.hpp"
#include "wigcp/signed_log.hpp"

namespace wigcp {

using cplx = std::complex<double>;

/// V(t, lambda0) = t^2/2 + i lambda0 t/2 - log(t - i lambda0/2) - (4 - lambda0^2)/8,
/// principal branch. DomainError at the branch point t = i lambda0/2.
cplx phase_V(cplx t, double lambda0);
/// dV/dt = t + i lambda0/2 - 1/(t - i lambda0/2).
cplx phase_V_prime(cplx t, double lambda0);

struct SaddleData {
  double lambda0 = 0.0;
  double x_plus = 0.0, x_minus = 0.0;
  cplx p_plus, p_minus;
  cplx c_plus, c_minus;
  /// Closed forms, with V_- carrying its -i pi.
  cplx V_plus, V_minus;
  /// phase_V evaluated at x_pm.
  cplx V_plus_direct, V_minus_direct;
  /// |V_closed - V_direct| after reducing the difference modulo 2 pi i.
  double V_plus_mismatch = 0.0, V_minus_mismatch = 0.0;
};

/// DomainError outside (-2, 2).
SaddleData saddle_data(double lambda0);

struct LandscapeReport {
  double lambda0 = 0.0;
  int n = 0;
  double grid_step = 0.0;
  double min_plus = 0.0, min_minus = 0.0;    // grid minimizers of Re V
  double min_location_error = 0.0;           // max |t_min - x_pm|
  double re_V_at_saddles = 0.0;              // max |Re V(x_pm)|
  double V_prime_at_saddles = 0.0;           // max |V'(x_pm)|, finite differences
  double V2_minus_c = 0.0;                   // max |V''(x_pm) - c_pm|, finite differences
  double re_V2_minus_quadratic = 0.0;        // max |(Re V)''(x_pm) - (4 - lambda0^2)/2|
  double fitted_C = 0.0;                     // min of n Re V / log^2 n outside U_n(x_pm)
  double window_halfwidth = 0.0;             // log n / sqrt n
  bool passed = false;
  std::vector<std::string> failures;
};

/// Grid scan of Re V on L_a^A with spacing 1e-4 plus finite-difference checks at the saddles.
LandscapeReport verify_landscape(double lambda0, int n, double a = 0.05, double A = 6.0);

struct ExactRepresentation {
  double value = 0.0;
  double imag = 0.0;       // should vanish; reported as a diagnostic
  int nodes_per_axis = 0;
  double refinement_change = 0.0;
};

/// F_2(lambda1, lambda2) from the auxiliary-field representation, as
/// (-1)^n E[(det(Q - i Lambda) + 2 p eps(kappa4)/n)^n] over
/// Q = [[tau1, u], [conj u, tau2]] with tau_i ~ N(0, 1/n), E|u|^2 = 1/n and
/// p ~ N(0, 1/(2|kappa4|)). The integrand is a polynomial, so Gauss-Hermite in
/// (tau1, tau2, p) and Gauss-Laguerre in |u|^2 are exact once large enough;
/// two orders are compared and NonConvergence thrown if they disagree beyond tol.
ExactRepresentation exact_F2_representation(int n, double lambda1, double lambda2,
                                            const EntryLaw& law, double tol = 1e-10);
ExactRepresentation exact_F2_representation_kappa(int n, double lambda1, double lambda2,
                                                  double kappa4, double tol = 1e-10);

struct ContourSpec {
  double a = 0.05;
  double A = 6.0;
  int order = 12;              // Gauss-Legendre nodes per panel
  double panel_width = 0.0;    // 0: min(0.25, 0.5/sqrt n)
  double tol = 1e-10;          // relative agreement of successive panel halvings
  int max_refinements = 4;
};

struct ContourOptions {
  /// Multiply by exp{(xi1^2 + xi2^2)/(2 n rho^2)}; with kappa4 = 0 this makes
  /// the representation exact at finite n.
  bool finite_n_factor = false;
};

struct ContourResult {
  cplx normalized;          // D_2^{-1} F_2 / (n rho_sc)
  SignedLog normalized_log; // real part in signed-log form
  SignedLog F2;             // normalized * n rho_sc * D_2, real part
  double log_D2 = 0.0;
  double imag_rel = 0.0;    // |Im| / |Re| diagnostic
  int nodes = 0;
  int refinements = 0;
  bool coincident = false;
};

/// Quadrature over (L_a^A)^2 of the m = 1 contour integral. Symmetric in (xi1, xi2).
ContourResult contour_F2_asymptotic(int n, double lambda0, double kappa4, double xi1, double xi2,
                                    const ContourSpec& spec = {},
                                    const ContourOptions& options = {});

struct SensitivityReport {
  double base = 0.0;
  double widened = 0.0;
  double rel_change = 0.0;
  bool passed = false;
};

/// Halves a and doubles A; passes when the normalized value moves by < 1e-8 relative.
SensitivityReport contour_sensitivity(int n, double lambda0, double kappa4, double xi1,
                                      double xi2, const ContourSpec& spec = {});

/// integral over U_n(x_+) of e^{-n V} divided by sqrt(2 pi/(n c_+)) e^{-n V_+}.
cplx laplace_ratio(int n, double lambda0);

struct ConfigurationTerm {
  std::vector<int> phase_signs;  // alpha_j in exp{i pi sum alpha_j xi_j}
  std::vector<int> saddles;      // +1 for x_+, -1 for x_-; equals -phase_signs
  cplx contribution;             // already divided by Delta Delta and scaled by the prefactor
};

/// All C(2m, m) sign configurations of the leading order.
std::vector<ConfigurationTerm> config_sum_terms(int m, double lambda0, double kappa4,
                                                const std::vector<double>& xi);
/// Real part of their sum; comparable to theorem1_rhs.
double config_sum_leading(int m, double lambda0, double kappa4, const std::vector<double>& xi);

/// The single term with saddles (+^m, -^m) in closed form.
cplx leading_term_closed_form(int m, double lambda0, double kappa4, const std::vector<double>& xi);

/// |det[1/(a_k - b_j)] - (-1)^{m(m-1)/2} prod_{k<l}(a_k-a_l)(b_k-b_l) / prod(a_k - b_l)|.
double cauchy_det_identity_check(const std::vector<double>& a, const std::vector<double>& b);
/// The closed form alone.
double cauchy_det_closed_form(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace wigcp
