#pragma once

#include <optional>
#include <utility>

#include "gfrag/model.hpp"
#include "gfrag/profile.hpp"

namespace gfrag::mellin {

/// Mellin transform of the fragmentation kernel, K(s) = alpha^{2-s}.
Complex K_of_s(double alpha, Complex s);

/// Real saddle abscissa of the inverse Mellin integrand,
/// s+ = 2 - log(-log x / (t log alpha)) / log alpha, for 0 < x < 1, t > 0.
double s_plus(double alpha, double t, double x);

/// s+ along the ray x = e^{yt}; independent of t.
double s_plus_ray(double alpha, double y);

/// s_k = s+ - 2 i k pi / log alpha.
Complex s_k(double s_plus, int k, double alpha);

struct PsiValue {
  double value;
  double first;
  double second;
};

/// Large-deviation exponent along rays x = e^{yt} (y < 0), with derivatives.
/// Maximal, and zero, at y = -log alpha.
PsiValue psi(double alpha, double y);

/// Trapezoid rule on the vertical line Re s = nu, Im s in [-tau_max, tau_max].
struct ContourQuad {
  double nu = 2.0;
  double tau_max = 100.0;
  int n_nodes = 8192;
  double rel_tol = 1e-7;  ///< accepted error estimate relative to the result

  void validate() const;

  /// Truncation and spacing chosen from the Gaussian decay of U0 along the
  /// line and the oscillation rates of e^{K(s) t} and x^{-s}.
  static ContourQuad automatic(const InitialProfile& p, double alpha, double t, double x, double nu = 2.0);
};

struct ContourResult {
  double value;
  double error_estimate;  ///< |trapezoid - midpoint| plus analytic tail bound
};

/// v(t,x) = 1/(2 pi i) int_{nu - i inf}^{nu + i inf} U0(s) e^{(K(s)-1)t} x^{-s} ds.
/// Requires a LogGaussian profile: |e^{(K(s)-1)t}| is periodic in Im s, so
/// all decay of the integrand comes from U0.
ContourResult inverse_mellin_v_detailed(const InitialProfile& p, double alpha, double t, double x,
                                        const ContourQuad& cq);
double inverse_mellin_v(const InitialProfile& p, double alpha, double t, double x, const ContourQuad& cq);
/// Uses ContourQuad::automatic(p, alpha, t, x).
double inverse_mellin_v(const InitialProfile& p, double alpha, double t, double x);

/// Truncations of the infinite sums in the asymptotic formulas. Unset fields
/// are chosen automatically (see default_theta_kmax, default_poisson_range).
struct AsympTruncation {
  std::optional<int> k_max;
  std::optional<std::pair<int, int>> n_range;
};

/// Smallest k with |U0(s_k)| < 1e-16 |U0(s+)| (capped at 4096).
int default_theta_kmax(const InitialProfile& p, double alpha, double s_plus);

/// Lattice indices n with alpha^n x inside the profile's effective support.
std::pair<int, int> default_poisson_range(const InitialProfile& p, double alpha, double x);

/// sum_{|k| <= k_max} U0(s_k) e^{2 i pi k log(x) / log alpha}, summed in
/// conjugate pairs (k, -k).
Complex theta_sum(const InitialProfile& p, double alpha, double s_plus, double log_x, int k_max);

/// Leading-order saddle-point asymptotics of v with the oscillating theta sum.
double asymp_v_theta(const InitialProfile& p, double alpha, double t, double x, const AsympTruncation& tr = {});

/// Poisson-resummed form of asymp_v_theta:
/// e^{(alpha^{2-s+}-1)t} sum_n u0(alpha^n x) alpha^{s+ n} / (sqrt(2 pi t) alpha^{1-s+/2}).
double asymp_v_poisson(const InitialProfile& p, double alpha, double t, double x, const AsympTruncation& tr = {});

struct AsympU {
  double theta_form;
  double poisson_form;
};

/// Asymptotics of the growth-fragmentation solution for b = 1, both forms,
/// with s+ evaluated at x e^{-gt}.
AsympU asymp_u(const ModelParams& params, const InitialProfile& p, double t, double x,
               const AsympTruncation& tr = {});

}  // namespace gfrag::mellin
