#include "gfrag/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gfrag/detail/summation.hpp"
#include "gfrag/errors.hpp"

namespace gfrag::mellin {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_log_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and > 1");
  return std::log(alpha);
}

void check_asymptotic_domain(double t, double x) {
  if (!(t > 0.0)) throw DomainError("asymptotic formulas need t > 0");
  if (!(x > 0.0 && x < 1.0)) throw DomainError("asymptotic formulas are stated for 0 < x < 1");
}

// log of 1 / (sqrt(2 pi t) alpha^{1 - s+/2})
double log_gaussian_width(double log_alpha, double t, double sp) {
  return -0.5 * std::log(2.0 * kPi * t) - (1.0 - 0.5 * sp) * log_alpha;
}

// sum_n u0(alpha^n x) alpha^{s+ n} over [lo, hi].
double poisson_lattice_sum(const InitialProfile& p, double log_alpha, double sp, double log_x, int lo, int hi) {
  detail::CompensatedSum acc;
  for (int n = lo; n <= hi; ++n) {
    const double lu = log_profile_eval_x(p, std::exp(log_x + n * log_alpha));
    if (lu == -std::numeric_limits<double>::infinity()) continue;
    acc.add(std::exp(lu + sp * n * log_alpha));
  }
  return acc.value();
}

}  // namespace

Complex K_of_s(double alpha, Complex s) { return std::exp((2.0 - s) * checked_log_alpha(alpha)); }

double s_plus(double alpha, double t, double x) {
  const double log_alpha = checked_log_alpha(alpha);
  if (!(t > 0.0)) throw DomainError("s_plus: t must be > 0");
  if (!(x > 0.0 && x < 1.0)) throw DomainError("s_plus: x must lie in (0, 1)");
  return 2.0 - std::log(-std::log(x) / (t * log_alpha)) / log_alpha;
}

double s_plus_ray(double alpha, double y) {
  const double log_alpha = checked_log_alpha(alpha);
  if (!(y < 0.0)) throw DomainError("s_plus_ray: y must be < 0");
  return 2.0 - std::log(-y / log_alpha) / log_alpha;
}

Complex s_k(double s_plus, int k, double alpha) {
  return {s_plus, -2.0 * k * kPi / checked_log_alpha(alpha)};
}

PsiValue psi(double alpha, double y) {
  const double log_alpha = checked_log_alpha(alpha);
  if (!(y < 0.0)) throw DomainError("psi: y must be < 0");
  const double l = std::log(-y / log_alpha);
  return {l / log_alpha * y - y / log_alpha - 1.0, l / log_alpha, 1.0 / (y * log_alpha)};
}

void ContourQuad::validate() const {
  if (!std::isfinite(nu)) throw DomainError("contour: nu must be finite");
  if (!(tau_max > 0.0)) throw DomainError("contour: tau_max must be > 0");
  if (n_nodes < 2 || n_nodes % 2 != 0) throw DomainError("contour: n_nodes must be even and >= 2");
  if (!(rel_tol > 0.0)) throw DomainError("contour: rel_tol must be > 0");
}

ContourQuad ContourQuad::automatic(const InitialProfile& p, double alpha, double t, double x, double nu) {
  const auto* g = std::get_if<LogGaussian>(&p.variant());
  if (g == nullptr) throw DomainError("contour integrand decays too slowly (inverse Mellin needs a loggaussian profile)");
  const double log_alpha = checked_log_alpha(alpha);
  if (!(x > 0.0)) throw DomainError("inverse Mellin: x must be > 0");

  ContourQuad cq;
  cq.nu = nu;
  // exp(-sigma^2 tau^2 / 2) < e^{-45} past tau_max.
  cq.tau_max = std::sqrt(2.0 * 45.0) / g->sigma;

  double h = g->sigma / 4.0;
  const double kernel_rate = t * log_alpha * std::pow(alpha, 2.0 - nu);
  if (kernel_rate > 0.0) h = std::min(h, kPi / (4.0 * kernel_rate));
  const double log_x = std::abs(std::log(x));
  if (log_x > 0.0) h = std::min(h, kPi / (4.0 * log_x));
  // Aliases sit 2 pi / h apart in log x; keep them beyond the spread of n(t,.).
  const double spread = (t + 10.0 * std::sqrt(t) + 10.0) * log_alpha + 24.0 * g->sigma + std::abs(g->mu);
  h = std::min(h, 2.0 * kPi / (1.5 * spread + 20.0));

  const auto half = static_cast<int>(std::ceil(cq.tau_max / h));
  cq.n_nodes = 2 * std::max(half, 1);
  return cq;
}

ContourResult inverse_mellin_v_detailed(const InitialProfile& p, double alpha, double t, double x,
                                        const ContourQuad& cq) {
  const auto* g = std::get_if<LogGaussian>(&p.variant());
  if (g == nullptr) throw DomainError("contour integrand decays too slowly (inverse Mellin needs a loggaussian profile)");
  cq.validate();
  const double log_alpha = checked_log_alpha(alpha);
  if (!(t >= 0.0)) throw DomainError("inverse Mellin: t must be >= 0");
  if (!(x > 0.0)) throw DomainError("inverse Mellin: x must be > 0");

  const double log_x = std::log(x);
  const double h = 2.0 * cq.tau_max / cq.n_nodes;
  auto integrand = [&](double tau) {
    const Complex s(cq.nu, tau);
    const Complex kernel = std::exp((2.0 - s) * log_alpha);
    return (mellin_U0(p, s) * std::exp((kernel - 1.0) * t - s * log_x)).real();
  };

  const auto n = static_cast<std::size_t>(cq.n_nodes);
  std::vector<double> trap(n + 1);
  std::vector<double> mid(n);
  std::vector<double> absval(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double f = integrand(-cq.tau_max + static_cast<double>(j) * h);
    const double w = (j == 0 || j == n) ? 0.5 : 1.0;
    trap[j] = w * f;
    absval[j] = w * std::abs(f);
  }
  for (std::size_t j = 0; j < n; ++j) mid[j] = integrand(-cq.tau_max + (static_cast<double>(j) + 0.5) * h);

  const double scale = h / (2.0 * kPi);
  const double t_rule = scale * detail::pairwise_sum<double>(trap);
  const double m_rule = scale * detail::pairwise_sum<double>(mid);
  const double l1 = scale * detail::pairwise_sum<double>(absval);

  // Tail beyond tau_max: |U0| envelope times the peak of the periodic factor.
  const double sigma2 = g->sigma * g->sigma;
  const double w = cq.nu - 2.0;
  const double log_env = std::log(g->mass) + g->mu * w + 0.5 * sigma2 * (w * w - cq.tau_max * cq.tau_max) +
                         t * (std::pow(alpha, 2.0 - cq.nu) - 1.0) - cq.nu * log_x;
  const double tail = 2.0 * std::exp(log_env) / (sigma2 * cq.tau_max) / (2.0 * kPi);

  ContourResult r{0.5 * (t_rule + m_rule), std::abs(t_rule - m_rule) + tail};
  const double allowed = cq.rel_tol * std::max(std::abs(r.value), 1e-14 * l1);
  if (!(r.error_estimate <= allowed)) {
    throw NumericalGuardError("inverse Mellin: quadrature error estimate above tolerance", r.error_estimate);
  }
  return r;
}

double inverse_mellin_v(const InitialProfile& p, double alpha, double t, double x, const ContourQuad& cq) {
  return inverse_mellin_v_detailed(p, alpha, t, x, cq).value;
}

double inverse_mellin_v(const InitialProfile& p, double alpha, double t, double x) {
  return inverse_mellin_v(p, alpha, t, x, ContourQuad::automatic(p, alpha, t, x));
}

int default_theta_kmax(const InitialProfile& p, double alpha, double s_plus) {
  constexpr int kCap = 4096;
  const double base = std::abs(mellin_U0(p, Complex(s_plus, 0.0)));
  for (int k = 1; k <= kCap; ++k) {
    if (std::abs(mellin_U0(p, s_k(s_plus, k, alpha))) < 1e-16 * base) return k;
  }
  return kCap;
}

std::pair<int, int> default_poisson_range(const InitialProfile& p, double alpha, double x) {
  const double log_alpha = checked_log_alpha(alpha);
  const double log_x = std::log(x);
  const auto lo = static_cast<int>(std::ceil((p.support_left() - log_x) / log_alpha));
  const auto hi = static_cast<int>(std::floor((p.support_right() - log_x) / log_alpha));
  return {lo, hi};
}

Complex theta_sum(const InitialProfile& p, double alpha, double s_plus, double log_x, int k_max) {
  const double log_alpha = checked_log_alpha(alpha);
  if (k_max < 0) throw DomainError("theta sum: k_max must be >= 0");
  Complex acc = mellin_U0(p, Complex(s_plus, 0.0));
  for (int k = 1; k <= k_max; ++k) {
    const double phase = 2.0 * kPi * k * log_x / log_alpha;
    const Complex e(std::cos(phase), std::sin(phase));
    acc += mellin_U0(p, s_k(s_plus, k, alpha)) * e + mellin_U0(p, s_k(s_plus, -k, alpha)) * std::conj(e);
  }
  return acc;
}

double asymp_v_theta(const InitialProfile& p, double alpha, double t, double x, const AsympTruncation& tr) {
  check_asymptotic_domain(t, x);
  if (p.is_dirac()) throw DomainError("asymptotic formulas need a profile with a density");
  const double log_alpha = checked_log_alpha(alpha);
  const double sp = s_plus(alpha, t, x);
  const double log_x = std::log(x);
  const int k_max = tr.k_max.value_or(default_theta_kmax(p, alpha, sp));
  const Complex sum = theta_sum(p, alpha, sp, log_x, k_max);
  const double log_pref = -sp * log_x + (std::exp((2.0 - sp) * log_alpha) - 1.0) * t +
                          log_gaussian_width(log_alpha, t, sp) - std::log(log_alpha);
  return std::exp(log_pref) * sum.real();
}

double asymp_v_poisson(const InitialProfile& p, double alpha, double t, double x, const AsympTruncation& tr) {
  check_asymptotic_domain(t, x);
  if (p.is_dirac()) throw DomainError("asymptotic formulas need a profile with a density");
  const double log_alpha = checked_log_alpha(alpha);
  const double sp = s_plus(alpha, t, x);
  const auto [lo, hi] = tr.n_range.value_or(default_poisson_range(p, alpha, x));
  const double sum = poisson_lattice_sum(p, log_alpha, sp, std::log(x), lo, hi);
  const double log_pref = (std::exp((2.0 - sp) * log_alpha) - 1.0) * t + log_gaussian_width(log_alpha, t, sp);
  return std::exp(log_pref) * sum;
}

AsympU asymp_u(const ModelParams& params, const InitialProfile& p, double t, double x, const AsympTruncation& tr) {
  if (params.b() != 1.0) {
    throw DomainError("asymp_u: unsupported normalization b != 1 (rescale time, u(t) = e^{-gt} v(bt, .))");
  }
  if (!(t > 0.0)) throw DomainError("asymptotic formulas need t > 0");
  if (!(x > 0.0)) throw DomainError("asymp_u: x must be > 0");
  if (p.is_dirac()) throw DomainError("asymptotic formulas need a profile with a density");

  const double alpha = params.alpha();
  const double log_alpha = params.log_alpha();
  const double g = params.g();
  const double z = x * std::exp(-g * t);
  const double log_z = std::log(z);
  check_asymptotic_domain(t, z);

  const double sp = s_plus(alpha, t, z);
  const double kernel = std::exp((2.0 - sp) * log_alpha);
  const double width = log_gaussian_width(log_alpha, t, sp);

  const int k_max = tr.k_max.value_or(default_theta_kmax(p, alpha, sp));
  // The oscillating phase follows log(x e^{-gt}), the argument of s+.
  const Complex sum = theta_sum(p, alpha, sp, log_z, k_max);
  const double theta =
      std::exp(-sp * std::log(x) + (kernel - 1.0 + g * (sp - 1.0)) * t + width - std::log(log_alpha)) * sum.real();

  const auto [lo, hi] = tr.n_range.value_or(default_poisson_range(p, alpha, z));
  const double lattice = poisson_lattice_sum(p, log_alpha, sp, log_z, lo, hi);
  const double poisson = std::exp((kernel - 1.0 - g) * t + width) * lattice;
  return {theta, poisson};
}

}  // namespace gfrag::mellin
