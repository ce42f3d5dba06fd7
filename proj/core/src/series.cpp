#include "gfrag/series.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gfrag/detail/summation.hpp"
#include "gfrag/errors.hpp"

namespace gfrag::series {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and > 1");
}

void check_density_profile(const InitialProfile& p) {
  if (p.is_dirac()) throw DomainError("dirac profile: no pointwise density, use support_set");
}

// Number of dilation terms needed at log-size y: max of the Poisson cutoff
// and the first k whose shifted point y + k log(alpha) leaves the support.
int term_count(const InitialProfile& p, double log_alpha, double mean, double y, const SeriesTruncation& trunc) {
  const int k_poisson = poisson_cutoff(mean, trunc.eps, trunc.k_max_cap);
  if (k_poisson < 0) {
    throw NumericalGuardError("series: Poisson truncation cap " + std::to_string(trunc.k_max_cap) +
                                  " reached before tail < eps",
                              1.0);
  }
  const double reach = (p.support_right() - y) / log_alpha;
  int k_support = 0;
  if (reach >= 0.0) {
    if (reach + 1.0 > static_cast<double>(trunc.k_max_cap)) {
      throw NumericalGuardError("series: support truncation needs more than " + std::to_string(trunc.k_max_cap) +
                                    " terms",
                                reach);
    }
    k_support = static_cast<int>(std::floor(reach)) + 1;
  }
  return std::max(k_poisson, k_support);
}

}  // namespace

void SeriesTruncation::validate() const {
  if (!(eps > 0.0)) throw DomainError("series truncation: eps must be > 0");
  if (k_max_cap < 1) throw DomainError("series truncation: k_max_cap must be >= 1");
}

int poisson_cutoff(double mean, double eps, int cap) {
  if (mean <= 0.0) return 0;
  const double log_mean = std::log(mean);
  double log_pmf = -mean;  // log P(K = 0)
  for (int k = 0; k <= cap; ++k) {
    // P(K > k) <= pmf(k+1) / (1 - mean/(k+2)) once k + 2 > mean.
    const double log_next = log_pmf + log_mean - std::log(static_cast<double>(k + 1));
    const double ratio = mean / static_cast<double>(k + 2);
    if (ratio < 1.0 && log_next - std::log1p(-ratio) < std::log(eps)) return k;
    log_pmf = log_next;
  }
  return -1;
}

double eval_n(const InitialProfile& p, double alpha, double t, double y, const SeriesTruncation& trunc) {
  check_alpha(alpha);
  check_density_profile(p);
  trunc.validate();
  if (!(t >= 0.0)) throw DomainError("series: t must be >= 0");
  if (t == 0.0) return profile_eval_y(p, y);

  const double log_alpha = std::log(alpha);
  const int k_last = term_count(p, log_alpha, t, y, trunc);
  const double log_t = std::log(t);

  detail::CompensatedSum acc;
  double log_w = -t;  // log of e^{-t} t^k / k!
  for (int k = 0; k <= k_last; ++k) {
    if (k > 0) log_w += log_t - std::log(static_cast<double>(k));
    const double n0 = profile_eval_y(p, y + k * log_alpha);
    if (n0 != 0.0) acc.add(std::exp(log_w) * n0);
  }
  return acc.value();
}

double eval_v(const InitialProfile& p, double alpha, double t, double x, const SeriesTruncation& trunc) {
  if (!(x > 0.0)) throw DomainError("series: x must be > 0");
  if (t == 0.0) return profile_eval_x(p, x);
  return eval_n(p, alpha, t, std::log(x), trunc) / (x * x);
}

std::vector<double> eval_n_nodes(const InitialProfile& p, double alpha, int m, std::int64_t first_index,
                                 std::size_t count, double t, const SeriesTruncation& trunc) {
  check_alpha(alpha);
  check_density_profile(p);
  trunc.validate();
  if (m < 1) throw DomainError("series: m must be >= 1");
  if (!(t >= 0.0)) throw DomainError("series: t must be >= 0");

  const double log_alpha = std::log(alpha);
  const double dy = log_alpha / m;
  auto node_y = [dy](std::int64_t i) { return static_cast<double>(i) * dy; };

  std::vector<double> out(count, 0.0);
  if (t == 0.0) {
    for (std::size_t j = 0; j < count; ++j) out[j] = profile_eval_y(p, node_y(first_index + std::int64_t(j)));
    return out;
  }

  // Poisson weights are shared by every node.
  const double y_lowest = node_y(first_index);
  const int k_last = term_count(p, log_alpha, t, y_lowest, trunc);
  std::vector<double> weight(static_cast<std::size_t>(k_last) + 1);
  double log_w = -t;
  const double log_t = std::log(t);
  for (int k = 0; k <= k_last; ++k) {
    if (k > 0) log_w += log_t - std::log(static_cast<double>(k));
    weight[static_cast<std::size_t>(k)] = std::exp(log_w);
  }

  const double right = p.support_right();
  for (std::size_t j = 0; j < count; ++j) {
    const std::int64_t i = first_index + static_cast<std::int64_t>(j);
    detail::CompensatedSum acc;
    for (int k = 0; k <= k_last; ++k) {
      const double ys = node_y(i + static_cast<std::int64_t>(k) * m);
      if (ys > right) break;
      const double n0 = profile_eval_y(p, ys);
      if (n0 != 0.0) acc.add(weight[static_cast<std::size_t>(k)] * n0);
    }
    out[j] = acc.value();
  }
  return out;
}

double eval_u(const ModelParams& params, const InitialProfile& p, double t, double x, const SeriesTruncation& trunc) {
  if (!(x > 0.0)) throw DomainError("series: x must be > 0");
  if (!(t >= 0.0)) throw DomainError("series: t must be >= 0");
  const double decay = std::exp(-params.g() * t);
  return decay * eval_v(p, params.alpha(), params.b() * t, x * decay, trunc);
}

double eval_u_direct(const ModelParams& params, const InitialProfile& p, double t, double x,
                     const SeriesTruncation& trunc) {
  check_density_profile(p);
  trunc.validate();
  if (!(x > 0.0)) throw DomainError("series: x must be > 0");
  if (!(t >= 0.0)) throw DomainError("series: t must be >= 0");
  if (t == 0.0) return profile_eval_x(p, x);

  const double log_alpha = params.log_alpha();
  const double log_z = std::log(x) - params.g() * t;
  const double bt = params.b() * t;
  const int k_last = term_count(p, log_alpha, bt, log_z, trunc);
  const double log_rate = std::log(params.b() * params.alpha() * params.alpha() * t);

  detail::CompensatedSum acc;
  double log_w = -(params.b() + params.g()) * t;  // log of e^{-(b+g)t} (b alpha^2 t)^k / k!
  for (int k = 0; k <= k_last; ++k) {
    if (k > 0) log_w += log_rate - std::log(static_cast<double>(k));
    const double lu = log_profile_eval_x(p, std::exp(log_z + k * log_alpha));
    if (lu != -std::numeric_limits<double>::infinity()) acc.add(std::exp(log_w + lu));
  }
  return acc.value();
}

double moment_of_v(const InitialProfile& p, double alpha, double q, double t) {
  check_alpha(alpha);
  if (!(t >= 0.0)) throw DomainError("series: t must be >= 0");
  return moment(p, q) * std::exp(t * (std::pow(alpha, 1.0 - q) - 1.0));
}

std::vector<Atom> support_set(const InitialProfile& p, const ModelParams& params, double t, int k_max) {
  const auto* d = std::get_if<Dirac>(&p.variant());
  if (d == nullptr) throw DomainError("support_set requires a dirac profile");
  if (!(t >= 0.0)) throw DomainError("support_set: t must be >= 0");
  if (t == 0.0) return {Atom{0, d->x0, d->weight}};

  // Pairing the series with a test function and substituting z = alpha^k x e^{-gt}
  // gives atom weights w e^{-bt} (b alpha t)^k / k!.
  const double rate = params.b() * params.alpha() * t;
  if (k_max < 0) {
    k_max = poisson_cutoff(rate, 1e-17, 1'000'000);
    if (k_max < 0) throw NumericalGuardError("support_set: generation cap reached", rate);
  }
  const double log_rate = std::log(rate);
  const double log_x_origin = std::log(d->x0) + params.g() * t;

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(k_max) + 1);
  double log_w = std::log(d->weight) - params.b() * t;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) log_w += log_rate - std::log(static_cast<double>(k));
    atoms.push_back(Atom{k, std::exp(log_x_origin - k * params.log_alpha()), std::exp(log_w)});
  }
  return atoms;
}

}  // namespace gfrag::series
