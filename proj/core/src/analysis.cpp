#include "gfrag/analysis.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "gfrag/detail/summation.hpp"
#include "gfrag/errors.hpp"

namespace gfrag::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Left end of the region holding all but a negligible part of the mass of n(t,.).
double mass_window_left(const InitialProfile& p, double log_alpha, double t) {
  return p.support_left() - (t + 10.0 * std::sqrt(t) + 10.0) * log_alpha;
}

// Cells of width <= log(alpha) whose edges include every lattice translate
// y - k log(alpha) of the profile support edges.
std::vector<double> lattice_cells(const InitialProfile& p, double log_alpha, double t) {
  const double right = p.support_right();
  const double left = mass_window_left(p, log_alpha, t);
  std::vector<double> edges;
  const auto count = static_cast<int>(std::ceil((right - left) / log_alpha)) + 1;
  for (int k = 0; k <= count; ++k) {
    edges.push_back(right - k * log_alpha);
    if (p.is_heaviside()) edges.push_back(p.support_left() - k * log_alpha);
  }
  std::erase_if(edges, [&](double e) { return e < left || e > right; });
  edges.push_back(left);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double integrate_cells(const std::vector<double>& edges, const std::function<double(double)>& f) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  detail::CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    acc.add(Rule::integrate(f, edges[i], edges[i + 1], 12, 1e-13));
  }
  return acc.value();
}

bool uniform_spacing(std::span<const double> t, double* dt) {
  if (t.size() < 2) return false;
  *dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(*dt > 0.0)) return false;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - *dt) > 1e-6 * *dt) return false;
  }
  return true;
}

}  // namespace

double DensitySource::v(double t, double x) const {
  if (!(x > 0.0)) throw DomainError("v: x must be > 0");
  return n(t, std::log(x)) / (x * x);
}

SeriesSource::SeriesSource(InitialProfile p, double alpha, series::SeriesTruncation trunc)
    : p_(std::move(p)), alpha_(alpha), trunc_(trunc) {
  if (p_.is_dirac()) throw DomainError("series source: dirac profile has no pointwise density");
  if (!(alpha_ > 1.0)) throw DomainError("series source: alpha must be > 1");
}

double SeriesSource::n(double t, double y) const { return series::eval_n(p_, alpha_, t, y, trunc_); }

double SeriesSource::integrate(double t, const std::function<double(double)>& weight) const {
  const auto edges = lattice_cells(p_, std::log(alpha_), t);
  return integrate_cells(edges, [&](double y) { return weight(y) * n(t, y); });
}

MellinSource::MellinSource(InitialProfile p, double alpha, double nu) : p_(std::move(p)), alpha_(alpha), nu_(nu) {
  if (!p_.is_gaussian()) throw DomainError("contour integrand decays too slowly (mellin source needs loggaussian)");
  if (!(alpha_ > 1.0)) throw DomainError("mellin source: alpha must be > 1");
}

double MellinSource::n(double t, double y) const {
  const double x = std::exp(y);
  const auto cq = mellin::ContourQuad::automatic(p_, alpha_, t, x, nu_);
  return std::exp(2.0 * y) * mellin::inverse_mellin_v(p_, alpha_, t, x, cq);
}

double MellinSource::integrate(double t, const std::function<double(double)>& weight) const {
  const auto edges = lattice_cells(p_, std::log(alpha_), t);
  return integrate_cells(edges, [&](double y) { return weight(y) * n(t, y); });
}

double GridSource::n(double t, double y) const {
  const auto& snap = traj_->snapshot_at(t);
  return pde::interpolate_n(snap.n, traj_->first_index, traj_->dy, y);
}

double GridSource::integrate(double t, const std::function<double(double)>& weight) const {
  const auto& snap = traj_->snapshot_at(t);
  const auto& v = snap.n;
  if (v.empty()) return 0.0;
  const double total = pde::grid_mass(v, traj_->dy);
  const std::size_t edge = std::min<std::size_t>(10, v.size());
  const double leaked = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(edge));
  if (leaked > 1e-12 * std::max(total, 1e-300)) {
    throw NumericalGuardError("weak test: quadrature window does not contain the mass", leaked);
  }
  detail::CompensatedSum acc;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    if (v[i] != 0.0) acc.add(w * weight(traj_->y(i)) * v[i]);
  }
  return acc.value() * traj_->dy;
}

double r_of(const DensitySource& src, double t, double y) {
  if (!(t > 0.0)) throw DomainError("r: t must be > 0");
  return t * src.n(t, t * y);
}

double r_tilde_of(const DensitySource& src, double t, double z) {
  if (!(t > 0.0)) throw DomainError("r~: t must be > 0");
  const double sigma = std::log(src.alpha());
  const double scale = sigma / std::sqrt(t);
  return r_of(src, t, -sigma + scale * z) * scale;
}

double LineProbe::expected_period() const { return -std::log(alpha) / y; }

LineProbe line_probe(const DensitySource& src, double y, std::span<const double> times) {
  const double psi = mellin::psi(src.alpha(), y).value;
  LineProbe probe{y, src.alpha(), {times.begin(), times.end()}, {}};
  probe.values.reserve(times.size());
  for (double t : times) {
    if (!(t > 0.0)) throw DomainError("line probe: times must be > 0");
    probe.values.push_back(std::sqrt(t) * std::exp(-psi * t) * src.n(t, y * t));
  }
  return probe;
}

LineProbe line_probe(const pde::Trajectory& traj, double y) {
  const auto it = std::find_if(traj.probe_rays.begin(), traj.probe_rays.end(),
                               [y](double r) { return std::abs(r - y) <= 1e-12 * std::abs(y); });
  if (it == traj.probe_rays.end()) throw DomainError("line probe: ray was not recorded during the solve");
  const auto& raw = traj.probe_values[static_cast<std::size_t>(it - traj.probe_rays.begin())];
  const double psi = mellin::psi(traj.alpha, y).value;
  LineProbe probe{y, traj.alpha, {}, {}};
  for (std::size_t j = 0; j < traj.probe_times.size(); ++j) {
    const double t = traj.probe_times[j];
    if (!(t > 0.0)) continue;
    probe.times.push_back(t);
    probe.values.push_back(std::sqrt(t) * std::exp(-psi * t) * raw[j]);
  }
  return probe;
}

std::vector<double> probe_times(double t0, double t1, double period, int samples_per_period) {
  if (!(period > 0.0) || samples_per_period < 1 || !(t1 >= t0)) throw DomainError("probe_times: bad arguments");
  const double dt = period / samples_per_period;
  const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = t0 + static_cast<double>(i) * dt;
  return out;
}

std::pair<std::vector<double>, std::vector<double>> detrend(const LineProbe& probe) {
  double dt = 0.0;
  if (probe.times.size() != probe.values.size() || !uniform_spacing(probe.times, &dt)) {
    throw DomainError("period estimate: probe must be uniformly sampled");
  }
  const double period = probe.expected_period();
  const auto half = static_cast<std::size_t>(std::llround(1.5 * period / dt));
  const std::size_t n = probe.values.size();
  if (2 * half + 1 > n) throw DomainError("period estimate: window too short for detrending");

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + probe.values[i];

  std::vector<double> t_out;
  std::vector<double> d_out;
  for (std::size_t i = half; i + half < n; ++i) {
    const double mean = (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(2 * half + 1);
    t_out.push_back(probe.times[i]);
    d_out.push_back(mean > 0.0 ? probe.values[i] / mean - 1.0 : 0.0);
  }
  return {std::move(t_out), std::move(d_out)};
}

PeriodEstimate estimate_period(const LineProbe& probe) {
  if (!(probe.y < 0.0)) throw DomainError("period estimate: probe ray must be < 0");
  double dt = 0.0;
  if (!uniform_spacing(probe.times, &dt)) throw DomainError("period estimate: probe must be uniformly sampled");
  const double expected = probe.expected_period();
  if (expected / dt < 32.0 - 1e-9) throw DomainError("period estimate: need >= 32 samples per expected cycle");
  if (probe.times.back() - probe.times.front() < 6.0 * expected - 1e-9) {
    throw DomainError("period estimate: window too short (need 6 expected periods)");
  }

  const auto [times, d] = detrend(probe);
  PeriodEstimate est;
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  est.amplitude = 0.5 * (*hi - *lo);
  est.oscillating = est.amplitude >= kNoOscillationThreshold;
  if (!est.oscillating) {
    est.period = kNaN;
    return est;
  }

  const std::size_t n = d.size();
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = d[i] - mean;
  const std::size_t max_lag = n / 2;
  std::vector<double> acf(max_lag + 1);
  double c0 = 0.0;
  for (double v : c) c0 += v * v;
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += c[i] * c[i + lag];
    acf[lag] = s / c0;
  }

  std::size_t zero = 1;
  while (zero <= max_lag && acf[zero] > 0.0) ++zero;
  if (zero >= max_lag) throw DomainError("period estimate: autocorrelation never decorrelates in the window");

  const auto global = std::max_element(acf.begin() + static_cast<std::ptrdiff_t>(zero), acf.end());
  // First local maximum reaching 90% of the global one.
  std::size_t peak = static_cast<std::size_t>(global - acf.begin());
  for (std::size_t lag = zero + 1; lag + 1 <= max_lag; ++lag) {
    if (acf[lag] >= acf[lag - 1] && acf[lag] >= acf[lag + 1] && acf[lag] >= 0.9 * *global) {
      peak = lag;
      break;
    }
  }
  double offset = 0.0;
  if (peak + 1 <= max_lag) {
    const double a = acf[peak - 1];
    const double b = acf[peak];
    const double cc = acf[peak + 1];
    const double denom = a - 2.0 * b + cc;
    if (denom < 0.0) offset = 0.5 * (a - cc) / denom;
  }
  est.period = (static_cast<double>(peak) + offset) * dt;

  // Highest local maximum between the first zero crossing and the peak.
  double secondary = 0.0;
  for (std::size_t lag = zero + 1; lag + 1 < peak; ++lag) {
    if (acf[lag] >= acf[lag - 1] && acf[lag] >= acf[lag + 1]) secondary = std::max(secondary, acf[lag]);
  }
  est.confidence = acf[peak] / std::max(secondary, 1e-2);
  est.n_cycles = (times.back() - times.front()) / est.period;
  return est;
}

double oscillation_amplitude(const LineProbe& probe, double t_center) {
  const auto [times, d] = detrend(probe);
  const double period = probe.expected_period();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t_center) <= period) {
      lo = std::min(lo, d[i]);
      hi = std::max(hi, d[i]);
    }
  }
  if (!(hi >= lo)) throw DomainError("oscillation amplitude: t_center outside the detrended window");
  return 0.5 * (hi - lo);
}

double weak_test(const DensitySource& src, const std::function<double(double)>& phi, double t) {
  if (!(t > 0.0)) throw DomainError("weak test: t must be > 0");
  return src.integrate(t, [&](double y) { return phi(y / t); });
}

double weak_test_tilde(const DensitySource& src, const std::function<double(double)>& phi, double t) {
  if (!(t > 0.0)) throw DomainError("weak test: t must be > 0");
  const double sigma = std::log(src.alpha());
  const double root = std::sqrt(t);
  return src.integrate(t, [&](double y) { return phi((y / t + sigma) * root / sigma); });
}

double gaussian_limit(const std::function<double(double)>& phi, double mass) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto f = [&](double z) { return phi(z) * inv * std::exp(-0.5 * z * z); };
  return mass * Rule::integrate(f, -40.0, 40.0, 15, 1e-14);
}

GaussianFit fit_gaussian(std::span<const double> y, std::span<const double> values) {
  if (y.size() != values.size() || y.size() < 3) throw DomainError("fit_gaussian: need >= 3 matching samples");
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double h = y[i + 1] - y[i];
    const double a = values[i];
    const double b = values[i + 1];
    m0 += 0.5 * h * (a + b);
    m1 += 0.5 * h * (a * y[i] + b * y[i + 1]);
    m2 += 0.5 * h * (a * y[i] * y[i] + b * y[i + 1] * y[i + 1]);
  }
  if (!(m0 > 0.0)) throw DomainError("fit_gaussian: profile has no mass");
  const double mean = m1 / m0;
  return {mean, std::sqrt(std::max(m2 / m0 - mean * mean, 0.0)), m0};
}

double relative_error(double reference, double value) {
  const double diff = std::abs(value - reference);
  if (diff == 0.0) return 0.0;
  return diff / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

std::vector<ComparisonRow> compare_methods(const InitialProfile& p, const ModelParams& params,
                                           std::span<const double> t_list, std::span<const double> x_list,
                                           const CompareOptions& options) {
  if (p.is_dirac()) throw DomainError("compare: dirac profile has no pointwise density");
  const double alpha = params.alpha();
  const double g = params.g();
  const double b = params.b();
  for (double t : t_list) {
    if (!(t >= 0.0)) throw DomainError("compare: t must be >= 0");
  }
  for (double x : x_list) {
    if (!(x > 0.0)) throw DomainError("compare: x must be > 0");
  }

  // Grid route: one solve in fragmentation time b*t.
  std::optional<pde::Trajectory> traj;
  std::optional<pde::LogGrid> grid;
  if (options.include_pde && !t_list.empty()) {
    const double t_max = b * *std::max_element(t_list.begin(), t_list.end());
    auto [y_min, y_max] = pde::default_y_range(p, alpha, t_max);
    for (double t : t_list) {
      for (double x : x_list) y_min = std::min(y_min, std::log(x) - g * t - 1.0);
    }
    grid = pde::LogGrid::build(p, alpha, y_min, y_max, options.m);
    pde::SolveOptions so;
    so.t_end = t_max;
    so.dt = options.dt;
    for (double t : t_list) so.snapshot_times.push_back(b * t);
    traj = pde::solve_n(*grid, so);
  }

  std::vector<ComparisonRow> rows;
  auto add = [&](const char* name, double t, double x, double ref, double val, double tol) {
    const double err = relative_error(ref, val);
    rows.push_back({"series", name, t, x, ref, val, err, !(err <= tol)});
  };

  for (double t : t_list) {
    const double bt = b * t;
    const double decay = std::exp(-g * t);
    for (double x_req : x_list) {
      double z = x_req * decay;
      if (grid) {
        const double s = std::log(z) / grid->dy();
        z = std::exp(std::round(s) * grid->dy());
      }
      const double x = z / decay;
      const double ref = decay * series::eval_v(p, alpha, bt, z);
      if (traj) {
        const auto gv = pde::v_from_grid(*traj, bt, z);
        add("pde", t, x, ref, decay * gv.value, options.tol_pde);
      }
      if (options.include_mellin && p.is_gaussian()) {
        add("mellin", t, x, ref, decay * mellin::inverse_mellin_v(p, alpha, bt, z), options.tol_mellin);
      }
      if (options.include_asymptotic && bt > 0.0 && z < 1.0) {
        add("asymp-theta", t, x, ref, decay * mellin::asymp_v_theta(p, alpha, bt, z), options.tol_asymptotic);
        add("asymp-poisson", t, x, ref, decay * mellin::asymp_v_poisson(p, alpha, bt, z), options.tol_asymptotic);
      }
    }
  }
  return rows;
}

}  // namespace gfrag::analysis
