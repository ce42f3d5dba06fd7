#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfrag/mellin.hpp"
#include "gfrag/model.hpp"
#include "gfrag/pde.hpp"
#include "gfrag/profile.hpp"
#include "gfrag/series.hpp"

namespace gfrag::analysis {

/// Anything that can produce n(t,y) = e^{2y} v(t, e^y) for the pure
/// fragmentation problem.
class DensitySource {
 public:
  virtual ~DensitySource() = default;

  virtual std::string name() const = 0;
  virtual double alpha() const = 0;
  virtual double n(double t, double y) const = 0;

  double v(double t, double x) const;

  /// int w(y) n(t,y) dy over the region holding the mass.
  virtual double integrate(double t, const std::function<double(double)>& weight) const = 0;
};

/// Exact series route.
class SeriesSource final : public DensitySource {
 public:
  SeriesSource(InitialProfile p, double alpha, series::SeriesTruncation trunc = {});

  std::string name() const override { return "series"; }
  double alpha() const override { return alpha_; }
  double n(double t, double y) const override;
  /// Adaptive Gauss-Kronrod on cells of width log(alpha) aligned with the
  /// lattice-translated profile edges.
  double integrate(double t, const std::function<double(double)>& weight) const override;

  const InitialProfile& profile() const noexcept { return p_; }

 private:
  InitialProfile p_;
  double alpha_;
  series::SeriesTruncation trunc_;
};

/// Inverse Mellin contour route (LogGaussian only).
class MellinSource final : public DensitySource {
 public:
  MellinSource(InitialProfile p, double alpha, double nu = 2.0);

  std::string name() const override { return "mellin"; }
  double alpha() const override { return alpha_; }
  double n(double t, double y) const override;
  double integrate(double t, const std::function<double(double)>& weight) const override;

 private:
  InitialProfile p_;
  double alpha_;
  double nu_;
};

/// Reads stored snapshots of a grid solve; t must be a snapshot time.
class GridSource final : public DensitySource {
 public:
  explicit GridSource(const pde::Trajectory& traj) : traj_(&traj) {}

  std::string name() const override { return "pde"; }
  double alpha() const override { return traj_->alpha; }
  double n(double t, double y) const override;
  /// Trapezoid rule on the nodes; throws NumericalGuardError if the snapshot
  /// has mass at its left edge.
  double integrate(double t, const std::function<double(double)>& weight) const override;

 private:
  const pde::Trajectory* traj_;
};

/// r(t,y) = t e^{2ty} v(t, e^{ty}) = t n(t, ty).
double r_of(const DensitySource& src, double t, double y);

/// r~(t,z) = r(t, y0 + sigma z / sqrt t) sigma / sqrt t, y0 = -log alpha, sigma = log alpha.
double r_tilde_of(const DensitySource& src, double t, double z);

/// f_y(t) = sqrt(t) e^{-Psi(y) t} n(t, y t) sampled on a time grid.
struct LineProbe {
  double y;
  double alpha;
  std::vector<double> times;
  std::vector<double> values;

  /// Asymptotic period -log(alpha) / y.
  double expected_period() const;
};

LineProbe line_probe(const DensitySource& src, double y, std::span<const double> times);

/// Builds the probe from values recorded during a grid solve.
LineProbe line_probe(const pde::Trajectory& traj, double y);

/// Uniform times t0, t0 + T/s, ... <= t1 with s samples per period T.
std::vector<double> probe_times(double t0, double t1, double period, int samples_per_period);

struct PeriodEstimate {
  bool oscillating = false;
  double period = 0.0;      ///< lag of the dominant autocorrelation peak; NaN if not oscillating
  double confidence = 0.0;  ///< peak height over the largest secondary structure
  double n_cycles = 0.0;    ///< detrended window length / period
  double amplitude = 0.0;   ///< half peak-to-peak of the detrended ratio f / mean(f) - 1
};

/// Relative amplitude below which a probe counts as not oscillating.
inline constexpr double kNoOscillationThreshold = 1e-3;

/// Detrended f / moving-mean(f) - 1, window 3 expected periods. Returns
/// (times, values) restricted to points where the full window fits.
std::pair<std::vector<double>, std::vector<double>> detrend(const LineProbe& probe);

/// Autocorrelation period estimate of a detrended probe. Needs uniform
/// sampling with >= 32 samples per expected period and a window of at least
/// 6 expected periods (3 for detrending, 3 observed cycles).
PeriodEstimate estimate_period(const LineProbe& probe);

/// Half peak-to-peak of the detrended probe over [t_center - T, t_center + T].
double oscillation_amplitude(const LineProbe& probe, double t_center);

/// int phi(y) r(t,y) dy. Tends to U0(2) phi(-log alpha).
double weak_test(const DensitySource& src, const std::function<double(double)>& phi, double t);

/// int phi(z) r~(t,z) dz. Tends to U0(2) int phi G.
double weak_test_tilde(const DensitySource& src, const std::function<double(double)>& phi, double t);

/// U0(2) int phi(z) exp(-z^2/2)/sqrt(2 pi) dz, the weak limit of r~.
double gaussian_limit(const std::function<double(double)>& phi, double mass);

/// Moment fit of a gaussian to samples of a nonnegative profile.
struct GaussianFit {
  double mean;
  double stddev;
  double mass;
};
GaussianFit fit_gaussian(std::span<const double> y, std::span<const double> values);

struct ComparisonRow {
  std::string method_a;
  std::string method_b;
  double t;
  double x;
  double val_a;
  double val_b;
  double rel_err;
  bool flagged;
};

struct CompareOptions {
  bool include_pde = true;
  bool include_mellin = true;  ///< skipped automatically for non-Gaussian profiles
  bool include_asymptotic = true;
  int m = 64;
  double dt = 0.01;
  double tol_pde = 1e-7;
  double tol_mellin = 1e-6;
  double tol_asymptotic = 0.1;
};

/// Evaluates u(t,x) by every applicable route, each reached through
/// u(t,x) = e^{-gt} v(bt, x e^{-gt}), and compares each route against the
/// series. When the grid route is included, every x is moved to the grid
/// node nearest x e^{-gt} so all routes share evaluation points.
std::vector<ComparisonRow> compare_methods(const InitialProfile& p, const ModelParams& params,
                                           std::span<const double> t_list, std::span<const double> x_list,
                                           const CompareOptions& options = {});

/// |value - reference| / |reference|; 0 when both vanish.
double relative_error(double reference, double value);

}  // namespace gfrag::analysis
