#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gfrag/profile.hpp"

namespace gfrag::pde {

/// Uniform grid in y = log x with spacing log(alpha)/m, carrying
/// n(t,y) = e^{2y} v(t, e^y). Node i sits at y = (first_index + i) * dy, so
/// the shift y -> y + log(alpha) is exactly i -> i + m.
class LogGrid {
 public:
  /// Samples n(0,.) = profile_eval_y on the nodes covering [y_min, y_max].
  /// y_max must reach the right edge of the profile's support.
  static LogGrid build(const InitialProfile& p, double alpha, double y_min, double y_max, int m);

  double alpha() const noexcept { return alpha_; }
  double log_alpha() const noexcept { return log_alpha_; }
  int m() const noexcept { return m_; }
  double dy() const noexcept { return dy_; }
  std::int64_t first_index() const noexcept { return first_index_; }
  std::size_t size() const noexcept { return values_.size(); }
  double y(std::size_t i) const noexcept { return static_cast<double>(first_index_ + std::int64_t(i)) * dy_; }
  double y_min() const noexcept { return y(0); }
  double y_max() const noexcept { return y(values_.size() - 1); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  LogGrid(double alpha, int m, std::int64_t first_index, std::vector<double> values);

  double alpha_;
  double log_alpha_;
  int m_;
  double dy_;
  std::int64_t first_index_;
  std::vector<double> values_;
};

/// Largest step taken in one RK4 stage sequence; longer steps are split.
inline constexpr double kMaxStep = 0.5;

/// One classical RK4 step of dn_i/dt = -n_i + n_{i+m} (n = 0 past y_max).
LogGrid step(const LogGrid& grid, double dt);

/// In-place RK4 stepper with reusable stage buffers.
class Stepper {
 public:
  explicit Stepper(std::size_t size);
  void advance(LogGrid& grid, double dt);

 private:
  void rhs(std::span<const double> n, std::span<double> out, int m) const;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

/// Trapezoid rule for int n dy on the grid.
double grid_mass(std::span<const double> values, double dy);

/// 4-point Lagrange interpolation of node values at y; returns exact node
/// values on nodes and 0 right of the grid. Left of the grid returns 0 and
/// sets *extrapolated.
double interpolate_n(std::span<const double> values, std::int64_t first_index, double dy, double y,
                     bool* extrapolated = nullptr);

struct SolveOptions {
  double t_end = 0.0;
  double dt = 0.01;
  std::vector<double> snapshot_times;  ///< stored snapshots, within [0, t_end]
  std::vector<double> probe_rays;      ///< record n(t, ray * t) ...
  std::vector<double> probe_times;     ///< ... at these times
  bool leak_monitor = true;
  double leak_tolerance = 1e-12;  ///< relative to the initial grid mass
};

struct Snapshot {
  double t;
  std::vector<double> n;
};

struct Diagnostic {
  double t;
  double mass;    ///< trapezoid int n dy
  double argmax;  ///< node y maximizing n
};

/// Output of solve_n. Probe values are stored ray-major:
/// probe_values[r][j] = n(probe_times[j], probe_rays[r] * probe_times[j]).
struct Trajectory {
  double alpha = 2.0;
  int m = 1;
  double dy = 0.0;
  std::int64_t first_index = 0;
  std::size_t size = 0;

  std::vector<Snapshot> snapshots;
  std::vector<Diagnostic> diagnostics;
  std::vector<double> probe_rays;
  std::vector<double> probe_times;
  std::vector<std::vector<double>> probe_values;

  double y(std::size_t i) const noexcept { return static_cast<double>(first_index + std::int64_t(i)) * dy; }
  /// Snapshot taken at t (to 1e-12 relative); throws DomainError otherwise.
  const Snapshot& snapshot_at(double t) const;
};

/// Integrates from the grid's current state (t = 0) to t_end, landing
/// exactly on every snapshot and probe time. Throws NumericalGuardError if
/// the leftmost 10 nodes exceed the leak tolerance.
Trajectory solve_n(const LogGrid& grid, const SolveOptions& options);

struct GridValue {
  double value;
  bool extrapolated;
};

/// v(t,x) = e^{-2y} n(t,y), y = log x, from a stored snapshot.
GridValue v_from_grid(const Trajectory& traj, double t, double x);

/// Default y range for a run up to t_end: keeps the Poisson spread of the
/// mass (and any probe ray) away from the left boundary.
std::pair<double, double> default_y_range(const InitialProfile& p, double alpha, double t_end,
                                          std::span<const double> probe_rays = {});

}  // namespace gfrag::pde
