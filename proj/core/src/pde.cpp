#include "gfrag/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfrag/errors.hpp"

namespace gfrag::pde {

namespace {

constexpr std::size_t kLeakNodes = 10;

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

LogGrid::LogGrid(double alpha, int m, std::int64_t first_index, std::vector<double> values)
    : alpha_(alpha),
      log_alpha_(std::log(alpha)),
      m_(m),
      dy_(std::log(alpha) / m),
      first_index_(first_index),
      values_(std::move(values)) {}

LogGrid LogGrid::build(const InitialProfile& p, double alpha, double y_min, double y_max, int m) {
  if (p.is_dirac()) throw DomainError("build_grid: dirac profile has no pointwise density");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("build_grid: alpha must be > 1");
  if (m < 1) throw DomainError("build_grid: m must be >= 1");
  if (!(y_min < y_max)) throw DomainError("build_grid: need y_min < y_max");
  if (y_max < p.support_right()) {
    throw DomainError("build_grid: y_max must reach the profile support edge " + std::to_string(p.support_right()));
  }
  const double dy = std::log(alpha) / m;
  const auto first = static_cast<std::int64_t>(std::floor(y_min / dy));
  const auto last = static_cast<std::int64_t>(std::ceil(y_max / dy));
  std::vector<double> values(static_cast<std::size_t>(last - first + 1));
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = profile_eval_y(p, static_cast<double>(first + std::int64_t(i)) * dy);
  }
  return LogGrid(alpha, m, first, std::move(values));
}

Stepper::Stepper(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), tmp_(size) {}

void Stepper::rhs(std::span<const double> n, std::span<double> out, int m) const {
  const std::size_t size = n.size();
  const auto shift = static_cast<std::size_t>(m);
  const std::size_t coupled = size > shift ? size - shift : 0;
  for (std::size_t i = 0; i < coupled; ++i) out[i] = n[i + shift] - n[i];
  for (std::size_t i = coupled; i < size; ++i) out[i] = -n[i];
}

void Stepper::advance(LogGrid& grid, double dt) {
  if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");
  auto n = grid.values();
  if (k1_.size() != n.size()) throw DomainError("step: stepper size does not match grid");
  const int pieces = static_cast<int>(std::ceil(dt / kMaxStep));
  const double h = dt / pieces;
  const std::size_t size = n.size();
  for (int piece = 0; piece < pieces; ++piece) {
    rhs(n, k1_, grid.m());
    for (std::size_t i = 0; i < size; ++i) tmp_[i] = n[i] + 0.5 * h * k1_[i];
    rhs(tmp_, k2_, grid.m());
    for (std::size_t i = 0; i < size; ++i) tmp_[i] = n[i] + 0.5 * h * k2_[i];
    rhs(tmp_, k3_, grid.m());
    for (std::size_t i = 0; i < size; ++i) tmp_[i] = n[i] + h * k3_[i];
    rhs(tmp_, k4_, grid.m());
    for (std::size_t i = 0; i < size; ++i) {
      n[i] += (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }
}

LogGrid step(const LogGrid& grid, double dt) {
  LogGrid next = grid;
  Stepper stepper(next.size());
  stepper.advance(next, dt);
  return next;
}

double grid_mass(std::span<const double> values, double dy) {
  if (values.empty()) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * dy;
}

double interpolate_n(std::span<const double> values, std::int64_t first_index, double dy, double y,
                     bool* extrapolated) {
  if (extrapolated != nullptr) *extrapolated = false;
  const auto size = static_cast<std::int64_t>(values.size());
  const double s = y / dy - static_cast<double>(first_index);
  const double nearest = std::round(s);
  if (std::abs(s - nearest) < 1e-9) {
    const auto i = static_cast<std::int64_t>(nearest);
    if (i >= 0 && i < size) return values[static_cast<std::size_t>(i)];
  }
  if (s > static_cast<double>(size - 1)) return 0.0;
  if (s < 0.0) {
    if (extrapolated != nullptr) *extrapolated = true;
    return 0.0;
  }
  auto at = [&](std::int64_t i) { return i < size ? values[static_cast<std::size_t>(i)] : 0.0; };
  std::int64_t base = static_cast<std::int64_t>(std::floor(s)) - 1;
  base = std::max<std::int64_t>(base, 0);
  double result = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) w *= (s - static_cast<double>(base + b)) / static_cast<double>(a - b);
    }
    result += w * at(base + a);
  }
  return result;
}

const Snapshot& Trajectory::snapshot_at(double t) const {
  for (const auto& s : snapshots) {
    if (same_time(s.t, t)) return s;
  }
  throw DomainError("no snapshot stored at t = " + std::to_string(t));
}

Trajectory solve_n(const LogGrid& initial, const SolveOptions& options) {
  if (!(options.t_end >= 0.0)) throw DomainError("solve: t_end must be >= 0");
  if (!(options.dt > 0.0)) throw DomainError("solve: dt must be > 0");
  for (double t : options.snapshot_times) {
    if (t < 0.0 || t > options.t_end * (1.0 + 1e-12)) throw DomainError("solve: snapshot time outside [0, t_end]");
  }
  for (double t : options.probe_times) {
    if (t < 0.0 || t > options.t_end * (1.0 + 1e-12)) throw DomainError("solve: probe time outside [0, t_end]");
  }
  for (double r : options.probe_rays) {
    for (double t : options.probe_times) {
      if (r * t < initial.y_min()) {
        throw DomainError("solve: probe ray " + std::to_string(r) + " leaves the grid before t = " +
                          std::to_string(t) + " (lower y_min)");
      }
    }
  }

  std::vector<double> events{0.0, options.t_end};
  events.insert(events.end(), options.snapshot_times.begin(), options.snapshot_times.end());
  events.insert(events.end(), options.probe_times.begin(), options.probe_times.end());
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(), same_time), events.end());

  Trajectory traj;
  traj.alpha = initial.alpha();
  traj.m = initial.m();
  traj.dy = initial.dy();
  traj.first_index = initial.first_index();
  traj.size = initial.size();
  traj.probe_rays = options.probe_rays;
  traj.probe_times = options.probe_times;
  traj.probe_values.assign(options.probe_rays.size(), std::vector<double>(options.probe_times.size(), 0.0));

  LogGrid grid = initial;
  Stepper stepper(grid.size());
  const double mass0 = grid_mass(grid.values(), grid.dy());
  const double leak_limit = options.leak_tolerance * std::max(mass0, 1e-300);

  auto record = [&](double t) {
    const auto n = grid.values();
    if (std::any_of(options.snapshot_times.begin(), options.snapshot_times.end(),
                    [t](double s) { return same_time(s, t); })) {
      traj.snapshots.push_back(Snapshot{t, std::vector<double>(n.begin(), n.end())});
    }
    const auto peak = std::max_element(n.begin(), n.end());
    traj.diagnostics.push_back(
        Diagnostic{t, grid_mass(n, grid.dy()), grid.y(static_cast<std::size_t>(peak - n.begin()))});
    for (std::size_t j = 0; j < options.probe_times.size(); ++j) {
      if (!same_time(options.probe_times[j], t)) continue;
      for (std::size_t r = 0; r < options.probe_rays.size(); ++r) {
        traj.probe_values[r][j] = interpolate_n(n, grid.first_index(), grid.dy(), options.probe_rays[r] * t);
      }
    }
  };

  double now = 0.0;
  record(now);
  for (std::size_t e = 1; e < events.size(); ++e) {
    const double span = events[e] - now;
    const auto substeps = std::max(1, static_cast<int>(std::ceil(span / options.dt - 1e-9)));
    const double h = span / substeps;
    for (int s = 0; s < substeps; ++s) {
      stepper.advance(grid, h);
      if (options.leak_monitor) {
        const auto n = grid.values();
        const std::size_t edge = std::min(kLeakNodes, n.size());
        const double leaked = *std::max_element(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(edge));
        if (leaked > leak_limit) {
          throw NumericalGuardError("solve: mass reached the left boundary (lower y_min)", leaked);
        }
      }
    }
    now = events[e];
    record(now);
  }
  return traj;
}

GridValue v_from_grid(const Trajectory& traj, double t, double x) {
  if (!(x > 0.0)) throw DomainError("v_from_grid: x must be > 0");
  const Snapshot& snap = traj.snapshot_at(t);
  const double y = std::log(x);
  GridValue out{0.0, false};
  const double n = interpolate_n(snap.n, traj.first_index, traj.dy, y, &out.extrapolated);
  out.value = std::exp(-2.0 * y) * n;
  return out;
}

std::pair<double, double> default_y_range(const InitialProfile& p, double alpha, double t_end,
                                          std::span<const double> probe_rays) {
  const double log_alpha = std::log(alpha);
  const double t = std::max(t_end, 0.0);
  double y_min = p.support_left() - (t + 10.0 * std::sqrt(t) + 10.0) * log_alpha;
  for (double r : probe_rays) y_min = std::min(y_min, r * t - 5.0 * log_alpha);
  return {y_min, p.support_right() + 0.05};
}

}  // namespace gfrag::pde
