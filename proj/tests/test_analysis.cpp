#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gfrag/analysis.hpp"
#include "gfrag/errors.hpp"
#include "test_support.hpp"

using namespace gfrag;
using namespace gfrag::analysis;

namespace {

const InitialProfile kGauss = LogGaussian{0.0, 0.1, 1.0};
const double kL2 = std::log(2.0);

pde::Trajectory solve(const InitialProfile& p, double t_end, std::vector<double> snaps,
                      std::vector<double> rays = {}, std::vector<double> probe_t = {}) {
  const auto [lo, hi] = pde::default_y_range(p, 2.0, t_end, rays);
  pde::SolveOptions so;
  so.t_end = t_end;
  so.snapshot_times = std::move(snaps);
  so.probe_rays = std::move(rays);
  so.probe_times = std::move(probe_t);
  return pde::solve_n(pde::LogGrid::build(p, 2.0, lo, hi, 64), so);
}

double bump(double y, double lo, double hi) {
  if (y <= lo || y >= hi) return 0.0;
  const double u = (2.0 * y - lo - hi) / (hi - lo);
  return std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace

TEST(Rescaling, RIsTimesDensityOnRays) {
  const SeriesSource series(kGauss, 2.0);
  const MellinSource mellin(kGauss, 2.0);
  const auto traj = solve(kGauss, 2.0, {2.0});
  const GridSource grid(traj);
  for (double y : {-1.2, -0.7, -0.3}) {
    const double t = 2.0;
    for (const DensitySource* src : {static_cast<const DensitySource*>(&series),
                                     static_cast<const DensitySource*>(&mellin),
                                     static_cast<const DensitySource*>(&grid)}) {
      const double via_v = t * std::exp(2.0 * t * y) * src->v(t, std::exp(t * y));
      EXPECT_LE(test::rel_diff(r_of(*src, t, y), via_v), 1e-10) << src->name();
      EXPECT_EQ(r_of(*src, t, y), t * src->n(t, t * y));
    }
    EXPECT_LT(test::rel_diff(r_of(series, 2.0, y), r_of(mellin, 2.0, y)), 1e-6);
  }
}

TEST(Rescaling, TildeMapsOriginToConcentrationRay) {
  const SeriesSource series(kGauss, 2.0);
  for (double t : {3.0, 12.0}) {
    EXPECT_LE(test::rel_diff(r_tilde_of(series, t, 0.0), r_of(series, t, -kL2) * kL2 / std::sqrt(t)), 1e-15);
  }
  EXPECT_THROW(r_of(series, 0.0, -1.0), DomainError);
}

TEST(WeakConvergence, MassFunctionalPreserved) {
  const SeriesSource series(LogHeaviside{-1.0, 0.0, 1.0}, 2.0);
  for (double t : {0.5, 3.0, 15.0}) {
    const double u0 = moment(LogHeaviside{-1.0, 0.0, 1.0}, 1.0);
    EXPECT_NEAR(weak_test(series, [](double) { return 1.0; }, t), u0, 1e-10 * u0);
    EXPECT_NEAR(weak_test_tilde(series, [](double) { return 1.0; }, t), u0, 1e-10 * u0);
  }
  const auto traj = solve(kGauss, 40.0, {1.0, 10.0, 40.0});
  const GridSource grid(traj);
  for (double t : {1.0, 10.0, 40.0}) EXPECT_NEAR(weak_test(grid, [](double) { return 1.0; }, t), 1.0, 1e-6);
}

TEST(WeakConvergence, CosineFunctionalConverges) {
  const auto traj = solve(kGauss, 60.0, {60.0});
  const GridSource grid(traj);
  const double value = weak_test(grid, [](double y) { return std::cos(y); }, 60.0);
  EXPECT_LT(std::abs(value - std::cos(kL2)) / std::cos(kL2), 0.02);
  const SeriesSource series(kGauss, 2.0);
  EXPECT_NEAR(weak_test(series, [](double y) { return std::cos(y); }, 60.0), value, 1e-8);
}

TEST(WeakConvergence, MassLeavesRegionsAwayFromConcentration) {
  const SeriesSource series(kGauss, 2.0);
  EXPECT_EQ(weak_test(series, [](double y) { return bump(y, 1.0, 2.0); }, 40.0), 0.0);
  double previous = 1.0;
  for (double t : {5.0, 10.0, 20.0, 40.0}) {
    const double w = weak_test(series, [](double y) { return bump(y, -0.25, -0.05); }, t);
    EXPECT_LT(w, previous);
    previous = w;
  }
  EXPECT_LT(previous, 1e-6);
}

TEST(WeakConvergence, TildeApproachesGaussian) {
  const SeriesSource series(kGauss, 2.0);
  for (double c : {-1.0, 0.0, 0.5}) {
    auto phi = [c](double z) { return std::exp(-0.5 * (z - c) * (z - c)); };
    const double limit = gaussian_limit(phi, 1.0);
    // Closed form of int phi G: exp(-c^2/4) / sqrt(2).
    EXPECT_NEAR(limit, std::exp(-c * c / 4.0) / std::sqrt(2.0), 1e-12);
    const double early = std::abs(weak_test_tilde(series, phi, 5.0) - limit);
    const double late = std::abs(weak_test_tilde(series, phi, 80.0) - limit);
    EXPECT_LT(late, early) << c;
    EXPECT_LT(late, 0.05 * limit) << c;
  }
}

TEST(Period, SyntheticSinusoid) {
  for (double period : {0.5, 1.0, 2.0}) {
    LineProbe probe{-kL2 / period, 2.0, {}, {}};
    probe.times = probe_times(10.0, 10.0 + 12.0 * period, period, 40);
    for (double t : probe.times) probe.values.push_back(3.0 + 0.2 * std::sin(2.0 * M_PI * t / period + 0.3));
    const auto est = estimate_period(probe);
    ASSERT_TRUE(est.oscillating);
    EXPECT_NEAR(est.period, period, period / 40.0);
    EXPECT_GE(est.n_cycles, 3.0);
    EXPECT_GT(est.confidence, 1.0);
  }
}

TEST(Period, FlatSignalHasNoOscillation) {
  LineProbe probe{-kL2, 2.0, probe_times(20.0, 40.0, 1.0, 32), {}};
  for (double t : probe.times) probe.values.push_back(2.0 + 0.01 * t + 1e-6 * std::sin(2.0 * M_PI * t));
  const auto est = estimate_period(probe);
  EXPECT_FALSE(est.oscillating);
  EXPECT_TRUE(std::isnan(est.period));
}

TEST(Period, RejectsShortOrCoarseWindows) {
  LineProbe probe{-kL2, 2.0, probe_times(20.0, 23.0, 1.0, 32), {}};
  probe.values.assign(probe.times.size(), 1.0);
  EXPECT_THROW(estimate_period(probe), DomainError);
  LineProbe coarse{-kL2, 2.0, probe_times(20.0, 40.0, 1.0, 8), {}};
  coarse.values.assign(coarse.times.size(), 1.0);
  EXPECT_THROW(estimate_period(coarse), DomainError);
}

TEST(Period, SeriesProbesFollowPeriodLaw) {
  const SeriesSource series(kGauss, 2.0);
  {
    const auto times = probe_times(20.0, 60.0, 1.0, 32);
    const auto est = estimate_period(line_probe(series, -kL2, times));
    ASSERT_TRUE(est.oscillating);
    EXPECT_NEAR(est.period, 1.0, 0.01);
  }
  {
    const auto times = probe_times(20.0, 100.0, 2.0, 32);
    const auto est = estimate_period(line_probe(series, -0.5 * kL2, times));
    ASSERT_TRUE(est.oscillating);
    EXPECT_NEAR(est.period, 2.0, 0.02);
  }
  {
    const SeriesSource wide(LogGaussian{0.0, 0.5, 1.0}, 2.0);
    const auto times = probe_times(20.0, 60.0, 1.0, 32);
    EXPECT_FALSE(estimate_period(line_probe(wide, -kL2, times)).oscillating);
  }
}

TEST(Period, GridProbeMatchesSeriesProbe) {
  const auto times = probe_times(20.0, 30.0, 1.0, 32);
  const auto traj = solve(kGauss, 30.0, {}, {-kL2}, times);
  const auto from_grid = line_probe(traj, -kL2);
  const auto from_series = line_probe(SeriesSource(kGauss, 2.0), -kL2, times);
  ASSERT_EQ(from_grid.values.size(), from_series.values.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    EXPECT_LT(test::rel_diff(from_grid.values[j], from_series.values[j]), 1e-6);
  }
  EXPECT_THROW(line_probe(traj, -0.5), DomainError);
}

TEST(Period, AsymptoticPeriodicityOfLineProfile) {
  const SeriesSource series(kGauss, 2.0);
  const auto times = probe_times(40.0, 41.0, 1.0, 64);
  std::vector<double> shifted;
  for (double t : times) shifted.push_back(t + 1.0);
  const auto a = line_probe(series, -kL2, times);
  const auto b = line_probe(series, -kL2, shifted);
  const double scale = *std::max_element(a.values.begin(), a.values.end());
  for (std::size_t j = 0; j < times.size(); ++j) EXPECT_LT(std::abs(a.values[j] - b.values[j]) / scale, 0.01);
}

TEST(Period, AmplitudeOrdersByInitialWidth) {
  std::vector<double> amps;
  for (double sigma : {0.1, 0.2, 0.5}) {
    const SeriesSource src(LogGaussian{0.0, sigma, 1.0}, 2.0);
    amps.push_back(oscillation_amplitude(line_probe(src, -kL2, probe_times(30.0, 50.0, 1.0, 32)), 40.0));
  }
  EXPECT_GT(amps[0], amps[1]);
  EXPECT_GT(amps[1], kNoOscillationThreshold);
  EXPECT_LT(amps[2], kNoOscillationThreshold);
}

TEST(Envelope, PeakTracksConcentrationRay) {
  const auto traj = solve(kGauss, 40.0, {20.0, 40.0});
  for (double t : {20.0, 40.0}) {
    const auto& s = traj.snapshot_at(t);
    const auto it = std::max_element(s.n.begin(), s.n.end());
    const double y_peak = traj.y(static_cast<std::size_t>(it - s.n.begin()));
    EXPECT_LT(std::abs(y_peak + t * kL2), 3.0 * kL2 * std::sqrt(t)) << t;
  }
}

TEST(Envelope, FitRecoversGaussian) {
  std::vector<double> y;
  std::vector<double> v;
  for (int i = -600; i <= 600; ++i) {
    y.push_back(0.01 * i - 1.5);
    v.push_back(2.5 * test::gaussian_pdf(y.back(), -1.5, 0.7));
  }
  const auto fit = fit_gaussian(y, v);
  EXPECT_NEAR(fit.mean, -1.5, 1e-9);
  EXPECT_NEAR(fit.stddev, 0.7, 1e-3);
  EXPECT_NEAR(fit.mass, 2.5, 1e-6);
  EXPECT_THROW(fit_gaussian(std::vector<double>{0.0}, std::vector<double>{1.0}), DomainError);
}

TEST(Envelope, WidthGrowsLikeSquareRootOfTime) {
  const auto traj = solve(kGauss, 80.0, {20.0, 80.0});
  std::vector<double> ys(traj.size);
  for (std::size_t i = 0; i < traj.size; ++i) ys[i] = traj.y(i);
  const double w20 = fit_gaussian(ys, traj.snapshot_at(20.0).n).stddev;
  const double w80 = fit_gaussian(ys, traj.snapshot_at(80.0).n).stddev;
  EXPECT_NEAR(w80 / w20, 2.0, 0.1);
}

TEST(Compare, RoutesAgreeAndFlagsAreQuiet) {
  const std::vector<double> ts{1.0, 5.0};
  const std::vector<double> xs{0.25, 0.5, 0.75};
  const auto rows = compare_methods(kGauss, ModelParams(0.0, 1.0, 2.0), ts, xs);
  EXPECT_EQ(rows.size(), ts.size() * xs.size() * 4);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.flagged) << r.method_b << " t=" << r.t << " x=" << r.x;
    if (r.method_b == "pde") EXPECT_LT(r.rel_err, 1e-7);
    if (r.method_b == "mellin") EXPECT_LT(r.rel_err, 1e-6);
  }
}

TEST(Compare, GeneralParametersAndHeaviside) {
  const std::vector<double> ts{0.5, 2.0};
  const std::vector<double> xs{0.3, 0.6};
  CompareOptions co;
  co.include_asymptotic = false;
  const auto rows = compare_methods(kGauss, ModelParams(0.4, 1.7, 3.0), ts, xs, co);
  for (const auto& r : rows) EXPECT_FALSE(r.flagged) << r.method_b;
  const auto step_rows = compare_methods(LogHeaviside{-1.0, 0.0, 1.0}, ModelParams(0.0, 1.0, 2.0), ts, xs, co);
  for (const auto& r : step_rows) {
    EXPECT_EQ(r.method_b, "pde");
    EXPECT_FALSE(r.flagged);
  }
  EXPECT_THROW(compare_methods(Dirac{1.0, 1.0}, ModelParams(0.0, 1.0, 2.0), ts, xs), DomainError);
}

TEST(Compare, TightToleranceFlags) {
  const std::vector<double> ts{10.0};
  const std::vector<double> xs{0.5};
  CompareOptions co;
  co.include_pde = false;
  co.include_mellin = false;
  co.tol_asymptotic = 1e-12;
  const auto rows = compare_methods(kGauss, ModelParams(0.0, 1.0, 2.0), ts, xs, co);
  ASSERT_FALSE(rows.empty());
  EXPECT_TRUE(std::any_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.flagged; }));
}

TEST(Compare, RelativeError) {
  EXPECT_EQ(relative_error(2.0, 2.0), 0.0);
  EXPECT_NEAR(relative_error(2.0, 2.2), 0.1, 1e-15);
  EXPECT_GT(relative_error(0.0, 1e-300), 0.0);
}
