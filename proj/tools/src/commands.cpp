#include "gfrag/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "gfrag/cli/csv.hpp"
#include "gfrag/cli/svg.hpp"
#include "gfrag/errors.hpp"
#include "gfrag/mellin.hpp"
#include "gfrag/series.hpp"

namespace gfrag::cli {

namespace {

bool wants(const RunConfig& c, const char* format) {
  return std::find(c.output.formats.begin(), c.output.formats.end(), format) != c.output.formats.end();
}

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output.dir);
  const auto path = std::filesystem::path(c.output.dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  return out;
}

double evaluate_point(const RunConfig& c, const std::string& method, double t, double x) {
  const ModelParams params = c.params();
  if (method == "series") return series::eval_u(params, c.profile, t, x);
  if (method == "mellin") {
    const double decay = std::exp(-params.g() * t);
    return decay * mellin::inverse_mellin_v(c.profile, params.alpha(), params.b() * t, x * decay);
  }
  if (method == "asymp-theta") return mellin::asymp_u(params, c.profile, t, x).theta_form;
  if (method == "asymp-poisson") return mellin::asymp_u(params, c.profile, t, x).poisson_form;
  throw DomainError("unknown method '" + method + "' (series, mellin, asymp-theta, asymp-poisson)");
}

}  // namespace

int cmd_evaluate(const RunConfig& config, const EvaluateRequest& request, std::ostream& csv) {
  config.validate();
  if (request.times.empty() || request.xs.empty()) throw DomainError("evaluate: need at least one --t and one --x");
  // Evaluate everything before printing so a domain error leaves no partial table.
  std::vector<std::vector<CsvWriter::Cell>> rows;
  for (double t : request.times) {
    for (double x : request.xs) rows.push_back({t, x, evaluate_point(config, request.method, t, x), request.method});
  }
  CsvWriter w(csv, {"t", "x", "value", "method"});
  for (const auto& r : rows) w.row(r);
  return kExitOk;
}

pde::Trajectory run_solver(const RunConfig& config, std::vector<double> extra_snapshots) {
  config.validate();
  const double alpha = config.alpha;
  const double log_alpha = std::log(alpha);
  const double t_end = config.time.t_end;

  pde::SolveOptions so;
  so.t_end = t_end;
  so.dt = config.time.dt;
  so.snapshot_times = config.time.snapshots;
  for (double t : extra_snapshots) {
    if (t >= 0.0 && t <= t_end) so.snapshot_times.push_back(t);
  }
  std::sort(so.snapshot_times.begin(), so.snapshot_times.end());
  so.snapshot_times.erase(std::unique(so.snapshot_times.begin(), so.snapshot_times.end()), so.snapshot_times.end());

  if (!config.probes.rays.empty() && config.probes.t_start <= t_end) {
    so.probe_rays = config.probes.rays;
    double shortest = std::numeric_limits<double>::infinity();
    for (double r : config.probes.rays) shortest = std::min(shortest, -log_alpha / r);
    so.probe_times = analysis::probe_times(config.probes.t_start, t_end, shortest, config.probes.samples_per_period);
  }

  auto [y_min, y_max] = pde::default_y_range(config.profile, alpha, t_end, so.probe_rays);
  if (config.grid.y_min) y_min = *config.grid.y_min;
  if (config.grid.y_max) y_max = *config.grid.y_max;
  const auto grid = pde::LogGrid::build(config.profile, alpha, y_min, y_max, config.grid.m);
  return pde::solve_n(grid, so);
}

int cmd_solve(const RunConfig& config, std::ostream& log) {
  const auto traj = run_solver(config);
  if (config.g != 0.0 || config.b != 1.0) {
    log << "note: the grid route solves the pure fragmentation problem; u(t,x) = e^{-gt} v(bt, x e^{-gt})\n";
  }

  if (wants(config, "csv")) {
    auto out = open_output(config, "snapshots.csv");
    CsvWriter w(out, {"t", "y", "n", "sqrt_t_n"});
    for (const auto& s : traj.snapshots) {
      for (std::size_t i = 0; i < s.n.size(); ++i) {
        if (s.n[i] != 0.0) w.row({s.t, traj.y(i), s.n[i], std::sqrt(s.t) * s.n[i]});
      }
    }
    auto diag = open_output(config, "diagnostics.csv");
    CsvWriter d(diag, {"t", "mass", "argmax_y"});
    for (const auto& g : traj.diagnostics) d.row({g.t, g.mass, g.argmax});
    if (!traj.probe_rays.empty()) {
      auto pout = open_output(config, "probes.csv");
      CsvWriter p(pout, {"t", "ray", "n", "f"});
      for (std::size_t r = 0; r < traj.probe_rays.size(); ++r) {
        const auto probe = analysis::line_probe(traj, traj.probe_rays[r]);
        for (std::size_t j = 0; j < probe.times.size(); ++j) {
          p.row({probe.times[j], traj.probe_rays[r], traj.probe_values[r][j], probe.values[j]});
        }
      }
    }
  }
  if (wants(config, "svg")) {
    LinePlot plot{"sqrt(t) n(t,y)", "y", "sqrt(t) n", {}};
    for (const auto& s : traj.snapshots) {
      if (s.t <= 0.0) continue;
      const double peak = *std::max_element(s.n.begin(), s.n.end());
      PlotSeries ps{"t = " + format_double(s.t), {}, {}};
      for (std::size_t i = 0; i < s.n.size(); ++i) {
        if (s.n[i] > 1e-6 * peak) {
          ps.x.push_back(traj.y(i));
          ps.y.push_back(std::sqrt(s.t) * s.n[i]);
        }
      }
      plot.series.push_back(std::move(ps));
    }
    auto out = open_output(config, "snapshots.svg");
    out << render_svg(plot);
    if (!traj.probe_rays.empty()) {
      LinePlot pp{"sqrt(t) exp(-Psi(y) t) n(t, y t)", "t", "f_y(t)", {}};
      for (double r : traj.probe_rays) {
        const auto probe = analysis::line_probe(traj, r);
        pp.series.push_back({"y = " + format_double(r), probe.times, probe.values});
      }
      auto pout = open_output(config, "probes.svg");
      pout << render_svg(pp);
    }
  }

  const auto& last = traj.diagnostics.back();
  log << "solved to t = " << format_double(last.t) << " on " << traj.size << " nodes; mass "
      << format_double(traj.diagnostics.front().mass) << " -> " << format_double(last.mass) << "\n";
  return kExitOk;
}

bool AnalyzeReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

AnalyzeReport analyze(const RunConfig& config) {
  AnalyzeReport report;
  const double alpha = config.alpha;
  const double log_alpha = std::log(alpha);
  const double t_end = config.time.t_end;
  const auto traj = run_solver(config, {t_end});

  // Conservation of int n dy on the grid.
  const double mass0 = traj.diagnostics.front().mass;
  double drift = 0.0;
  for (const auto& d : traj.diagnostics) drift = std::max(drift, std::abs(d.mass - mass0) / mass0);
  report.checks.push_back({"mass conservation", drift, config.checks.mass_tol, drift <= config.checks.mass_tol,
                           "max |M(t) - M(0)| / M(0) over all recorded times"});
  const double u0_2 = moment(config.profile, 1.0);
  if (config.profile.is_gaussian()) {
    const double err = std::abs(mass0 - u0_2) / u0_2;
    report.checks.push_back({"grid mass vs U0(2)", err, config.checks.mass_tol, err <= config.checks.mass_tol,
                             "trapezoid int n(0,y) dy against the closed form"});
  }

  // Period law on every probe ray.
  for (double r : traj.probe_rays) {
    const auto probe = analysis::line_probe(traj, r);
    PeriodRow row{r, probe.expected_period(), {}};
    row.estimate = analysis::estimate_period(probe);
    if (row.estimate.oscillating) {
      const double err = std::abs(row.estimate.period - row.expected) / row.expected;
      report.checks.push_back({"period on ray y = " + format_double(r), err, config.checks.period_rel_tol,
                               err <= config.checks.period_rel_tol,
                               "estimated " + format_double(row.estimate.period) + " vs expected " +
                                   format_double(row.expected)});
    }
    report.periods.push_back(row);
  }

  // Weak convergence of r(t,.) towards U0(2) delta_{-log alpha}.
  if (t_end > 0.0) {
    const analysis::GridSource src(traj);
    const double mass = analysis::weak_test(src, [](double) { return 1.0; }, t_end);
    const double mass_err = std::abs(mass - mass0) / mass0;
    report.checks.push_back({"int r dy at t_end", mass_err, config.checks.mass_tol, mass_err <= config.checks.mass_tol,
                             "mass functional of r"});
    const double target = mass0 * std::cos(-log_alpha);
    const double cosine = analysis::weak_test(src, [](double y) { return std::cos(y); }, t_end);
    const double err = std::abs(cosine - target) / std::abs(target);
    report.checks.push_back({"int cos(y) r dy at t_end", err, config.checks.weak_rel_tol,
                             err <= config.checks.weak_rel_tol,
                             "value " + format_double(cosine) + " vs limit " + format_double(target)});
  }

  // Asymptotic formula on the concentration line x = alpha^{-t}.
  if (!config.profile.is_dirac()) {
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double t : {10.0, 15.0, 20.0, 25.0, 30.0}) {
      const double x = std::pow(alpha, -t);
      const double ref = series::eval_v(config.profile, alpha, t, x);
      const double approx = mellin::asymp_v_poisson(config.profile, alpha, t, x);
      const double err = analysis::relative_error(ref, approx);
      report.asymptotics.push_back({t, x, ref, approx, err});
      monotone = monotone && err <= previous;
      previous = err;
    }
    const double last = report.asymptotics.back().rel_err;
    report.checks.push_back({"asymptotic formula at t = 30", last, config.checks.asymptotic_rel_tol,
                             last <= config.checks.asymptotic_rel_tol, "series vs Poisson-resummed asymptotics"});
    report.checks.push_back({"asymptotic error non-increasing", monotone ? 0.0 : 1.0, 0.0, monotone,
                             "t = 10, 15, 20, 25, 30 on x = alpha^-t"});
  }

  // Route agreement at small times.
  analysis::CompareOptions co;
  co.include_asymptotic = false;
  co.m = config.grid.m;
  co.dt = config.time.dt;
  co.tol_pde = config.checks.pde_rel_tol;
  co.tol_mellin = config.checks.mellin_rel_tol;
  report.comparisons =
      analysis::compare_methods(config.profile, config.params(), config.compare.times, config.compare.xs, co);
  double worst_pde = 0.0;
  double worst_mellin = 0.0;
  bool any_mellin = false;
  for (const auto& row : report.comparisons) {
    if (row.method_b == "pde") worst_pde = std::max(worst_pde, row.rel_err);
    if (row.method_b == "mellin") {
      any_mellin = true;
      worst_mellin = std::max(worst_mellin, row.rel_err);
    }
  }
  if (!report.comparisons.empty()) {
    report.checks.push_back({"series vs pde", worst_pde, config.checks.pde_rel_tol,
                             worst_pde <= config.checks.pde_rel_tol, "max relative error on the compare grid"});
  }
  if (any_mellin) {
    report.checks.push_back({"series vs mellin", worst_mellin, config.checks.mellin_rel_tol,
                             worst_mellin <= config.checks.mellin_rel_tol, "max relative error on the compare grid"});
  }
  return report;
}

void write_comparison_csv(const std::vector<analysis::ComparisonRow>& rows, std::ostream& out) {
  CsvWriter w(out, {"method_a", "method_b", "t", "x", "val_a", "val_b", "rel_err", "flag"});
  for (const auto& r : rows) {
    w.row({r.method_a, r.method_b, r.t, r.x, r.val_a, r.val_b, r.rel_err, std::string(r.flagged ? "FAIL" : "ok")});
  }
}

int cmd_analyze(const RunConfig& config, std::ostream& log) {
  const auto report = analyze(config);

  if (wants(config, "csv")) {
    auto checks = open_output(config, "checks.csv");
    CsvWriter w(checks, {"check", "value", "threshold", "passed"});
    for (const auto& c : report.checks) w.row({c.name, c.value, c.threshold, std::string(c.passed ? "yes" : "no")});
    auto periods = open_output(config, "periods.csv");
    CsvWriter p(periods, {"ray", "expected_period", "estimated_period", "oscillating", "amplitude", "confidence"});
    for (const auto& r : report.periods) {
      p.row({r.ray, r.expected, r.estimate.period, std::string(r.estimate.oscillating ? "yes" : "no"),
             r.estimate.amplitude, r.estimate.confidence});
    }
    auto asym = open_output(config, "asymptotics.csv");
    CsvWriter a(asym, {"t", "x", "series", "asymp_poisson", "rel_err"});
    for (const auto& r : report.asymptotics) a.row({r.t, r.x, r.series, r.asymptotic, r.rel_err});
    auto cmp = open_output(config, "compare.csv");
    write_comparison_csv(report.comparisons, cmp);
  }

  log << "period table\n";
  for (const auto& r : report.periods) {
    log << "  y = " << format_double(r.ray) << "  expected " << format_double(r.expected) << "  estimated "
        << (r.estimate.oscillating ? format_double(r.estimate.period) : std::string("no oscillation"))
        << "  amplitude " << format_double(r.estimate.amplitude) << "\n";
  }
  log << "checks\n";
  for (const auto& c : report.checks) {
    log << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << ": " << format_double(c.value)
        << " (threshold " << format_double(c.threshold) << ") " << c.detail << "\n";
  }
  if (!report.all_passed()) {
    for (const auto& c : report.checks) {
      if (!c.passed) log << "failed check: " << c.name << "\n";
    }
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_compare(const RunConfig& config, std::ostream& csv) {
  config.validate();
  analysis::CompareOptions co;
  co.m = config.grid.m;
  co.dt = config.time.dt;
  co.tol_pde = config.checks.pde_rel_tol;
  co.tol_mellin = config.checks.mellin_rel_tol;
  co.tol_asymptotic = config.checks.asymptotic_rel_tol;
  const auto rows =
      analysis::compare_methods(config.profile, config.params(), config.compare.times, config.compare.xs, co);
  write_comparison_csv(rows, csv);
  return kExitOk;
}

}  // namespace gfrag::cli
