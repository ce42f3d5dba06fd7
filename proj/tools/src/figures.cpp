#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "gfrag/cli/commands.hpp"
#include "gfrag/cli/csv.hpp"
#include "gfrag/cli/svg.hpp"
#include "gfrag/errors.hpp"

namespace gfrag::cli {

namespace {

enum class FigureKind { kProbes, kProfiles };

struct FigureSpec {
  int id;
  FigureKind kind;
  InitialProfile profile;
  const char* title;
};

std::vector<FigureSpec> figure_table() {
  const InitialProfile narrow = LogGaussian{0.0, 0.1, 1.0};
  const InitialProfile medium = LogGaussian{0.0, 0.2, 1.0};
  const InitialProfile wide = LogGaussian{0.0, 0.5, 1.0};
  const InitialProfile step_small = LogHeaviside{-0.2, 0.0, 1.0};
  const InitialProfile step_one = LogHeaviside{-1.0, 0.0, 1.0};
  const InitialProfile step_five = LogHeaviside{-5.0, 0.0, 1.0};
  return {
      {1, FigureKind::kProbes, narrow, "probes, gaussian sigma = 0.1"},
      {2, FigureKind::kProfiles, narrow, "sqrt(t) n(t,y), gaussian sigma = 0.1"},
      {3, FigureKind::kProbes, medium, "probes, gaussian sigma = 0.2"},
      {4, FigureKind::kProfiles, medium, "sqrt(t) n(t,y), gaussian sigma = 0.2"},
      {5, FigureKind::kProfiles, wide, "sqrt(t) n(t,y), gaussian sigma = 0.5"},
      {6, FigureKind::kProbes, step_small, "probes, heaviside on [-0.2, 0]"},
      {7, FigureKind::kProfiles, step_small, "sqrt(t) n(t,y), heaviside on [-0.2, 0]"},
      {8, FigureKind::kProbes, step_one, "probes, heaviside on [-1, 0]"},
      {9, FigureKind::kProfiles, step_one, "sqrt(t) n(t,y), heaviside on [-1, 0]"},
      {11, FigureKind::kProfiles, step_five, "sqrt(t) n(t,y), heaviside on [-5, 0]"},
  };
}

std::ofstream open_in(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output.dir);
  const auto path = std::filesystem::path(c.output.dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  return out;
}

bool wants(const RunConfig& c, const char* format) {
  return std::find(c.output.formats.begin(), c.output.formats.end(), format) != c.output.formats.end();
}

void write_periods(const RunConfig& c, const std::string& stem, const std::vector<analysis::LineProbe>& probes,
                   std::ostream& log) {
  auto periods = open_in(c, stem + "_periods.csv");
  CsvWriter pw(periods, {"ray", "expected_period", "estimated_period", "oscillating", "amplitude", "confidence"});
  for (const auto& p : probes) {
    const auto est = analysis::estimate_period(p);
    pw.row({p.y, p.expected_period(), est.period, std::string(est.oscillating ? "yes" : "no"), est.amplitude,
            est.confidence});
    log << stem << ": y = " << format_double(p.y) << " expected period " << format_double(p.expected_period())
        << ", estimated " << (est.oscillating ? format_double(est.period) : std::string("none")) << "\n";
  }
}

void probes_figure(const FigureSpec& fig, RunConfig c, std::ostream& log) {
  const double L = std::log(c.alpha);
  c.time.t_end = 100.0;
  c.time.snapshots = {0.0};
  if (c.probes.rays.empty()) c.probes.rays = {-L, -2.0 * L, -0.5 * L};
  const auto traj = run_solver(c);
  const std::string stem = "fig" + std::to_string(fig.id);

  std::vector<analysis::LineProbe> probes;
  for (double r : traj.probe_rays) probes.push_back(analysis::line_probe(traj, r));

  if (wants(c, "csv")) {
    auto out = open_in(c, stem + "_probes.csv");
    CsvWriter w(out, {"t", "ray", "f"});
    for (const auto& p : probes) {
      for (std::size_t j = 0; j < p.times.size(); ++j) w.row({p.times[j], p.y, p.values[j]});
    }
  }
  write_periods(c, stem, probes, log);
  if (wants(c, "svg")) {
    LinePlot plot{std::string(fig.title), "t", "sqrt(t) exp(-Psi(y) t) n(t, y t)", {}};
    for (const auto& p : probes) plot.series.push_back({"y = " + format_double(p.y), p.times, p.values});
    auto out = open_in(c, stem + "_probes.svg");
    out << render_svg(plot);
  }
}

void profiles_figure(const FigureSpec& fig, RunConfig c, std::ostream& log) {
  c.time.t_end = 80.0;
  c.time.snapshots = {10.0, 20.0, 40.0, 80.0};
  c.probes.rays = {-std::log(c.alpha)};
  const auto traj = run_solver(c);
  const std::string stem = "fig" + std::to_string(fig.id);
  // Period estimate on the dominant ray, so "no oscillation" is reported too.
  write_periods(c, stem, {analysis::line_probe(traj, traj.probe_rays.front())}, log);

  std::vector<double> ys(traj.size);
  for (std::size_t i = 0; i < traj.size; ++i) ys[i] = traj.y(i);

  if (wants(c, "csv")) {
    auto out = open_in(c, stem + "_profiles.csv");
    CsvWriter w(out, {"t", "y", "sqrt_t_n"});
    for (const auto& s : traj.snapshots) {
      for (std::size_t i = 0; i < s.n.size(); ++i) {
        if (s.n[i] != 0.0) w.row({s.t, ys[i], std::sqrt(s.t) * s.n[i]});
      }
    }
  }
  auto env = open_in(c, stem + "_envelope.csv");
  CsvWriter ew(env, {"t", "mean", "stddev", "mass"});
  for (const auto& s : traj.snapshots) {
    const auto fit = analysis::fit_gaussian(ys, s.n);
    ew.row({s.t, fit.mean, fit.stddev, fit.mass});
    log << stem << ": t = " << format_double(s.t) << " envelope mean " << format_double(fit.mean) << " stddev "
        << format_double(fit.stddev) << "\n";
  }
  if (wants(c, "svg")) {
    LinePlot plot{std::string(fig.title), "y", "sqrt(t) n(t,y)", {}};
    for (const auto& s : traj.snapshots) {
      const double peak = *std::max_element(s.n.begin(), s.n.end());
      PlotSeries ps{"t = " + format_double(s.t), {}, {}};
      for (std::size_t i = 0; i < s.n.size(); ++i) {
        if (s.n[i] > 1e-4 * peak) {
          ps.x.push_back(ys[i]);
          ps.y.push_back(std::sqrt(s.t) * s.n[i]);
        }
      }
      plot.series.push_back(std::move(ps));
    }
    auto out = open_in(c, stem + "_profiles.svg");
    out << render_svg(plot);
  }
}

}  // namespace

std::vector<int> figure_ids() {
  std::vector<int> ids;
  for (const auto& f : figure_table()) ids.push_back(f.id);
  return ids;
}

int cmd_figures(int id, const RunConfig& base, std::ostream& log) {
  const auto table = figure_table();
  const auto it = std::find_if(table.begin(), table.end(), [id](const FigureSpec& f) { return f.id == id; });
  if (it == table.end()) {
    std::string known;
    for (int k : figure_ids()) known += (known.empty() ? "" : ", ") + std::to_string(k);
    throw DomainError("unknown figure id " + std::to_string(id) + " (known: " + known + ")");
  }
  RunConfig c = base;
  c.profile = it->profile;
  c.g = 0.0;
  c.b = 1.0;
  c.grid.y_min.reset();
  c.grid.y_max.reset();
  c.validate();
  if (it->kind == FigureKind::kProbes) {
    probes_figure(*it, c, log);
  } else {
    profiles_figure(*it, c, log);
  }
  return kExitOk;
}

}  // namespace gfrag::cli
