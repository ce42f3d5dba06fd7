#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gfrag/cli/commands.hpp"
#include "gfrag/cli/config.hpp"
#include "gfrag/errors.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> profile;
  std::optional<double> alpha, g, b, y_min, y_max, t_end, dt;
  std::optional<int> m;
  std::vector<double> snapshots;
  std::vector<double> probe_y;
  std::optional<std::string> out;
  std::vector<std::string> formats;
};

gfrag::cli::RunConfig resolve(const Overrides& o) {
  using gfrag::cli::RunConfig;
  RunConfig c = o.config_path.empty() ? RunConfig{} : gfrag::cli::load_config(o.config_path);
  if (o.profile) c.profile = gfrag::parse_profile(*o.profile);
  if (o.alpha) c.alpha = *o.alpha;
  if (o.g) c.g = *o.g;
  if (o.b) c.b = *o.b;
  if (o.m) c.grid.m = *o.m;
  if (o.y_min) c.grid.y_min = *o.y_min;
  if (o.y_max) c.grid.y_max = *o.y_max;
  if (o.t_end) c.time.t_end = *o.t_end;
  if (o.dt) c.time.dt = *o.dt;
  if (!o.snapshots.empty()) {
    c.time.snapshots = o.snapshots;
  } else if (o.t_end) {
    // Inherited snapshots past a new t_end are dropped rather than rejected.
    std::erase_if(c.time.snapshots, [&](double t) { return t > c.time.t_end; });
  }
  if (!o.probe_y.empty()) c.probes.rays = o.probe_y;
  if (o.out) c.output.dir = *o.out;
  if (!o.formats.empty()) c.output.formats = o.formats;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gfrag: critical growth-fragmentation solver and analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "Config file (key = value with [sections])")->check(CLI::ExistingFile);
  app.add_option("--profile", o.profile, "e.g. \"loggaussian mu=0 sigma=0.1 mass=1\"")->expected(1);
  app.add_option("--alpha", o.alpha, "Division ratio alpha > 1")->expected(1);
  app.add_option("--g", o.g, "Growth rate g >= 0")->expected(1);
  app.add_option("--b", o.b, "Division rate b > 0")->expected(1);
  app.add_option("--m", o.m, "Grid nodes per log(alpha)")->expected(1);
  app.add_option("--y-min", o.y_min, "Left grid edge in y = log x")->expected(1);
  app.add_option("--y-max", o.y_max, "Right grid edge in y = log x")->expected(1);
  app.add_option("--t-end", o.t_end, "Final time")->expected(1);
  app.add_option("--dt", o.dt, "RK4 time step")->expected(1);
  app.add_option("--snapshots", o.snapshots, "Snapshot times")->delimiter(',');
  app.add_option("--probe-y", o.probe_y, "Probe rays y < 0")->delimiter(',');
  app.add_option("--out", o.out, "Output directory")->expected(1);
  app.add_option("--formats", o.formats, "Output formats: csv, svg")->delimiter(',');

  gfrag::cli::EvaluateRequest req{"series", {}, {}};
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate u(t,x) by one method, CSV to stdout");
  evaluate->add_option("--method", req.method, "series | mellin | asymp-theta | asymp-poisson");
  evaluate->add_option("--t", req.times, "Times")->delimiter(',')->required();
  evaluate->add_option("--x", req.xs, "Sizes x > 0")->delimiter(',')->required();

  auto* solve = app.add_subcommand("solve", "Grid solve; snapshots, diagnostics and probes to --out");

  int figure_id = 1;
  auto* figures = app.add_subcommand("figures", "Emit the data and plot of one figure analog to --out");
  figures->add_option("--id", figure_id, "Figure id (1-9, 11)")->required();

  auto* analyze = app.add_subcommand("analyze", "Run every configured check; exit 4 on violation");
  auto* compare = app.add_subcommand("compare", "Cross-method comparison table, CSV to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gfrag::cli::kExitDomain;
  }

  try {
    const auto config = resolve(o);
    if (*evaluate) return gfrag::cli::cmd_evaluate(config, req, std::cout);
    if (*solve) return gfrag::cli::cmd_solve(config, std::cerr);
    if (*figures) return gfrag::cli::cmd_figures(figure_id, config, std::cerr);
    if (*analyze) return gfrag::cli::cmd_analyze(config, std::cout);
    if (*compare) return gfrag::cli::cmd_compare(config, std::cout);
  } catch (const gfrag::NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return gfrag::cli::kExitNumerical;
  } catch (const gfrag::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return gfrag::cli::kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return gfrag::cli::kExitOk;
}
