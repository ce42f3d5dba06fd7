#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gfrag/analysis.hpp"
#include "gfrag/cli/config.hpp"
#include "gfrag/pde.hpp"

namespace gfrag::cli {

/// Process exit codes: 0 ok, 2 domain error, 3 numerical guard, 4 failed check.
enum ExitCode : int { kExitOk = 0, kExitDomain = 2, kExitNumerical = 3, kExitCheckFailed = 4 };

struct EvaluateRequest {
  std::string method;  ///< series | mellin | asymp-theta | asymp-poisson
  std::vector<double> times;
  std::vector<double> xs;
};

/// CSV `t,x,value,method` for every (t, x) pair, u(t,x) for the configured
/// (g, b, alpha).
int cmd_evaluate(const RunConfig& config, const EvaluateRequest& request, std::ostream& csv);

/// Grid solve of n(t,y) for the pure fragmentation problem with the
/// configured snapshots and probe rays (probes sampled from probes.t_start).
pde::Trajectory run_solver(const RunConfig& config, std::vector<double> extra_snapshots = {});

/// Writes snapshots.csv, diagnostics.csv, probes.csv (and SVGs) into output.dir.
int cmd_solve(const RunConfig& config, std::ostream& log);

/// Figure ids with an analog: 1-9 and 11.
std::vector<int> figure_ids();

/// Writes figN_*.csv / figN_*.svg into output.dir. Unknown id: DomainError.
int cmd_figures(int id, const RunConfig& base, std::ostream& log);

struct CheckResult {
  std::string name;
  double value;
  double threshold;
  bool passed;
  std::string detail;
};

struct PeriodRow {
  double ray;
  double expected;
  analysis::PeriodEstimate estimate;
};

struct AsymptoticRow {
  double t;
  double x;
  double series;
  double asymptotic;
  double rel_err;
};

struct AnalyzeReport {
  std::vector<CheckResult> checks;
  std::vector<PeriodRow> periods;
  std::vector<AsymptoticRow> asymptotics;
  std::vector<analysis::ComparisonRow> comparisons;

  bool all_passed() const;
};

AnalyzeReport analyze(const RunConfig& config);

/// Runs analyze, prints a summary, writes report CSVs into output.dir.
/// Returns kExitCheckFailed if any check fails.
int cmd_analyze(const RunConfig& config, std::ostream& log);

/// CSV `method_a,method_b,t,x,val_a,val_b,rel_err,flag` on the compare grid.
int cmd_compare(const RunConfig& config, std::ostream& csv);

void write_comparison_csv(const std::vector<analysis::ComparisonRow>& rows, std::ostream& out);

}  // namespace gfrag::cli
