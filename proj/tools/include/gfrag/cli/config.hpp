#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfrag/model.hpp"
#include "gfrag/profile.hpp"

namespace gfrag::cli {

struct GridSpec {
  std::optional<double> y_min;  ///< unset: chosen from t_end and the probe rays
  std::optional<double> y_max;  ///< unset: just past the profile support
  int m = 64;
  bool operator==(const GridSpec&) const = default;
};

struct TimeSpec {
  double t_end = 60.0;
  double dt = 0.01;
  std::vector<double> snapshots{0.0, 10.0, 20.0, 40.0, 60.0};
  bool operator==(const TimeSpec&) const = default;
};

struct ProbeSpec {
  std::vector<double> rays;  ///< y < 0; probes record sqrt(t) e^{-Psi(y)t} n(t, yt)
  double t_start = 20.0;
  int samples_per_period = 32;
  bool operator==(const ProbeSpec&) const = default;
};

struct CompareSpec {
  std::vector<double> times{1.0, 2.0, 5.0};
  std::vector<double> xs{0.25, 0.5, 0.75};
  bool operator==(const CompareSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "svg"};
  bool operator==(const OutputSpec&) const = default;
};

/// Thresholds used by `analyze`; any violation gives exit code 4.
struct CheckSpec {
  double period_rel_tol = 0.02;
  double weak_rel_tol = 0.02;
  double mass_tol = 1e-6;
  double pde_rel_tol = 1e-7;
  double mellin_rel_tol = 1e-6;
  double asymptotic_rel_tol = 0.1;
  bool operator==(const CheckSpec&) const = default;
};

struct RunConfig {
  InitialProfile profile = LogGaussian{0.0, 0.1, 1.0};
  double g = 0.0;
  double b = 1.0;
  double alpha = 2.0;
  GridSpec grid;
  TimeSpec time;
  ProbeSpec probes;
  CompareSpec compare;
  OutputSpec output;
  CheckSpec checks;

  RunConfig();

  ModelParams params() const { return {g, b, alpha}; }

  /// Re-checks every component invariant; throws DomainError.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses flat `key = value` text with `[section]` headers; `#` starts a
/// comment. Unknown sections or keys are rejected. Keys not present keep the
/// values already in `base`.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Writes every field; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Comma-separated list of numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace gfrag::cli
