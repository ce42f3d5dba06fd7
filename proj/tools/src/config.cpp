#include "gfrag/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfrag/errors.hpp"

namespace gfrag::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) throw DomainError("config: bad number for '" + key + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw DomainError("config: '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::optional<double> parse_auto(const std::string& key, const std::string& text) {
  if (trim(text) == "auto") return std::nullopt;
  return parse_number(key, text);
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt17(v[i]);
  return out;
}

std::string join_words(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

constexpr const char* kSections[] = {"model", "grid", "time", "probes", "compare", "output", "checks"};

void assign(RunConfig& c, const std::string& section, const std::string& key, const std::string& value) {
  const std::string where = section.empty() ? key : section + "." + key;
  if (section.empty()) {
    if (key == "profile") return void(c.profile = parse_profile(value));
  } else if (section == "model") {
    if (key == "g") return void(c.g = parse_number(where, value));
    if (key == "b") return void(c.b = parse_number(where, value));
    if (key == "alpha") return void(c.alpha = parse_number(where, value));
  } else if (section == "grid") {
    if (key == "y_min") return void(c.grid.y_min = parse_auto(where, value));
    if (key == "y_max") return void(c.grid.y_max = parse_auto(where, value));
    if (key == "m") return void(c.grid.m = parse_int(where, value));
  } else if (section == "time") {
    if (key == "t_end") return void(c.time.t_end = parse_number(where, value));
    if (key == "dt") return void(c.time.dt = parse_number(where, value));
    if (key == "snapshots") return void(c.time.snapshots = parse_number_list(value));
  } else if (section == "probes") {
    if (key == "rays") return void(c.probes.rays = parse_number_list(value));
    if (key == "t_start") return void(c.probes.t_start = parse_number(where, value));
    if (key == "samples_per_period") return void(c.probes.samples_per_period = parse_int(where, value));
  } else if (section == "compare") {
    if (key == "times") return void(c.compare.times = parse_number_list(value));
    if (key == "xs") return void(c.compare.xs = parse_number_list(value));
  } else if (section == "output") {
    if (key == "dir") return void(c.output.dir = trim(value));
    if (key == "formats") return void(c.output.formats = split_words(value));
  } else if (section == "checks") {
    if (key == "period_rel_tol") return void(c.checks.period_rel_tol = parse_number(where, value));
    if (key == "weak_rel_tol") return void(c.checks.weak_rel_tol = parse_number(where, value));
    if (key == "mass_tol") return void(c.checks.mass_tol = parse_number(where, value));
    if (key == "pde_rel_tol") return void(c.checks.pde_rel_tol = parse_number(where, value));
    if (key == "mellin_rel_tol") return void(c.checks.mellin_rel_tol = parse_number(where, value));
    if (key == "asymptotic_rel_tol") return void(c.checks.asymptotic_rel_tol = parse_number(where, value));
  } else {
    throw DomainError("config: unknown section [" + section + "]");
  }
  throw DomainError("config: unknown key '" + where + "'");
}

}  // namespace

RunConfig::RunConfig() {
  const double l = std::log(2.0);
  probes.rays = {-2.0 * l, -l, -0.5 * l};
}

void RunConfig::validate() const {
  (void)params();  // g, b, alpha
  if (grid.m < 1) throw DomainError("config: grid.m must be >= 1");
  if (grid.y_min && grid.y_max && !(*grid.y_min < *grid.y_max)) throw DomainError("config: need y_min < y_max");
  if (!(time.t_end >= 0.0)) throw DomainError("config: time.t_end must be >= 0");
  if (!(time.dt > 0.0)) throw DomainError("config: time.dt must be > 0");
  for (double t : time.snapshots) {
    if (t < 0.0 || t > time.t_end) throw DomainError("config: snapshot times must lie in [0, t_end]");
  }
  for (double r : probes.rays) {
    if (!(r < 0.0)) throw DomainError("config: probe rays must be < 0");
  }
  if (!(probes.t_start > 0.0)) throw DomainError("config: probes.t_start must be > 0");
  if (probes.samples_per_period < 1) throw DomainError("config: probes.samples_per_period must be >= 1");
  for (double t : compare.times) {
    if (!(t >= 0.0)) throw DomainError("config: compare times must be >= 0");
  }
  for (double x : compare.xs) {
    if (!(x > 0.0)) throw DomainError("config: compare xs must be > 0");
  }
  for (const auto& f : output.formats) {
    if (f != "csv" && f != "svg") throw DomainError("config: unknown output format '" + f + "'");
  }
  for (double tol : {checks.period_rel_tol, checks.weak_rel_tol, checks.mass_tol, checks.pde_rel_tol,
                     checks.mellin_rel_tol, checks.asymptotic_rel_tol}) {
    if (!(tol > 0.0)) throw DomainError("config: check tolerances must be > 0");
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (trim(item).empty()) throw DomainError("config: empty entry in number list '" + text + "'");
    out.push_back(parse_number("list", trim(item)));
  }
  if (text.back() == ',') throw DomainError("config: trailing comma in number list '" + text + "'");
  return out;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw DomainError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections)) {
        throw DomainError("config line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    assign(base, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string serialize_config(const RunConfig& c) {
  auto opt = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string("auto"); };
  std::ostringstream out;
  out << "profile = " << format_profile(c.profile) << "\n\n";
  out << "[model]\ng = " << fmt17(c.g) << "\nb = " << fmt17(c.b) << "\nalpha = " << fmt17(c.alpha) << "\n\n";
  out << "[grid]\ny_min = " << opt(c.grid.y_min) << "\ny_max = " << opt(c.grid.y_max) << "\nm = " << c.grid.m
      << "\n\n";
  out << "[time]\nt_end = " << fmt17(c.time.t_end) << "\ndt = " << fmt17(c.time.dt)
      << "\nsnapshots = " << join_numbers(c.time.snapshots) << "\n\n";
  out << "[probes]\nrays = " << join_numbers(c.probes.rays) << "\nt_start = " << fmt17(c.probes.t_start)
      << "\nsamples_per_period = " << c.probes.samples_per_period << "\n\n";
  out << "[compare]\ntimes = " << join_numbers(c.compare.times) << "\nxs = " << join_numbers(c.compare.xs)
      << "\n\n";
  out << "[output]\ndir = " << c.output.dir << "\nformats = " << join_words(c.output.formats) << "\n\n";
  out << "[checks]\nperiod_rel_tol = " << fmt17(c.checks.period_rel_tol)
      << "\nweak_rel_tol = " << fmt17(c.checks.weak_rel_tol) << "\nmass_tol = " << fmt17(c.checks.mass_tol)
      << "\npde_rel_tol = " << fmt17(c.checks.pde_rel_tol) << "\nmellin_rel_tol = " << fmt17(c.checks.mellin_rel_tol)
      << "\nasymptotic_rel_tol = " << fmt17(c.checks.asymptotic_rel_tol) << "\n";
  return out.str();
}

}  // namespace gfrag::cli
