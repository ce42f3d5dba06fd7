#include "gfrag/profile.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "gfrag/errors.hpp"

namespace gfrag {

namespace {

constexpr double kGaussianReach = 12.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double gaussian_n(const LogGaussian& g, double y) {
  const double z = (y - g.mu) / g.sigma;
  return g.mass * std::exp(-0.5 * z * z) / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double log_gaussian_n(const LogGaussian& g, double y) {
  const double z = (y - g.mu) / g.sigma;
  return std::log(g.mass) - 0.5 * z * z - std::log(g.sigma * std::sqrt(2.0 * std::numbers::pi));
}

bool in_heaviside(const LogHeaviside& h, double y) { return y >= h.a && y <= h.b; }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

InitialProfile::InitialProfile(LogGaussian p) : v_(p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw DomainError("loggaussian: sigma must be > 0");
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw DomainError("loggaussian: mass must be > 0");
  if (!std::isfinite(p.mu)) throw DomainError("loggaussian: mu must be finite");
}

InitialProfile::InitialProfile(LogHeaviside p) : v_(p) {
  if (!(p.a < p.b) || !std::isfinite(p.a) || !std::isfinite(p.b)) {
    throw DomainError("logheaviside: need finite a < b");
  }
  if (!(p.height > 0.0) || !std::isfinite(p.height)) throw DomainError("logheaviside: height must be > 0");
}

InitialProfile::InitialProfile(Dirac p) : v_(p) {
  if (!(p.x0 > 0.0) || !std::isfinite(p.x0)) throw DomainError("dirac: x0 must be > 0");
  if (!(p.weight > 0.0) || !std::isfinite(p.weight)) throw DomainError("dirac: weight must be > 0");
}

double InitialProfile::support_left() const {
  return std::visit(Overloaded{[](const LogGaussian& g) { return g.mu - kGaussianReach * g.sigma; },
                               [](const LogHeaviside& h) { return h.a; },
                               [](const Dirac& d) { return std::log(d.x0); }},
                    v_);
}

double InitialProfile::support_right() const {
  return std::visit(Overloaded{[](const LogGaussian& g) { return g.mu + kGaussianReach * g.sigma; },
                               [](const LogHeaviside& h) { return h.b; },
                               [](const Dirac& d) { return std::log(d.x0); }},
                    v_);
}

double InitialProfile::peak_n() const {
  return std::visit(
      Overloaded{[](const LogGaussian& g) { return gaussian_n(g, g.mu); },
                 [](const LogHeaviside& h) { return h.height; },
                 [](const Dirac&) -> double { throw DomainError("dirac profile: no pointwise density"); }},
      v_);
}

double profile_eval_y(const InitialProfile& p, double y) {
  return std::visit(
      Overloaded{[y](const LogGaussian& g) { return gaussian_n(g, y); },
                 [y](const LogHeaviside& h) { return in_heaviside(h, y) ? h.height : 0.0; },
                 [](const Dirac&) -> double { throw DomainError("dirac profile: no pointwise density"); }},
      p.variant());
}

double profile_eval_x(const InitialProfile& p, double x) {
  if (!(x > 0.0)) throw DomainError("profile_eval_x: x must be > 0");
  const double y = std::log(x);
  return profile_eval_y(p, y) / (x * x);
}

double log_profile_eval_x(const InitialProfile& p, double x) {
  if (!(x > 0.0)) throw DomainError("log_profile_eval_x: x must be > 0");
  const double y = std::log(x);
  return std::visit(
      Overloaded{[y](const LogGaussian& g) { return log_gaussian_n(g, y) - 2.0 * y; },
                 [y](const LogHeaviside& h) {
                   return in_heaviside(h, y) ? std::log(h.height) - 2.0 * y
                                             : -std::numeric_limits<double>::infinity();
                 },
                 [](const Dirac&) -> double { throw DomainError("dirac profile: no pointwise density"); }},
      p.variant());
}

Complex mellin_U0(const InitialProfile& p, Complex s) {
  const Complex w = s - 2.0;
  return std::visit(
      Overloaded{[&](const LogGaussian& g) {
                   return g.mass * std::exp(g.mu * w + 0.5 * g.sigma * g.sigma * w * w);
                 },
                 [&](const LogHeaviside& h) -> Complex {
                   if (std::abs(w) < 1e-6) {
                     // Removable singularity at s = 2: Taylor expansion in w.
                     const double d1 = h.b - h.a;
                     const double d2 = (h.b * h.b - h.a * h.a) / 2.0;
                     const double d3 = (h.b * h.b * h.b - h.a * h.a * h.a) / 6.0;
                     return h.height * (d1 + w * (d2 + w * d3));
                   }
                   // e^{wb} - e^{wa} = 2 e^{w(a+b)/2} sinh(w(b-a)/2), free of cancellation.
                   const double half_width = 0.5 * (h.b - h.a);
                   return h.height * 2.0 * std::exp(w * (0.5 * (h.a + h.b))) * std::sinh(w * half_width) / w;
                 },
                 [&](const Dirac& d) { return d.weight * std::exp((s - 1.0) * std::log(d.x0)); }},
      p.variant());
}

double moment(const InitialProfile& p, double q) { return mellin_U0(p, Complex(q + 1.0, 0.0)).real(); }

InitialProfile parse_profile(const std::string& text) {
  std::istringstream in(text);
  std::string family;
  if (!(in >> family)) throw DomainError("empty profile specification");

  std::map<std::string, double> kv;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw DomainError("profile: expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty()) throw DomainError("profile: bad number for '" + key + "'");
    if (!kv.emplace(key, d).second) throw DomainError("profile: duplicate key '" + key + "'");
  }

  auto take = [&kv](const char* key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  auto reject_leftovers = [&kv](const std::string& fam) {
    if (!kv.empty()) throw DomainError(fam + ": unknown key '" + kv.begin()->first + "'");
  };

  if (family == "loggaussian") {
    LogGaussian g;
    g.mu = take("mu", g.mu);
    g.sigma = take("sigma", g.sigma);
    g.mass = take("mass", g.mass);
    reject_leftovers(family);
    return g;
  }
  if (family == "logheaviside") {
    LogHeaviside h;
    h.a = take("a", h.a);
    h.b = take("b", h.b);
    h.height = take("height", h.height);
    reject_leftovers(family);
    return h;
  }
  if (family == "dirac") {
    Dirac d;
    d.x0 = take("x0", d.x0);
    d.weight = take("weight", d.weight);
    reject_leftovers(family);
    return d;
  }
  throw DomainError("unknown profile family '" + family + "'");
}

std::string format_profile(const InitialProfile& p) {
  return std::visit(
      Overloaded{[](const LogGaussian& g) {
                   return "loggaussian mu=" + fmt17(g.mu) + " sigma=" + fmt17(g.sigma) + " mass=" + fmt17(g.mass);
                 },
                 [](const LogHeaviside& h) {
                   return "logheaviside a=" + fmt17(h.a) + " b=" + fmt17(h.b) + " height=" + fmt17(h.height);
                 },
                 [](const Dirac& d) { return "dirac x0=" + fmt17(d.x0) + " weight=" + fmt17(d.weight); }},
      p.variant());
}

}  // namespace gfrag
