#pragma once

#include <complex>
#include <string>
#include <variant>

namespace gfrag {

using Complex = std::complex<double>;

/// Gaussian in y = log x: n(0,y) = mass * N(y; mu, sigma^2).
struct LogGaussian {
  double mu = 0.0;
  double sigma = 0.1;
  double mass = 1.0;
  bool operator==(const LogGaussian&) const = default;
};

/// Flat level in y on [a, b]: n(0,y) = height on [a, b], u0(x) = height x^-2.
struct LogHeaviside {
  double a = -0.2;
  double b = 0.0;
  double height = 1.0;
  bool operator==(const LogHeaviside&) const = default;
};

/// Point mass weight * delta_{x0}. Has no pointwise density.
struct Dirac {
  double x0 = 1.0;
  double weight = 1.0;
  bool operator==(const Dirac&) const = default;
};

/// Initial size distribution u0, one of three closed-form families.
class InitialProfile {
 public:
  using Variant = std::variant<LogGaussian, LogHeaviside, Dirac>;

  InitialProfile(LogGaussian p);   // NOLINT(google-explicit-constructor)
  InitialProfile(LogHeaviside p);  // NOLINT(google-explicit-constructor)
  InitialProfile(Dirac p);         // NOLINT(google-explicit-constructor)

  const Variant& variant() const noexcept { return v_; }
  bool is_dirac() const noexcept { return std::holds_alternative<Dirac>(v_); }
  bool is_gaussian() const noexcept { return std::holds_alternative<LogGaussian>(v_); }
  bool is_heaviside() const noexcept { return std::holds_alternative<LogHeaviside>(v_); }

  /// Interval in y outside of which n(0,.) is zero (Heaviside) or below
  /// exp(-72) of its peak (Gaussian, mu +- 12 sigma). Dirac: the atom itself.
  double support_left() const;
  double support_right() const;

  /// Largest value of n(0,.) over y. Throws for Dirac.
  double peak_n() const;

  bool operator==(const InitialProfile&) const = default;

 private:
  Variant v_;
};

/// u0(x). Throws DomainError for Dirac or x <= 0.
double profile_eval_x(const InitialProfile& p, double x);

/// log u0(x), -infinity outside the support.
double log_profile_eval_x(const InitialProfile& p, double x);

/// n(0,y) = e^{2y} u0(e^y).
double profile_eval_y(const InitialProfile& p, double y);

/// Mellin transform U0(s) = int_0^inf u0(x) x^{s-1} dx, closed form.
Complex mellin_U0(const InitialProfile& p, Complex s);

/// int_0^inf x^q u0(x) dx = U0(q + 1).
double moment(const InitialProfile& p, double q);

/// Parses "loggaussian mu=0 sigma=0.1 mass=1", "logheaviside a=-0.2 b=0 height=1"
/// or "dirac x0=1 weight=1". Missing keys take the defaults above.
InitialProfile parse_profile(const std::string& text);

/// Inverse of parse_profile, with 17 significant digits.
std::string format_profile(const InitialProfile& p);

}  // namespace gfrag
