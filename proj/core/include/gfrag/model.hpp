#pragma once

#include <cmath>

#include "gfrag/errors.hpp"

namespace gfrag {

/// Coefficients of du/dt + d/dx(g x u) + b u = b alpha^2 u(t, alpha x).
class ModelParams {
 public:
  ModelParams(double g, double b, double alpha) : g_(g), b_(b), alpha_(alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
      throw DomainError("alpha must be finite and > 1");
    }
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("b must be finite and > 0");
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("g must be finite and >= 0");
    log_alpha_ = std::log(alpha);
  }

  /// Pure fragmentation reduction g = 0, b = 1.
  static ModelParams pure_fragmentation(double alpha) { return {0.0, 1.0, alpha}; }

  double g() const noexcept { return g_; }
  double b() const noexcept { return b_; }
  double alpha() const noexcept { return alpha_; }
  double log_alpha() const noexcept { return log_alpha_; }

  bool operator==(const ModelParams&) const = default;

 private:
  double g_;
  double b_;
  double alpha_;
  double log_alpha_;
};

}  // namespace gfrag
