#pragma once

#include <cmath>
#include <random>

#include "gfrag/profile.hpp"

namespace gfrag::test {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double gaussian_pdf(double y, double mu, double sigma) {
  const double z = (y - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

/// Fixed-seed generator of random valid profiles for property tests.
class ProfileGen {
 public:
  explicit ProfileGen(unsigned seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  LogGaussian gaussian() { return {uniform(-1.0, 1.0), uniform(0.05, 0.6), uniform(0.2, 3.0)}; }

  LogHeaviside heaviside() {
    const double a = uniform(-2.0, 0.5);
    return {a, a + uniform(0.05, 1.5), uniform(0.2, 3.0)};
  }

  InitialProfile any_density() {
    if (std::bernoulli_distribution(0.5)(rng_)) return gaussian();
    return heaviside();
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gfrag::test
