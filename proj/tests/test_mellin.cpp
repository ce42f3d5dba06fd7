#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "gfrag/errors.hpp"
#include "gfrag/mellin.hpp"
#include "gfrag/series.hpp"
#include "test_support.hpp"

using namespace gfrag;
using namespace gfrag::mellin;

namespace {

const InitialProfile kGauss = LogGaussian{0.0, 0.1, 1.0};
const InitialProfile kStep = LogHeaviside{-0.2, 0.0, 1.0};
const double kL2 = std::log(2.0);

}  // namespace

TEST(Mellin, KOfSExamples) {
  EXPECT_LT(std::abs(K_of_s(2.0, 2.0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(K_of_s(2.0, 0.0) - 4.0), 1e-14);
  EXPECT_LT(std::abs(K_of_s(2.0, Complex(2.0, 2.0 * M_PI / kL2)) - 1.0), 1e-14);
}

TEST(MellinProperty, KIsPeriodicAlongVerticalLines) {
  test::ProfileGen gen(8);
  for (int i = 0; i < 200; ++i) {
    const double alpha = gen.uniform(1.1, 6.0);
    const Complex s(gen.uniform(-1.0, 4.0), gen.uniform(-30.0, 30.0));
    const Complex shifted = s + Complex(0.0, 2.0 * M_PI / std::log(alpha));
    EXPECT_LT(std::abs(K_of_s(alpha, s) - K_of_s(alpha, shifted)), 1e-12 * std::abs(K_of_s(alpha, s)));
  }
}

TEST(Mellin, SPlusExamples) {
  for (double t : {0.5, 3.0, 40.0}) {
    EXPECT_NEAR(s_plus(2.0, t, std::pow(2.0, -t)), 2.0, 1e-14);
    EXPECT_NEAR(s_plus(2.0, t, std::pow(2.0, -2.0 * t)), 1.0, 1e-14);
  }
  // Constant along rays x = e^{yt}.
  const double y = -0.9;
  EXPECT_NEAR(s_plus(2.0, 3.0, std::exp(3.0 * y)), s_plus(2.0, 11.0, std::exp(11.0 * y)), 1e-13);
  EXPECT_NEAR(s_plus(2.0, 11.0, std::exp(11.0 * y)), s_plus_ray(2.0, y), 1e-13);
  EXPECT_THROW(s_plus(2.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(s_plus(2.0, 0.0, 0.5), DomainError);
  EXPECT_THROW(s_plus_ray(2.0, 0.0), DomainError);
}

TEST(MellinProperty, SPlusConsistencyIdentity) {
  test::ProfileGen gen(1234);
  for (int i = 0; i < 500; ++i) {
    const double alpha = gen.uniform(1.1, 5.0);
    const double t = gen.uniform(0.1, 60.0);
    const double log_x = -gen.uniform(1e-3, 5.0) * t;
    const double sp = s_plus(alpha, t, std::exp(log_x));
    // x = exp(-t log(alpha) alpha^{2 - s+}), compared in log form.
    const double reconstructed = -t * std::log(alpha) * std::pow(alpha, 2.0 - sp);
    EXPECT_LE(std::abs(reconstructed - log_x), 1e-12 * std::abs(log_x));
  }
}

TEST(Mellin, SKExamples) {
  EXPECT_EQ(s_k(1.7, 0, 2.0), Complex(1.7, 0.0));
  const Complex s1 = s_k(2.0, 1, 2.0);
  EXPECT_NEAR(s1.real(), 2.0, 1e-15);
  EXPECT_NEAR(s1.imag(), -2.0 * M_PI / kL2, 1e-13);
  for (int k = -5; k <= 5; ++k) {
    EXPECT_LT(std::abs(K_of_s(2.0, s_k(1.3, k, 2.0)) - K_of_s(2.0, 1.3)), 1e-13);
  }
}

TEST(Mellin, PsiExamples) {
  for (double alpha : {2.0, 3.0, 1.5}) {
    const double L = std::log(alpha);
    const auto at_peak = psi(alpha, -L);
    EXPECT_NEAR(at_peak.value, 0.0, 1e-12);
    EXPECT_NEAR(at_peak.first, 0.0, 1e-12);
    EXPECT_NEAR(at_peak.second, -1.0 / (L * L), 1e-12);
  }
  EXPECT_NEAR(psi(2.0, -2.0 * kL2).value, 1.0 - 2.0 * kL2, 1e-12);
  EXPECT_NEAR(psi(2.0, -0.5 * kL2).value, (kL2 - 1.0) / 2.0, 1e-12);
  EXPECT_THROW(psi(2.0, 0.0), DomainError);
  EXPECT_THROW(psi(2.0, 0.5), DomainError);
}

TEST(MellinProperty, PsiDerivativesMatchFiniteDifferences) {
  test::ProfileGen gen(55);
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const double alpha = gen.uniform(1.2, 4.0);
    const double y = -gen.uniform(0.05, 5.0);
    const auto c = psi(alpha, y);
    const double d1 = (psi(alpha, y + h).value - psi(alpha, y - h).value) / (2.0 * h);
    const double d2 = (psi(alpha, y + h).first - psi(alpha, y - h).first) / (2.0 * h);
    EXPECT_NEAR(c.first, d1, 1e-6 * std::max(1.0, std::abs(d1)));
    EXPECT_NEAR(c.second, d2, 1e-6 * std::max(1.0, std::abs(d2)));
  }
}

TEST(Mellin, PsiIsMaximalAtConcentrationRay) {
  for (double y = -5.0; y < -0.01; y += 0.01) EXPECT_LE(psi(2.0, y).value, 1e-15);
}

TEST(Mellin, InverseAtTimeZero) {
  EXPECT_NEAR(inverse_mellin_v(kGauss, 2.0, 0.0, 1.0), profile_eval_x(kGauss, 1.0), 1e-10);
}

TEST(Mellin, InverseMatchesSeriesOracle) {
  for (double t : {0.5, 1.0, 2.0}) {
    for (double x : {0.25, 0.5, 0.75}) {
      const double ref = series::eval_v(kGauss, 2.0, t, x);
      EXPECT_LT(test::rel_diff(inverse_mellin_v(kGauss, 2.0, t, x), ref), 1e-6) << t << " " << x;
    }
  }
}

TEST(Mellin, ContourIndependence) {
  for (double t : {0.5, 1.0, 2.0}) {
    for (double x : {0.25, 0.5, 0.75}) {
      const double v2 = inverse_mellin_v(kGauss, 2.0, t, x, ContourQuad::automatic(kGauss, 2.0, t, x, 2.0));
      for (double nu : {1.0, 3.0}) {
        const double v = inverse_mellin_v(kGauss, 2.0, t, x, ContourQuad::automatic(kGauss, 2.0, t, x, nu));
        EXPECT_LT(test::rel_diff(v, v2), 1e-8) << nu;
      }
    }
  }
}

TEST(MellinProperty, InverseMatchesSeriesForRandomGaussians) {
  test::ProfileGen gen(2718);
  for (int trial = 0; trial < 8; ++trial) {
    const LogGaussian g{gen.uniform(-0.5, 0.5), gen.uniform(0.08, 0.6), gen.uniform(0.5, 2.0)};
    const double alpha = gen.uniform(1.5, 3.0);
    const double t = gen.uniform(0.1, 2.0);
    const double x = std::exp(gen.uniform(-1.5, 0.3));
    const double ref = series::eval_v(g, alpha, t, x);
    if (ref < 1e-8 * InitialProfile(g).peak_n()) continue;
    EXPECT_LT(test::rel_diff(inverse_mellin_v(g, alpha, t, x), ref), 1e-6) << format_profile(g);
  }
}

TEST(Mellin, InverseRejectsNonGaussian) {
  try {
    inverse_mellin_v(kStep, 2.0, 1.0, 0.5);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("contour integrand decays too slowly"), std::string::npos);
  }
  EXPECT_THROW(inverse_mellin_v(Dirac{1.0, 1.0}, 2.0, 1.0, 0.5), DomainError);
}

TEST(Mellin, InverseGuardsUnderResolvedQuadrature) {
  ContourQuad cq = ContourQuad::automatic(kGauss, 2.0, 2.0, 0.5);
  cq.n_nodes = 8;
  EXPECT_THROW(inverse_mellin_v(kGauss, 2.0, 2.0, 0.5, cq), NumericalGuardError);
  EXPECT_THROW(ContourQuad({2.0, 10.0, 7, 1e-7}).validate(), DomainError);
  EXPECT_THROW(ContourQuad({2.0, -1.0, 8, 1e-7}).validate(), DomainError);
}

TEST(Mellin, ThetaBaselineIsSingleSaddleTerm) {
  const double t = 12.0;
  const double x = std::exp(-0.8 * t);
  const double sp = s_plus(2.0, t, x);
  const double u0 = mellin_U0(kGauss, sp).real();
  const double expected = std::pow(x, -sp) * std::exp((std::pow(2.0, 2.0 - sp) - 1.0) * t) * u0 /
                          (std::sqrt(2.0 * M_PI * t) * kL2 * std::pow(2.0, 1.0 - sp / 2.0));
  EXPECT_LT(test::rel_diff(asymp_v_theta(kGauss, 2.0, t, x, {0, std::nullopt}), expected), 1e-12);
}

TEST(Mellin, ThetaSumImaginaryPartCancels) {
  for (double log_x : {-3.1, -10.0, -27.7}) {
    const Complex sum = theta_sum(kGauss, 2.0, 1.6, log_x, 20);
    EXPECT_LT(std::abs(sum.imag()), 1e-12 * std::abs(sum));
  }
}

TEST(MellinProperty, ThetaAndPoissonFormsAgree) {
  test::ProfileGen gen(616);
  for (int trial = 0; trial < 20; ++trial) {
    const InitialProfile p = gen.gaussian();
    const double alpha = gen.uniform(1.5, 3.0);
    const double t = gen.uniform(2.0, 40.0);
    const double x = std::exp(-gen.uniform(0.3, 2.0) * std::log(alpha) * t);
    const double theta = asymp_v_theta(p, alpha, t, x, {200, std::nullopt});
    const double poisson = asymp_v_poisson(p, alpha, t, x, {std::nullopt, std::pair{-400, 400}});
    EXPECT_LT(test::rel_diff(theta, poisson), 1e-8) << format_profile(p) << " t=" << t;
  }
}

TEST(Mellin, HeavisidePoissonSumHasFewTerms) {
  const auto h = LogHeaviside{-1.0, 0.0, 1.0};
  for (double t : {5.0, 17.0}) {
    const double x = std::pow(2.0, -t);
    const auto [lo, hi] = default_poisson_range(h, 2.0, x);
    int nonzero = 0;
    for (int n = lo - 5; n <= hi + 5; ++n) {
      if (profile_eval_x(h, std::pow(2.0, n) * x) != 0.0) ++nonzero;
    }
    EXPECT_LE(nonzero, static_cast<int>(std::ceil(1.0 / kL2)) + 1);
    EXPECT_LE(hi - lo + 1, static_cast<int>(std::ceil(1.0 / kL2)) + 1);
  }
}

TEST(Mellin, AsymptoticErrorDecreasesOnConcentrationLine) {
  double previous = 1.0;
  for (double t : {10.0, 15.0, 20.0, 25.0, 30.0}) {
    const double x = std::pow(2.0, -t);
    const double err = test::rel_diff(asymp_v_poisson(kGauss, 2.0, t, x), series::eval_v(kGauss, 2.0, t, x));
    EXPECT_LE(err, previous) << t;
    if (t == 25.0) EXPECT_LT(err, 0.1);
    previous = err;
  }
}

TEST(Mellin, AsymptoticsRejectOutsideDomain) {
  EXPECT_THROW(asymp_v_theta(kGauss, 2.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(asymp_v_poisson(kGauss, 2.0, 0.0, 0.5), DomainError);
  EXPECT_THROW(asymp_v_poisson(Dirac{1.0, 1.0}, 2.0, 1.0, 0.5), DomainError);
  EXPECT_THROW(asymp_u(ModelParams(0.0, 2.0, 2.0), kGauss, 1.0, 0.5), DomainError);
  EXPECT_THROW(asymp_u(ModelParams(1.0, 1.0, 2.0), kGauss, 1.0, 3.0), DomainError);
}

TEST(Mellin, AsympUReducesAtZeroGrowth) {
  const ModelParams pure(0.0, 1.0, 2.0);
  for (double t : {5.0, 20.0}) {
    const double x = std::pow(2.0, -t);
    const auto u = asymp_u(pure, kGauss, t, x);
    EXPECT_EQ(u.theta_form, asymp_v_theta(kGauss, 2.0, t, x));
    EXPECT_EQ(u.poisson_form, asymp_v_poisson(kGauss, 2.0, t, x));
  }
}

TEST(Mellin, AsympUChangeOfVariables) {
  const ModelParams params(1.0, 1.0, 2.0);
  const double t = 20.0;
  const double x = std::exp(t) * std::pow(2.0, -t);
  const auto u = asymp_u(params, kGauss, t, x);
  const double expected = std::exp(-t) * asymp_v_theta(kGauss, 2.0, t, std::pow(2.0, -t));
  EXPECT_LT(test::rel_diff(u.theta_form, expected), 1e-10);
  EXPECT_LT(test::rel_diff(u.poisson_form, expected), 1e-10);
}

TEST(MellinProperty, AsympUFormsAgree) {
  test::ProfileGen gen(4);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelParams params(gen.uniform(0.0, 1.0), 1.0, gen.uniform(1.5, 3.0));
    const double t = gen.uniform(3.0, 30.0);
    const double x = std::exp(params.g() * t - gen.uniform(0.4, 1.8) * params.log_alpha() * t);
    const auto u = asymp_u(params, kGauss, t, x);
    EXPECT_LT(test::rel_diff(u.theta_form, u.poisson_form), 1e-10);
  }
}
