#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "parisian/parisian.hpp"

using namespace parisian;

namespace {

const DiffusionModel kBm({Family::brownian_drift, 0.0});
const DiffusionModel kReflected({Family::reflected_bm, 0.0});
const DiffusionModel kBessel({Family::bessel3_drift, 1.0});

// int_r^inf e^{-k t} (2 pi t^3)^{-1/2} dt in closed form.
double stable_exp_tail(double k, double r) {
  const double c = 1 / std::sqrt(2 * std::numbers::pi);
  if (k == 0.0) return 2 * c / std::sqrt(r);
  return c * (2 * std::exp(-k * r) / std::sqrt(r) - 2 * std::sqrt(std::numbers::pi * k) * std::erfc(std::sqrt(k * r)));
}

}  // namespace

TEST(BuildingBlocks, WFunction) {
  EXPECT_NEAR(w_func(kBm, 0.5, 0.0, 1.0), -2 * std::sinh(1.0), 1e-14);
  for (const DiffusionModel* m : {&kBm, &kReflected, &kBessel}) {
    for (double lambda : {0.2, 3.0}) {
      EXPECT_EQ(w_func(*m, lambda, 1.1, 1.1), 0.0);
      EXPECT_GT(w_func(*m, lambda, 1.1, 0.6), 0.0);
      EXPECT_LT(w_func(*m, lambda, 1.1, 1.7), 0.0);
    }
  }
  EXPECT_THROW(w_func(kBm, 0.0, 0.0, 1.0), DomainError);
}

TEST(BuildingBlocks, Green) {
  EXPECT_NEAR(green(kBm, 0.5, 0.0, 0.0), 0.5, 1e-15);
  for (const DiffusionModel* m : {&kBm, &kReflected, &kBessel}) {
    EXPECT_NEAR(green(*m, 0.7, 0.4, 1.9), green(*m, 0.7, 1.9, 0.4), 1e-14);
    EXPECT_GT(green(*m, 0.7, 0.4, 1.9), 0.0);
  }
}

TEST(BuildingBlocks, HittingTransforms) {
  EXPECT_DOUBLE_EQ(hitting_laplace(kBessel, 0.3, 1.2, 1.2), 1.0);
  EXPECT_NEAR(hitting_laplace(kBm, 0.5, 1.0, 0.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(hitting_laplace_before(kBm, 0.5, 0.5, 1.0, 0.0), std::sinh(0.5) / std::sinh(1.0), 1e-15);
  EXPECT_THROW(hitting_laplace_before(kBm, 0.5, 1.5, 1.0, 0.0), DomainError);
  // Brownian first passage: E[e^{-lambda T_d}] = e^{-d sqrt(2 lambda)} against Simpson.
  const double d = 0.8, lambda = 0.3;
  const double q = oracle::simpson_to_infinity([&](double t) {
    return t > 0 ? std::exp(-lambda * t) * oracle::first_passage_density(t, d) : 0.0;
  }, 0.0);
  EXPECT_NEAR(hitting_laplace(kBm, lambda, 0.0, d), q, 1e-9);
}

TEST(BuildingBlocks, PsiExamples) {
  for (Sign s : {Sign::plus, Sign::minus}) EXPECT_DOUBLE_EQ(psi(kBessel, 0.4, 1.3, 1.3, s, 0.7), 1.0);

  const double expected = std::exp(1.0) + std::sinh(1.0) * stable_exp_tail(0.5, 1.0);
  EXPECT_NEAR(psi(kBm, 0.5, 1.0, 0.0, Sign::minus, 1.0), expected, 1e-12);

  // Assembled from independent pieces of the public API.
  const double lambda = 0.9, x = 0.3, level = 1.4, r = 0.6;
  const auto ex = kBessel.eigen(lambda, x), el = kBessel.eigen(lambda, level);
  const double assembled = ex.phi_plus / el.phi_plus + w_func(kBessel, lambda, level, x) / kBessel.wronskian(lambda) *
                                                           kBessel.levy(level, Sign::plus).exp_tail(lambda, r);
  EXPECT_NEAR(psi(kBessel, lambda, x, level, Sign::plus, r), assembled, 1e-12 * std::abs(assembled));

  const double phi_ratio = kBm.eigen(0.5, 1.0).phi_minus / kBm.eigen(0.5, 0.0).phi_minus;
  EXPECT_NEAR(psi(kBm, 0.5, 1.0, 0.0, Sign::minus, 200.0), phi_ratio, 1e-10);

  EXPECT_DOUBLE_EQ(psi_detailed(kBm, 0.5, 1.0, 0.0, Sign::minus, 1.0).value, psi(kBm, 0.5, 1.0, 0.0, Sign::minus, 1.0));
}

TEST(KappaLaplace, BrownianClosedForm) {
  const double tail = std::sqrt(2 / std::numbers::pi);
  const double expected = std::exp(-1.0) * tail / (2 * std::sqrt(2.0) + stable_exp_tail(1.0, 1.0));
  EXPECT_NEAR(kappa_laplace(kBm, 1.0, 0.0, 1.0, 0.0), expected, 1e-13);
  EXPECT_NEAR(expected, 0.10123, 1e-5);
}

TEST(KappaLaplace, ShortDurationTendsToHitting) {
  for (const DiffusionModel* m : {&kBm, &kReflected, &kBessel}) {
    EXPECT_NEAR(kappa_laplace(*m, 0.7, 1.0, 1e-8, 1.6), hitting_laplace(*m, 0.7, 1.6, 1.0), 1e-4);
  }
}

TEST(KappaLaplace, MonotoneInRateAndDuration) {
  for (const DiffusionModel* m : {&kBm, &kReflected, &kBessel}) {
    double prev_gamma = 1.0;
    for (double gamma : {0.05, 0.3, 1.0, 4.0}) {
      double prev_u = 1.0;
      for (double u : {0.1, 0.5, 2.0, 6.0}) {
        const double v = kappa_laplace(*m, gamma, 1.0, u, 1.2);
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, prev_u);
        prev_u = v;
      }
      const double v = kappa_laplace(*m, gamma, 1.0, 1.0, 1.2);
      EXPECT_LT(v, prev_gamma);
      prev_gamma = v;
    }
  }
}

TEST(KappaLaplace, ShiftedTransformAgreesOnRealAxis) {
  const double g = 0.8, u = 1.5;
  const auto shifted = kappa_laplace_shifted(kBessel, std::complex<double>(g, 0.0), 1.0, u, 1.3);
  EXPECT_NEAR(shifted.real(), std::exp(g * u) * kappa_laplace(kBessel, g, 1.0, u, 1.3), 1e-12);
  EXPECT_THROW(kappa_laplace(kBm, 1.0, 0.0, 1.0, -0.5), DomainError);
}

TEST(Ruin, RecurrentAndTransientToInf) {
  EXPECT_EQ(ruin_probability(kReflected, 1.0, 2.0), 1.0);
  EXPECT_EQ(ruin_probability(kReflected, 0.2, 50.0), 1.0);
  EXPECT_EQ(ruin_probability(kBm, 0.0, 3.0), 1.0);
  EXPECT_EQ(ruin_probability(DiffusionModel({Family::brownian_drift, -0.5}), 0.0, 3.0), 1.0);
}

TEST(Ruin, BrownianUpwardDriftClosedForm) {
  const double mu = 0.6, a = 0.4, u = 1.3;
  const DiffusionModel m({Family::brownian_drift, mu});
  // nu_-^{(a)}[u, inf) = e^{2 mu a} int_u^inf e^{-mu^2 t/2} (2 pi t^3)^{-1/2} dt, atom 0.
  const double tail = std::exp(2 * mu * a) * stable_exp_tail(mu * mu / 2, u);
  const double inv_g0 = 2 * mu * std::exp(2 * mu * a);
  EXPECT_NEAR(ruin_probability(m, a, u), tail / (inv_g0 + tail), 1e-12);
}

TEST(Ruin, BesselValue) {
  const auto nu = kBessel.levy(1.0, Sign::minus);
  const double atom = (std::exp(2.0) - 1) / 2;
  const double tail = oracle::simpson_to_infinity([&](double t) { return nu.density(t); }, 1.0, 100000);
  const double expected = tail / (atom + tail);
  EXPECT_NEAR(ruin_probability(kBessel, 1.0, 1.0), expected, 1e-9);
  EXPECT_NEAR(ruin_probability(kBessel, 1.0, 1.0), 0.0034130645, 1e-10);
}

TEST(OrderProbability, SymmetryAndStandardScenario) {
  EXPECT_NEAR(order_probability(kBm, 0.0, 1.0, 0.5, 1.0, 1.0), 0.5, 1e-12);
  const double expected = 1 / (2 + std::sqrt(2 / std::numbers::pi));
  EXPECT_NEAR(order_probability(kBm, 0.0, 1.0, 0.0, 1.0, 1.0), expected, 1e-12);
  EXPECT_NEAR(expected, 0.35741, 5e-6);
}

TEST(OrderProbability, BrownianClosedFormGrid) {
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double u : {0.5, 1.0, 3.0}) {
      for (double v : {0.25, 1.0, 2.0}) {
        EXPECT_NEAR(order_probability(kBm, 0.0, 1.0, x, u, v), oracle::bm_order_probability(0.0, 1.0, x, u, v), 1e-10);
      }
    }
  }
}

TEST(OrderProbability, TransientModelsStayInUnitInterval) {
  const DiffusionModel up({Family::brownian_drift, 0.5});
  for (double x : {0.0, 0.4, 0.8}) {
    const double p = order_probability(up, 0.0, 1.0, x, 1.0, 1.0);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
  // Downward drift at the midpoint favours the excursion below a.
  const DiffusionModel down({Family::brownian_drift, -0.5});
  const double p = order_probability(down, 0.0, 1.0, 0.5, 1.0, 1.0);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 0.5);
}

TEST(TwoBarrier, QuadrupleEqualsPairOnGrid) {
  for (double gamma : {0.1, 0.5, 2.0}) {
    for (double lambda : {0.1, 0.5, 2.0}) {
      for (double uv : {0.5, 1.0, 2.0}) {
        const TwoBarrierQuery q{0.0, 1.0, 1.0, uv, uv, gamma, lambda};
        const double quad = quadruple_transform(kBm, q, BoundedWeight::one(), BoundedWeight::one()).value;
        EXPECT_NEAR(quad, pair_laplace(kBm, q), 1e-10) << gamma << " " << lambda << " " << uv;
      }
    }
  }
}

TEST(TwoBarrier, ZeroRateLimitIsOrderProbability) {
  EXPECT_NEAR(pair_laplace_at_zero_rates(kBm, 0.0, 1.0, 0.0, 1.0, 1.0), order_probability(kBm, 0.0, 1.0, 0.0, 1.0, 1.0),
              1e-8);
  EXPECT_NEAR(pair_laplace_at_zero_rates(kReflected, 0.5, 1.5, 1.0, 0.7, 1.2),
              order_probability(kReflected, 0.5, 1.5, 1.0, 0.7, 1.2), 1e-8);
}

TEST(TwoBarrier, SmallRatesApproachZeroRateLimit) {
  // Recurrent models converge like sqrt(rate).
  const double limit = pair_laplace_at_zero_rates(kBm, 0.0, 1.0, 0.3, 1.0, 1.0);
  const double near = pair_laplace(kBm, {0.0, 1.0, 0.3, 1.0, 1.0, 1e-10, 1e-10});
  EXPECT_NEAR(near, limit, 1e-4);
}

TEST(TwoBarrier, StartingLevelIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const DiffusionModel* m : {&kBm, &kReflected, &kBessel}) {
    for (int i = 0; i < 10; ++i) {
      const double a = 0.3 + unit(rng), b = a + 0.2 + unit(rng);
      TwoBarrierQuery q{a, b, a, 0.2 + 2 * unit(rng), 0.2 + 2 * unit(rng), 0.05 + unit(rng), 0.05 + unit(rng)};
      const double f_a = pair_laplace(*m, q);
      q.x = b;
      const double f_b = pair_laplace(*m, q);
      const double psi_minus = psi(*m, q.gamma + q.lambda, b, a, Sign::minus, q.u);
      EXPECT_NEAR(f_a * psi_minus / f_b, 1.0, 1e-12);
    }
  }
}

TEST(TwoBarrier, ContinuousInStartingPoint) {
  TwoBarrierQuery q{0.0, 1.0, 0.0, 1.0, 1.0, 0.5, 0.5};
  const double at_a = pair_laplace(kBm, q);
  q.x = 1e-7;
  EXPECT_NEAR(pair_laplace(kBm, q), at_a, 1e-6);
}

TEST(TwoBarrier, OneBarrierLimit) {
  const double one = one_barrier_pair_laplace(kBm, 0.0, 1.0, 1.0, 0.5, 0.5);
  const double two = pair_laplace(kBm, {-1e-5, 0.0, 0.0, 1.0, 1.0, 0.5, 0.5});
  EXPECT_NEAR(one, two, 1e-5);
}

TEST(TwoBarrier, ValidationRejectsBadQueries) {
  EXPECT_THROW(pair_laplace(kBm, {1.0, 0.0, 0.5, 1.0, 1.0, 0.5, 0.5}), DomainError);
  EXPECT_THROW(pair_laplace(kBm, {0.0, 1.0, 1.5, 1.0, 1.0, 0.5, 0.5}), DomainError);
  EXPECT_THROW(pair_laplace(kBm, {0.0, 1.0, 0.5, 0.0, 1.0, 0.5, 0.5}), DomainError);
  EXPECT_THROW(pair_laplace(kBm, {0.0, 1.0, 0.5, 1.0, 1.0, 0.0, 0.5}), DomainError);
  EXPECT_THROW(pair_laplace(kBessel, {-1.0, 1.0, 0.5, 1.0, 1.0, 0.5, 0.5}), DomainError);
}

TEST(HittingBeforeParisian, LimitsAndMonotonicity) {
  const double far = hitting_before_parisian_laplace(kBm, 0.4, 0.0, 1.0, 200.0);
  EXPECT_NEAR(far, hitting_laplace(kBm, 0.4, 0.0, 1.0), 1e-8);
  double prev = 0.0;
  for (double u : {0.01, 0.1, 1.0, 10.0}) {
    const double v = hitting_before_parisian_laplace(kBm, 0.4, 0.0, 1.0, u);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_NEAR(hitting_before_parisian_laplace(kBessel, 0.4, 0.5, 1.5, 0.8),
              1 / psi(kBessel, 0.4, 1.5, 0.5, Sign::minus, 0.8), 1e-14);
}
