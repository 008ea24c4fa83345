#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "parisian/numerics/quadrature.hpp"
#include "parisian/numerics/series.hpp"
#include "parisian/numerics/special.hpp"

namespace pn = parisian::numerics;

TEST(Quadrature, ExponentialOnHalfLine) {
  EXPECT_NEAR(pn::integrate_to_infinity([](double t) { return std::exp(-t); }, 0.0), 1.0, 1e-12);
}

TEST(Quadrature, PowerTailOnHalfLine) {
  EXPECT_NEAR(pn::integrate_to_infinity([](double t) { return std::pow(t, -1.5); }, 1.0, {1e-13, 0.0, 1'000'000}), 2.0,
              1e-12);
}

TEST(Quadrature, TemperedStableTailAgainstSimpson) {
  auto f = [](double t) { return std::exp(-t) * std::pow(t, -1.5); };
  const double closed = 2 * std::exp(-1.0) - 2 * std::sqrt(std::numbers::pi) * std::erfc(1.0);
  const double value = pn::integrate_to_infinity(f, 1.0);
  EXPECT_NEAR(value, closed, 1e-12);
  EXPECT_NEAR(value, 0.178148, 5e-7);
  EXPECT_NEAR(oracle::simpson_to_infinity(f, 1.0), closed, 1e-9);
  EXPECT_NEAR(pn::integrate_to_infinity(f, 1.0, {5e-11, 1e-14, 1'000'000}), value, 1e-12);
}

TEST(Quadrature, BoundedExamples) {
  EXPECT_DOUBLE_EQ(pn::integrate_bounded([](double) { return 1.0; }, 0.0, 2.0), 2.0);
  EXPECT_NEAR(pn::integrate_bounded([](double t) { return 1 / std::sqrt(t); }, 0.0, 1.0), 2.0, 1e-10);
  EXPECT_NEAR(pn::integrate_bounded([](double t) { return t * std::pow(t, -1.5); }, 0.0, 1.0), 2.0, 1e-10);
}

TEST(Quadrature, ReversedIntervalIsDomainError) {
  EXPECT_THROW(pn::integrate_bounded([](double) { return 1.0; }, 1.0, 0.0), parisian::DomainError);
}

TEST(Quadrature, BudgetExhaustionCarriesEstimate) {
  auto f = [](double t) { return std::sin(1.0 / t) / t; };
  try {
    pn::integrate_bounded(f, 1e-6, 1.0, {1e-14, 0.0, 200});
    FAIL() << "expected AccuracyError";
  } catch (const parisian::AccuracyError& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate()));
    EXPECT_GT(e.error_bound(), 0.0);
  }
}

TEST(Quadrature, ComplexIntegrand) {
  const std::complex<double> k(1.0, 2.0);
  auto f = [k](double t) { return std::exp(-k * t); };
  const auto value = pn::integrate_to_infinity(f, 0.0);
  EXPECT_NEAR(std::abs(value - 1.0 / k), 0.0, 1e-12);
}

TEST(Series, Delta) {
  EXPECT_DOUBLE_EQ(pn::bilateral_sum([](long n) { return n == 0 ? 1.0 : 0.0; }), 1.0);
}

TEST(Series, JacobiTheta) {
  auto term = [](long n) { return std::exp(-static_cast<double>(n * n)); };
  double brute = 0;
  for (long n = -50; n <= 50; ++n) brute += term(n);
  EXPECT_NEAR(pn::bilateral_sum(term), brute, 1e-14);
  EXPECT_NEAR(brute, 1.7726372, 1e-7);
}

TEST(Series, AlternatingImageShell) {
  const double t = 1.0;
  auto term = [t](long n) {
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    return (4 * nn / t - 1) * (n % 2 == 0 ? -1.0 : 1.0) * std::exp(-2 * nn / t);
  };
  double brute = 0;
  for (long n = -50; n <= 50; ++n) brute += term(n);
  EXPECT_NEAR(pn::bilateral_sum(term), brute, 1e-13);
}

TEST(Series, MaxEvalsIsAccuracyError) {
  EXPECT_THROW(pn::bilateral_sum([](long) { return 1.0; }, {1e-10, 0.0, 20}), parisian::AccuracyError);
}

TEST(Special, Erfc) {
  EXPECT_DOUBLE_EQ(pn::erfc(0.0), 1.0);
  EXPECT_NEAR(pn::erfc(1.0), 0.15729920705028513, 1e-16);
  for (double x : {0.5, 2.0, 10.0}) EXPECT_NEAR(pn::erfc(-x) + pn::erfc(x), 2.0, 1e-15);
}

TEST(Special, ScaledErfcMatchesProductWhereRepresentable) {
  for (double x : {-3.0, -0.5, 0.0, 0.7, 3.0, 10.0, 25.0}) {
    const double direct = std::exp(x * x) * std::erfc(x);
    EXPECT_NEAR(pn::erfc_scaled(x) / direct, 1.0, 1e-13) << x;
  }
  // Asymptotic 1/(x sqrt(pi)) far beyond the underflow of erfc.
  const double x = 1e4;
  EXPECT_NEAR(pn::erfc_scaled(x) * x * std::sqrt(std::numbers::pi), 1.0, 1e-8);
}

TEST(Special, TemperedStableTailAgainstQuadrature) {
  for (double k : {0.0, 0.3, 2.0, 50.0}) {
    for (double r : {0.01, 1.0, 7.0}) {
      const double q = oracle::simpson_to_infinity([k](double t) { return std::pow(t, -1.5) * std::exp(-k * t); }, r,
                                                   400000);
      EXPECT_NEAR(pn::tempered_stable_tail(k, r) / q, 1.0, 1e-8) << k << " " << r;
    }
  }
}
