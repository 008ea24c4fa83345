#include "parisian/levy_measure.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

#include "parisian/numerics/quadrature.hpp"
#include "parisian/numerics/series.hpp"
#include "parisian/numerics/special.hpp"

namespace parisian {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
const numerics::ToleranceSpec kSeriesTol{1e-16, 0.0, 100000};
const numerics::ToleranceSpec kQuadTol{1e-13, 1e-18, 2'000'000};

}  // namespace

LevyMeasure::LevyMeasure(double level, Sign sign, Shape shape, double prefactor, double decay, double atom)
    : level_(level), sign_(sign), shape_(shape), prefactor_(prefactor), decay_(decay), atom_(atom),
      width_(shape == Shape::tempered_stable ? 0.0 : level) {
  if (!(prefactor > 0.0) || !(decay >= 0.0) || !(atom >= 0.0)) {
    throw DomainError("LevyMeasure: prefactor must be > 0, decay and atom >= 0");
  }
  if (shape != Shape::tempered_stable && !(level > 0.0)) {
    throw DomainError("LevyMeasure: series shapes need a level above the boundary at 0");
  }
}

double LevyMeasure::density_images(double t) const {
  if (shape_ == Shape::tempered_stable) return density(t);
  const double a = width_;
  const bool alternating = shape_ == Shape::reflected_below;
  auto term = [&](long n) {
    const double q = 2.0 * a * a * static_cast<double>(n) * static_cast<double>(n) / t;
    const double sign = (alternating && (n % 2 != 0)) ? -1.0 : 1.0;
    return sign * (1.0 - 2.0 * q) * std::exp(-q);
  };
  return prefactor_ * std::exp(-decay_ * t) * numerics::bilateral_sum(term, kSeriesTol) /
         (kSqrt2Pi * t * std::sqrt(t));
}

double LevyMeasure::density_spectral(double t) const {
  if (shape_ == Shape::tempered_stable) return density(t);
  const double a = width_;
  const double offset = shape_ == Shape::reflected_below ? 0.5 : 0.0;
  const long first = shape_ == Shape::reflected_below ? 0L : 1L;
  auto term = [&](long k) {
    const double beta = (static_cast<double>(k) + offset) * std::numbers::pi / a;
    return beta * beta * std::exp(-0.5 * beta * beta * t);
  };
  return prefactor_ * std::exp(-decay_ * t) * numerics::unilateral_sum(term, first, kSeriesTol) / a;
}

double LevyMeasure::density(double t) const {
  if (!(t > 0.0)) throw DomainError("LevyMeasure::density: t must be > 0");
  if (std::isinf(t)) return 0.0;
  if (shape_ == Shape::tempered_stable) {
    return prefactor_ * std::exp(-decay_ * t) / (kSqrt2Pi * t * std::sqrt(t));
  }
  return t <= width_ * width_ ? density_images(t) : density_spectral(t);
}

template <class T>
T LevyMeasure::spectral_exp_tail(T lambda, double r) const {
  const double a = width_;
  const double offset = shape_ == Shape::reflected_below ? 0.5 : 0.0;
  const long first = shape_ == Shape::reflected_below ? 0L : 1L;
  auto term = [&](long k) -> T {
    const double beta = (static_cast<double>(k) + offset) * std::numbers::pi / a;
    const T rate = 0.5 * beta * beta + decay_ + lambda;
    return beta * beta * std::exp(-rate * r) / rate;
  };
  return prefactor_ * numerics::unilateral_sum(term, first, kSeriesTol) / a;
}

template <class T>
T LevyMeasure::finite_exp_tail(T lambda, double r) const {
  if (!(r > 0.0)) throw DomainError("LevyMeasure: tail start r must be > 0");
  if (std::isinf(r)) return T{};
  auto weighted = [this, lambda](double t) -> T { return std::exp(-lambda * t) * density(t); };
  if (shape_ == Shape::tempered_stable) {
    if constexpr (std::is_same_v<T, double>) {
      return prefactor_ / kSqrt2Pi * numerics::tempered_stable_tail(decay_ + lambda, r);
    } else {
      return numerics::integrate_to_infinity(weighted, r, kQuadTol);
    }
  }
  const double split = width_ * width_;
  if (r >= split) return spectral_exp_tail<T>(lambda, r);
  return numerics::integrate_bounded(weighted, r, split, kQuadTol) + spectral_exp_tail<T>(lambda, split);
}

double LevyMeasure::tail(double r) const { return finite_exp_tail<double>(0.0, r) + atom_; }

double LevyMeasure::tail_finite(double r) const { return finite_exp_tail<double>(0.0, r); }

double LevyMeasure::exp_tail(double lambda, double r) const {
  if (!(lambda >= 0.0)) throw DomainError("LevyMeasure::exp_tail: lambda must be >= 0");
  const double finite = finite_exp_tail<double>(lambda, r);
  return lambda == 0.0 ? finite + atom_ : finite;
}

std::complex<double> LevyMeasure::exp_tail(std::complex<double> lambda, double r) const {
  if (!(lambda.real() > 0.0)) throw DomainError("LevyMeasure::exp_tail: Re(lambda) must be > 0");
  return finite_exp_tail<std::complex<double>>(lambda, r);
}

double LevyMeasure::laplace_exponent(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("LevyMeasure::laplace_exponent: lambda must be > 0");
  // Near 0 the density grows like t^{-3/2}; t = w^2 makes the integrand bounded.
  const double split = 1.0;
  auto near = [&](double w) {
    const double t = w * w;
    return -std::expm1(-lambda * t) * density(t) * 2.0 * w;
  };
  auto far = [&](double t) { return -std::expm1(-lambda * t) * density(t); };
  return numerics::integrate_bounded(near, 0.0, std::sqrt(split), kQuadTol) +
         numerics::integrate_to_infinity(far, split, kQuadTol) + atom_;
}

}  // namespace parisian
