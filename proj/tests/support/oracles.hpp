#pragma once

// Independent reference computations. Nothing here calls the library: the
// integrator is composite Simpson rather than Gauss-Kronrod, and the closed
// forms are textbook Brownian results.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n = 20000) {
  if (n % 2 != 0) ++n;
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3.0;
}

/// Simpson on [lo, inf): directly on [lo, lo + 1], then through t = c / w^2
/// with c = lo + 1, which keeps t^{-3/2} tails and exponential tails bounded.
inline double simpson_to_infinity(const std::function<double(double)>& f, double lo, int n = 200000) {
  const double c = lo + 1.0;
  auto mapped = [&](double w) {
    w = std::max(w, 1e-8);  // finite limit at w = 0 for the tails of interest
    const double g = f(c / (w * w)) * 2.0 * c / (w * w * w);
    return std::isfinite(g) ? g : 0.0;
  };
  return simpson(f, lo, c, n) + simpson(mapped, 0.0, 1.0, n);
}

namespace detail {

inline double d1_stencil(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double d2_stencil(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace detail

/// Fourth-order central differences at h and h/2 combined by Richardson
/// extrapolation: truncation O(h^6) with a step large enough that rounding
/// stays near eps / h^2.
inline double derivative(const std::function<double(double)>& f, double x, double h = 5e-3) {
  return (16 * detail::d1_stencil(f, x, h / 2) - detail::d1_stencil(f, x, h)) / 15;
}

inline double second_derivative(const std::function<double(double)>& f, double x, double h = 5e-3) {
  return (16 * detail::d2_stencil(f, x, h / 2) - detail::d2_stencil(f, x, h)) / 15;
}

inline double gaussian(double x, double var) {
  return std::exp(-x * x / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
}

/// Density of the first passage time of standard Brownian motion over a
/// level at distance d > 0.
inline double first_passage_density(double t, double d) {
  return d / std::sqrt(2 * std::numbers::pi * t * t * t) * std::exp(-d * d / (2 * t));
}

/// P(T_d <= t) for standard Brownian motion.
inline double first_passage_cdf(double t, double d) { return std::erfc(d / std::sqrt(2 * t)); }

/// P_x(kappa_v^{(b,+)} <= kappa_u^{(a,-)}) for standard Brownian motion.
inline double bm_order_probability(double a, double b, double x, double u, double v) {
  const double c = std::sqrt(2 / std::numbers::pi);
  return (std::sqrt(u) + (x - a) * c) / (std::sqrt(v) + std::sqrt(u) + (b - a) * c);
}

/// Endpoint density (Lebesgue) of the Brownian meander of length u started at
/// 0 and staying negative: Rayleigh law.
inline double rayleigh(double z, double u) { return std::abs(z) / u * std::exp(-z * z / (2 * u)); }

}  // namespace oracle
