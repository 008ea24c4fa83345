#include "parisian/numerics/special.hpp"

#include <cmath>
#include <numbers>

#include "parisian/errors.hpp"

namespace parisian::numerics {

double erfc(double x) { return std::erfc(x); }

double erfc_scaled(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) {
    // e^{x^2} erfc(x) = 2 e^{x^2} - e^{x^2} erfc(-x)
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return 2.0 * std::exp(hi) * (1.0 + lo) - erfc_scaled(-x);
  }
  if (x < 26.0) {
    // Split x^2 exactly so exp() does not amplify its rounding error.
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return std::exp(hi) * (1.0 + lo) * std::erfc(x);
  }
  // Asymptotic series; terms shrink by (2k-1)/(2x^2) and stop below 1e-17.
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return sum / (x * std::sqrt(std::numbers::pi));
}

double tempered_stable_tail(double k, double r) {
  if (!(r > 0.0)) throw DomainError("tempered_stable_tail: r must be > 0");
  if (!(k >= 0.0)) throw DomainError("tempered_stable_tail: k must be >= 0");
  if (k == 0.0) return 2.0 / std::sqrt(r);
  const double y = std::sqrt(k * r);
  return 2.0 * std::exp(-k * r) / std::sqrt(r) *
         (1.0 - std::sqrt(std::numbers::pi) * y * erfc_scaled(y));
}

}  // namespace parisian::numerics
