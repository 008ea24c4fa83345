#pragma once

namespace parisian::numerics {

/// Complementary error function.
double erfc(double x);

/// exp(x^2) * erfc(x), finite for all x where the product is representable.
double erfc_scaled(double x);

/// Integral of t^{-3/2} exp(-k t) over [r, +inf) for k >= 0, r > 0.
/// Equals 2 exp(-k r) / sqrt(r) * (1 - sqrt(pi k r) * erfc_scaled(sqrt(k r))).
double tempered_stable_tail(double k, double r);

}  // namespace parisian::numerics
