#pragma once

// Numerical inverse Laplace transform by Euler summation (binomial averaging
// of the Bromwich trapezoid sum). All nodes lie on Re(s) > 0, where the
// engine's tail integrals converge.

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace parisian {

using ComplexTransform = std::function<std::complex<double>(std::complex<double>)>;

struct InversionSpec {
  int node_count = 32;  // even; 2M terms of the Euler sum (plus one)
  std::vector<double> t_grid;

  /// node_count >= 8 and even, t_grid nonempty, strictly increasing, all > 0.
  void validate() const;
};

/// f(t) from its transform F(s) = int_0^inf e^{-st} f(t) dt, t > 0.
/// A failure at any node is rethrown with the node location attached.
double invert(const ComplexTransform& transform, double t, int node_count = 32);

struct CdfPoint {
  double t = 0.0;
  double value = 0.0;  // clamped to [0, 1]
  double raw = 0.0;    // before clamping
};

struct CdfResult {
  std::vector<CdfPoint> points;
  std::vector<std::string> warnings;  // pre-clamp excursions beyond 1e-6
};

/// CDF of X = delay + Y on spec.t_grid, where law_transform is E[e^{-s Y}].
/// Y >= 0, so the CDF is 0 for t <= delay; elsewhere law_transform(s)/s is
/// inverted at t - delay. Shifting out a known delay keeps the jump of the
/// inverted function at the origin.
CdfResult cdf_on_grid(const ComplexTransform& law_transform, const InversionSpec& spec, double delay = 0.0);

}  // namespace parisian
