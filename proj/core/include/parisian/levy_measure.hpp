#pragma once

#include <complex>

#include "parisian/model.hpp"

namespace parisian {

/// Excursion-length measure of one side of a level: a density on (0, inf)
/// plus a point mass at +inf. Every supported density has the form
///   prefactor * exp(-decay * t) * g(t)
/// with g one of three shapes:
///   tempered_stable  g(t) = (2 pi t^3)^{-1/2}
///   reflected_below  g(t) = (1/a) sum_{k>=0} b_k^2 exp(-b_k^2 t / 2), b_k = (k + 1/2) pi / a
///   killed_below     g(t) = (1/a) sum_{k>=1} b_k^2 exp(-b_k^2 t / 2), b_k = k pi / a
/// where a is the distance from the level to the boundary at 0. The two
/// series shapes switch to their image (theta-dual) forms for t <= a^2.
class LevyMeasure {
 public:
  enum class Shape { tempered_stable, reflected_below, killed_below };

  LevyMeasure(double level, Sign sign, Shape shape, double prefactor, double decay, double atom);

  double level() const noexcept { return level_; }
  Sign sign() const noexcept { return sign_; }
  Shape shape() const noexcept { return shape_; }
  double atom_at_infinity() const noexcept { return atom_; }

  double density(double t) const;
  /// Series shapes only: the two representations, exposed for cross-checks.
  double density_images(double t) const;
  double density_spectral(double t) const;

  /// nu[r, +inf], atom included.
  double tail(double r) const;
  /// nu[r, +inf), atom excluded.
  double tail_finite(double r) const;
  /// int_r^inf e^{-lambda t} nu(dt): the atom counts only when lambda == 0.
  double exp_tail(double lambda, double r) const;
  /// Complex rate, Re(lambda) > 0; the atom never contributes.
  std::complex<double> exp_tail(std::complex<double> lambda, double r) const;

  /// int_{(0, inf]} (1 - e^{-lambda t}) nu(dt) by direct quadrature of the
  /// density, atom included. Independent of the closed-form tails.
  double laplace_exponent(double lambda) const;

 private:
  template <class T>
  T spectral_exp_tail(T lambda, double r) const;
  template <class T>
  T finite_exp_tail(T lambda, double r) const;
  double series_g(double t) const;

  double level_;
  Sign sign_;
  Shape shape_;
  double prefactor_;
  double decay_;
  double atom_;
  double width_;  // distance a to the boundary, series shapes only
};

}  // namespace parisian
