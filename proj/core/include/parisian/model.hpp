#pragma once

#include <complex>
#include <string>

#include "parisian/errors.hpp"

namespace parisian {

enum class Family { brownian_drift, bessel3_drift, reflected_bm };
enum class Recurrence { recurrent, transient_to_sup, transient_to_inf };
enum class Sign { plus, minus };
enum class BoundaryKind { natural, entrance, reflecting };

std::string to_string(Family f);
std::string to_string(Recurrence r);
Family family_from_string(const std::string& name);

struct ModelParams {
  Family family = Family::brownian_drift;
  double mu = 0.0;
};

/// Eigenfunction values and x-derivatives at one point.
/// phi_plus is decreasing in x, phi_minus increasing.
template <class T>
struct EigenValues {
  T phi_plus{};
  T phi_minus{};
  T dphi_plus{};
  T dphi_minus{};
};

class LevyMeasure;

/// Immutable closed-form description of one of the supported diffusions.
/// Transition densities are taken with respect to the speed measure m, so
/// p(t; x, z) = p(t; z, x).
class DiffusionModel {
 public:
  explicit DiffusionModel(const ModelParams& params);

  const ModelParams& params() const noexcept { return params_; }
  Family family() const noexcept { return params_.family; }
  double mu() const noexcept { return params_.mu; }
  Recurrence recurrence() const noexcept;

  /// Endpoints of I; -inf/+inf where unbounded.
  double inf() const noexcept;
  double sup() const noexcept;
  BoundaryKind lower_boundary() const noexcept;
  BoundaryKind upper_boundary() const noexcept;
  bool in_interior(double x) const noexcept;
  /// The reflecting endpoint of reflected_bm is admitted for evaluation.
  bool in_domain(double x) const noexcept;

  double drift(double x) const;
  double diffusion(double x) const;

  double scale(double x) const;
  double scale_derivative(double x) const;
  double speed_density(double x) const;
  /// Limits of s at the endpoints of I; infinite for natural/entrance ends.
  double scale_at_inf() const noexcept;
  double scale_at_sup() const noexcept;

  EigenValues<double> eigen(double lambda, double x) const;
  EigenValues<std::complex<double>> eigen(std::complex<double> lambda, double x) const;

  /// omega = (Phi_-' Phi_+ - Phi_+' Phi_-) / s', independent of x.
  double wronskian(double lambda) const;
  std::complex<double> wronskian(std::complex<double> lambda) const;

  /// lim_{lambda -> 0} Phi'_{lambda,sign}(x) / Phi_{lambda,sign}(x).
  double log_derivative_at_zero(Sign sign, double x) const;
  /// 1/G_0(a,a) = lim_{lambda -> 0} omega / (Phi_-(a) Phi_+(a)).
  double inverse_green_at_zero(double a) const;

  double transition_density(double t, double x, double z) const;
  double transition_density_dx(double t, double x, double z) const;

  /// Density of T_a under P_x at time t, w.r.t. Lebesgue measure.
  double hitting_density(double x, double a, double t) const;
  /// P_x(T_a < infinity) from the scale function.
  double hitting_probability(double x, double a) const;

  LevyMeasure levy(double level, Sign sign) const;

 private:
  void require_domain(double x, const char* what) const;
  template <class T>
  EigenValues<T> eigen_impl(T lambda, double x) const;

  ModelParams params_;
};

DiffusionModel build_model(const ModelParams& params);

}  // namespace parisian
