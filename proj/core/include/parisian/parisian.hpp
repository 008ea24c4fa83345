#pragma once

// Closed-form distribution theory of Parisian stopping times
//   kappa_u^{(a,-)}: first time an excursion below a has lasted u,
//   kappa_v^{(b,+)}: first time an excursion above b has lasted v.

#include <complex>
#include <functional>
#include <map>
#include <string>

#include "parisian/levy_measure.hpp"
#include "parisian/model.hpp"

namespace parisian {

/// Parameters (a, b, x, u, v, gamma, lambda) of the two-barrier problem.
/// gamma weights kappa_u^{(a,-)}, lambda weights kappa_v^{(b,+)}.
struct TwoBarrierQuery {
  double a = 0.0;
  double b = 1.0;
  double x = 0.0;
  double u = 1.0;
  double v = 1.0;
  double gamma = 0.0;
  double lambda = 0.0;

  /// Checks a < b, a <= x <= b, u, v > 0, rates >= 0 and, when
  /// require_rates, gamma > 0 and lambda > 0.
  void validate(const DiffusionModel& model, bool require_rates) const;
};

/// Continuous bounded nonnegative weight applied to a meander endpoint.
struct BoundedWeight {
  std::function<double(double)> fn;
  double sup_bound = 1.0;
  std::string name = "custom";

  static BoundedWeight one();
  double operator()(double z) const { return fn(z); }
};

struct TransformValue {
  double value = 0.0;
  std::map<std::string, double> breakdown;
};

enum class MeanderDirection { down, up };

// Building blocks.

/// W_lambda^{(c)}(x) = Phi_+(x) Phi_-(c) - Phi_-(x) Phi_+(c).
double w_func(const DiffusionModel& model, double lambda, double c, double x);
std::complex<double> w_func(const DiffusionModel& model, std::complex<double> lambda, double c, double x);

/// G_lambda(x, y) = Phi_-(min) Phi_+(max) / omega.
double green(const DiffusionModel& model, double lambda, double x, double y);

/// E_x[e^{-lambda T_a}].
double hitting_laplace(const DiffusionModel& model, double lambda, double x, double a);
/// E_x[e^{-lambda T_target}; T_target < T_avoid], x between the two levels.
double hitting_laplace_before(const DiffusionModel& model, double lambda, double x, double target,
                              double avoid);

/// Psi_lambda^{(+-)}(x, level, r) = Phi_+-(x)/Phi_+-(level)
///   +- (W_lambda^{(level)}(x) / omega_lambda) int_r^inf e^{-lambda t} nu_+-^{(level)}(dt).
/// The Levy measure is the one attached to the second position argument.
double psi(const DiffusionModel& model, double lambda, double x, double level, Sign sign, double r);
TransformValue psi_detailed(const DiffusionModel& model, double lambda, double x, double level, Sign sign,
                            double r);

/// E_start[e^{-gamma kappa_u^{(a,-)}}], start >= a.
double kappa_laplace(const DiffusionModel& model, double gamma, double a, double u, double start);
/// e^{gamma u} E_start[e^{-gamma kappa_u^{(a,-)}}] for Re(gamma) > 0: the
/// transform of kappa - u, which is what inversion needs.
std::complex<double> kappa_laplace_shifted(const DiffusionModel& model, std::complex<double> gamma, double a,
                                           double u, double start);

/// P_a(kappa_u^{(a,-)} < infinity).
double ruin_probability(const DiffusionModel& model, double a, double u);

// Meanders of length u started at a level: conditioned to stay below
// (down) or above (up) for duration u.

/// Density of the meander endpoint w.r.t. the speed measure.
double meander_density(const DiffusionModel& model, double level, MeanderDirection dir, double u, double z);
/// E[weight(X_u)] under the meander law.
double meander_expectation(const DiffusionModel& model, double level, MeanderDirection dir, double u,
                           const BoundedWeight& weight);

// Two-barrier results.

/// E_x[e^{-gamma kappa^- - lambda kappa^+} alpha(X_{kappa^-}) beta(X_{kappa^+}); kappa^+ <= kappa^-].
/// breakdown: F_a, F_b, psi_plus, psi_minus, denominator, meander_down, meander_up, kappa_laplace_b.
TransformValue quadruple_transform(const DiffusionModel& model, const TwoBarrierQuery& q,
                                   const BoundedWeight& alpha, const BoundedWeight& beta);

/// E_x[e^{-gamma kappa^- - lambda kappa^+}; kappa^+ <= kappa^-] with closed-form tails.
/// breakdown: F_a, F_b, psi_plus, psi_minus, denominator, kappa_laplace_b.
double pair_laplace(const DiffusionModel& model, const TwoBarrierQuery& q);
TransformValue pair_laplace_detailed(const DiffusionModel& model, const TwoBarrierQuery& q);

/// The same two-barrier assembly with every rate-dependent factor replaced by
/// its analytic limit at gamma = lambda = 0.
double pair_laplace_at_zero_rates(const DiffusionModel& model, double a, double b, double x, double u, double v);

/// Single level b: E_b[e^{-gamma kappa_u^{(b,-)} - lambda kappa_v^{(b,+)}}; kappa^+ <= kappa^-].
double one_barrier_pair_laplace(const DiffusionModel& model, double b, double u, double v, double gamma,
                                double lambda);

/// P_x(kappa_v^{(b,+)} <= kappa_u^{(a,-)} < infinity).
double order_probability(const DiffusionModel& model, double a, double b, double x, double u, double v);

/// E_a[e^{-lambda T_b}; T_b < kappa_u^{(a,-)}] = 1 / Psi_lambda^{(-)}(b, a, u).
double hitting_before_parisian_laplace(const DiffusionModel& model, double lambda, double a, double b, double u);

}  // namespace parisian
