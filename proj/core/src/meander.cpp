#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "parisian/numerics/quadrature.hpp"
#include "parisian/parisian.hpp"

namespace parisian {

namespace {

const numerics::ToleranceSpec kOuterTol{1e-11, 1e-300, 50'000};
// Relative accuracy the inner quadratures reach before rounding dominates.
constexpr double kInnerFloor = 1e-13;
// Largest predicted relative rounding noise accepted without an AccuracyError.
constexpr double kDensityNoise = 1e-9;

// Integral over [0, hi]. If the budget runs out only because rounding in the
// integrand floors the error estimate, the best estimate is kept. In loose
// mode any best estimate is kept; the caller accounts for the noise.
template <class F>
double settle(F& f, double hi, const numerics::ToleranceSpec& tol, bool loose) {
  try {
    return numerics::integrate_bounded(f, 0.0, hi, tol);
  } catch (const AccuracyError& e) {
    if (loose || e.error_bound() <= 1e-11 * std::abs(e.best_estimate())) return e.best_estimate();
    throw;
  }
}

struct Evaluated {
  double value;
  double noise;  // absolute rounding noise predicted from the cancellation
};

// Endpoint law of the meander of length u leaving `level` downward (z < level)
// or upward (z > level), as a density w.r.t. the speed measure:
//   -+ (1/(s'(level) N)) dp/dx(u; level, z) + p(u; level, z)
//     + (1/N) int_0^u (p(u; level, z) - p(u - t; level, z)) nu(dt),
// with nu the Levy measure of the matching side and N = nu[u, +inf].
// When u is long compared with the room below the level, N is tiny and the
// derivative term cancels against the integral; the noise is tracked.
class MeanderKernel {
 public:
  MeanderKernel(const DiffusionModel& model, double level, MeanderDirection dir, double u)
      : model_(model), level_(level), dir_(dir), u_(u),
        nu_(model.levy(level, dir == MeanderDirection::down ? Sign::minus : Sign::plus)),
        n_(nu_.tail(u)), scale_slope_(model.scale_derivative(level)),
        peak_(model.transition_density(u, level, level)) {
    if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("meander: duration must be finite and > 0");
  }

  Evaluated evaluate(double z, bool loose) const {
    const bool ok = dir_ == MeanderDirection::down ? z < level_ : z > level_;
    if (!ok || !model_.in_domain(z)) {
      std::ostringstream msg;
      msg << "meander: endpoint z=" << z << " is on the wrong side of level " << level_;
      throw DomainError(msg.str());
    }
    const double p_u = model_.transition_density(u_, level_, z);
    const double dp = model_.transition_density_dx(u_, level_, z);
    const double sign = dir_ == MeanderDirection::down ? -1.0 : 1.0;
    // t = w^2 near 0 removes the t^{-1/2} singularity left after cancellation;
    // t = u - w^2 near u keeps the short remaining time u - t exact.
    // The integrand tends to a constant as w -> 0 while rounding in the
    // difference grows like 1/w^2; below the cutoff it is held at its value there.
    const double cutoff = 3e-4 * std::sqrt(u_);
    auto near_zero = [&](double w) {
      const double wc = std::max(w, cutoff);
      return (p_u - model_.transition_density(u_ - wc * wc, level_, z)) * nu_.density(wc * wc) * 2.0 * wc;
    };
    auto near_u = [&](double w) {
      const double rest = w * w;
      return (p_u - model_.transition_density(rest, level_, z)) * nu_.density(u_ - rest) * 2.0 * w;
    };
    const double derivative = sign * dp / scale_slope_;
    const double half = std::sqrt(0.5 * u_);
    auto smoothing = [&](const numerics::ToleranceSpec& tol) {
      return settle(near_zero, half, tol, loose) + settle(near_u, half, tol, loose);
    };
    // Loose mode is used once the conditioning is known to be poor; the noise
    // reported is still the rounding floor so that it measures conditioning.
    if (loose) {
      const double coarse = smoothing({1e-10, 0.0, 4'000});
      return {p_u + (derivative + coarse) / n_, kInnerFloor * (std::abs(derivative) + std::abs(coarse)) / n_};
    }
    // A rough pass sizes the result; the second pass targets an absolute
    // error relative to it rather than to the cancelling parts.
    const double rough = p_u + (derivative + smoothing({1e-6, 0.0, 200'000})) / n_;
    const double target = 1e-13 * n_ * std::max(std::abs(rough), 1e-12 * (std::abs(p_u) + peak_));
    const double fine = smoothing({kInnerFloor, target, 20'000});
    const double value = p_u + (derivative + fine) / n_;
    const double noise = kInnerFloor * (std::abs(derivative) + std::abs(fine)) / n_;
    return {value, noise};
  }

  double density(double z) const {
    const Evaluated e = evaluate(z, false);
    if (e.noise > kDensityNoise * std::max(std::abs(e.value), 1e-12 * peak_)) {
      throw AccuracyError(ill_conditioned("meander_density"), e.value, e.noise);
    }
    return e.value;
  }

  double expectation(const BoundedWeight& weight) const {
    // One probe inside the bulk predicts the conditioning of every density.
    const double room = dir_ == MeanderDirection::up ? std::sqrt(u_)
                                                     : std::min(std::sqrt(u_), level_ - model_.inf());
    const double probe = level_ + (dir_ == MeanderDirection::up ? 0.5 : -0.5) * room;
    const Evaluated at_probe = evaluate(probe, true);
    const double rel_noise = at_probe.noise / std::max(std::abs(at_probe.value), 1e-300);
    const bool loose = rel_noise > kDensityNoise;

    auto weighted = [&](double z) {
      const double wz = weight(z);
      if (wz == 0.0) return 0.0;
      const double d = evaluate(z, loose).value;
      return d == 0.0 ? 0.0 : wz * d * model_.speed_density(z);
    };
    const numerics::ToleranceSpec tol =
        loose ? numerics::ToleranceSpec{std::max(1e-6, 10.0 * rel_noise), 1e-300, 2'000} : kOuterTol;
    auto integrate = [&]() {
      if (dir_ == MeanderDirection::up) {
        return numerics::integrate_to_infinity([&](double y) { return y > 0.0 ? weighted(level_ + y) : 0.0; }, 0.0,
                                               tol);
      }
      if (std::isfinite(model_.inf())) return numerics::integrate_bounded(weighted, model_.inf(), level_, tol);
      return numerics::integrate_to_infinity([&](double y) { return y > 0.0 ? weighted(level_ - y) : 0.0; }, 0.0,
                                             tol);
    };
    double value = 0.0;
    try {
      value = integrate();
    } catch (const AccuracyError& e) {
      if (!loose && e.error_bound() <= 1e-9 * std::abs(e.best_estimate())) return e.best_estimate();
      if (!loose) throw;
      value = e.best_estimate();
    }
    if (loose) {
      // The coarse inner passes stop at 1e-10, i.e. 1e3 times the rounding floor.
      const double bound = std::max(tol.rel_tol, 1e3 * rel_noise) * std::abs(value);
      throw AccuracyError(ill_conditioned("meander_expectation"), value, bound);
    }
    return value;
  }

 private:
  std::string ill_conditioned(const char* op) const {
    std::ostringstream msg;
    msg << op << ": ill-conditioned at level " << level_ << ", u=" << u_ << " (nu[u, inf] = " << n_
        << "); the derivative term cancels against the integral";
    return msg.str();
  }

  const DiffusionModel& model_;
  double level_;
  MeanderDirection dir_;
  double u_;
  LevyMeasure nu_;
  double n_;
  double scale_slope_;
  double peak_;  // p(u; level, level), the natural size of the density
};

}  // namespace

double meander_density(const DiffusionModel& model, double level, MeanderDirection dir, double u, double z) {
  return MeanderKernel(model, level, dir, u).density(z);
}

double meander_expectation(const DiffusionModel& model, double level, MeanderDirection dir, double u,
                           const BoundedWeight& weight) {
  return MeanderKernel(model, level, dir, u).expectation(weight);
}

}  // namespace parisian
