#include "parisian/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parisian/levy_measure.hpp"
#include "parisian/numerics/series.hpp"

namespace parisian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2Pi = 2.5066282746310005024;

const numerics::ToleranceSpec kSeriesTol{1e-15, 0.0, 100000};

double gauss(double t, double y) { return std::exp(-y * y / (2.0 * t)) / std::sqrt(t) / kSqrt2Pi; }

// Density at t of the exit time at a, before 0, of Brownian motion from
// x in (0, a). Images for t <= a^2, sine series beyond.
double killed_exit_density(double x, double a, double t) {
  if (t <= a * a) {
    auto term = [&](long n) {
      const double y = (2.0 * static_cast<double>(n) + 1.0) * a - x;
      return y * std::exp(-y * y / (2.0 * t));
    };
    return numerics::bilateral_sum(term, kSeriesTol) / (kSqrt2Pi * t * std::sqrt(t));
  }
  const double pi = std::numbers::pi;
  auto term = [&](long k) {
    const double kk = static_cast<double>(k);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return sign * kk * std::sin(kk * pi * x / a) * std::exp(-kk * kk * pi * pi * t / (2.0 * a * a));
  };
  return pi / (a * a) * numerics::unilateral_sum(term, 1L, kSeriesTol);
}

// Same for Brownian motion reflected at 0.
double reflected_exit_density(double x, double a, double t) {
  if (t <= a * a) {
    auto term = [&](long n) {
      const double y = (2.0 * static_cast<double>(n) + 1.0) * a + x;
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      return sign * y * std::exp(-y * y / (2.0 * t));
    };
    return numerics::bilateral_sum(term, kSeriesTol) / (kSqrt2Pi * t * std::sqrt(t));
  }
  const double pi = std::numbers::pi;
  auto term = [&](long k) {
    const double beta = (static_cast<double>(k) + 0.5) * pi / a;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * beta * std::cos(beta * x) * std::exp(-beta * beta * t / 2.0);
  };
  return numerics::unilateral_sum(term, 0L, kSeriesTol) / a;
}

double free_exit_density(double distance, double t) {
  return distance / (kSqrt2Pi * t * std::sqrt(t)) * std::exp(-distance * distance / (2.0 * t));
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::brownian_drift: return "brownian_drift";
    case Family::bessel3_drift: return "bessel3_drift";
    case Family::reflected_bm: return "reflected_bm";
  }
  return "unknown";
}

std::string to_string(Recurrence r) {
  switch (r) {
    case Recurrence::recurrent: return "recurrent";
    case Recurrence::transient_to_sup: return "transient_to_sup";
    case Recurrence::transient_to_inf: return "transient_to_inf";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "brownian_drift") return Family::brownian_drift;
  if (name == "bessel3_drift") return Family::bessel3_drift;
  if (name == "reflected_bm") return Family::reflected_bm;
  throw DomainError("unknown model family '" + name + "'");
}

DiffusionModel::DiffusionModel(const ModelParams& params) : params_(params) {
  if (!std::isfinite(params.mu)) throw DomainError("model: mu must be finite");
  if (params.family == Family::bessel3_drift && !(params.mu > 0.0)) {
    throw DomainError("model: bessel3_drift requires mu > 0");
  }
  if (params.family == Family::reflected_bm) params_.mu = 0.0;
}

DiffusionModel build_model(const ModelParams& params) { return DiffusionModel(params); }

Recurrence DiffusionModel::recurrence() const noexcept {
  switch (family()) {
    case Family::brownian_drift:
      if (mu() > 0.0) return Recurrence::transient_to_sup;
      if (mu() < 0.0) return Recurrence::transient_to_inf;
      return Recurrence::recurrent;
    case Family::bessel3_drift: return Recurrence::transient_to_sup;
    case Family::reflected_bm: return Recurrence::recurrent;
  }
  return Recurrence::recurrent;
}

double DiffusionModel::inf() const noexcept { return family() == Family::brownian_drift ? -kInf : 0.0; }
double DiffusionModel::sup() const noexcept { return kInf; }

BoundaryKind DiffusionModel::lower_boundary() const noexcept {
  switch (family()) {
    case Family::brownian_drift: return BoundaryKind::natural;
    case Family::bessel3_drift: return BoundaryKind::entrance;
    case Family::reflected_bm: return BoundaryKind::reflecting;
  }
  return BoundaryKind::natural;
}

BoundaryKind DiffusionModel::upper_boundary() const noexcept { return BoundaryKind::natural; }

bool DiffusionModel::in_interior(double x) const noexcept {
  return std::isfinite(x) && x > inf() && x < sup();
}

bool DiffusionModel::in_domain(double x) const noexcept {
  if (family() == Family::reflected_bm) return std::isfinite(x) && x >= 0.0;
  return in_interior(x);
}

void DiffusionModel::require_domain(double x, const char* what) const {
  if (!in_domain(x)) {
    std::ostringstream msg;
    msg << what << ": position " << x << " outside the state space of " << to_string(family());
    throw DomainError(msg.str());
  }
}

double DiffusionModel::drift(double x) const {
  require_domain(x, "drift");
  switch (family()) {
    case Family::brownian_drift: return mu();
    case Family::bessel3_drift: return mu() / std::tanh(mu() * x);
    case Family::reflected_bm: return 0.0;
  }
  return 0.0;
}

double DiffusionModel::diffusion(double x) const {
  require_domain(x, "diffusion");
  return 1.0;
}

double DiffusionModel::scale(double x) const {
  require_domain(x, "scale");
  switch (family()) {
    case Family::brownian_drift:
      if (mu() == 0.0) return x;
      return -std::exp(-2.0 * mu() * x) / (2.0 * mu());
    case Family::bessel3_drift: return -2.0 * mu() / std::expm1(2.0 * mu() * x);
    case Family::reflected_bm: return x;
  }
  return x;
}

double DiffusionModel::scale_derivative(double x) const {
  require_domain(x, "scale_derivative");
  switch (family()) {
    case Family::brownian_drift: return std::exp(-2.0 * mu() * x);
    case Family::bessel3_drift: {
      const double sh = std::sinh(mu() * x);
      return mu() * mu() / (sh * sh);
    }
    case Family::reflected_bm: return 1.0;
  }
  return 1.0;
}

double DiffusionModel::speed_density(double x) const {
  const double sigma = diffusion(x);
  return 2.0 / (sigma * sigma * scale_derivative(x));
}

double DiffusionModel::scale_at_inf() const noexcept {
  if (family() == Family::brownian_drift && mu() < 0.0) return 0.0;
  return -kInf;
}

double DiffusionModel::scale_at_sup() const noexcept {
  if (family() == Family::bessel3_drift) return 0.0;
  if (family() == Family::brownian_drift && mu() > 0.0) return 0.0;
  return kInf;
}

template <class T>
EigenValues<T> DiffusionModel::eigen_impl(T lambda, double x) const {
  require_domain(x, "eigen");
  const double m = mu();
  EigenValues<T> e;
  switch (family()) {
    case Family::brownian_drift: {
      const T r = std::sqrt(2.0 * lambda + m * m);
      // r + mu and r - mu, each formed without cancellation.
      const T rpm = m >= 0.0 ? r + m : 2.0 * lambda / (r - m);
      const T rmm = m > 0.0 ? 2.0 * lambda / (r + m) : r - m;
      e.phi_plus = std::exp(-x * rpm);
      e.phi_minus = std::exp(x * rmm);
      e.dphi_plus = -rpm * e.phi_plus;
      e.dphi_minus = rmm * e.phi_minus;
      break;
    }
    case Family::bessel3_drift: {
      const T r = std::sqrt(2.0 * lambda + m * m);
      const double sh = std::sinh(m * x);
      const double cth = 1.0 / std::tanh(m * x);
      const T sxr = std::sinh(x * r);
      e.phi_plus = m * std::exp(-x * r) / sh;
      e.phi_minus = m * sxr / sh;
      e.dphi_plus = e.phi_plus * (-r - m * cth);
      e.dphi_minus = m * (r * std::cosh(x * r) - m * cth * sxr) / sh;
      break;
    }
    case Family::reflected_bm: {
      const T r = std::sqrt(2.0 * lambda);
      e.phi_plus = std::exp(-x * r);
      e.phi_minus = std::cosh(x * r);
      e.dphi_plus = -r * e.phi_plus;
      e.dphi_minus = r * std::sinh(x * r);
      break;
    }
  }
  return e;
}

EigenValues<double> DiffusionModel::eigen(double lambda, double x) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("eigen: lambda must be > 0");
  return eigen_impl<double>(lambda, x);
}

EigenValues<std::complex<double>> DiffusionModel::eigen(std::complex<double> lambda, double x) const {
  if (!(lambda.real() > 0.0)) throw DomainError("eigen: Re(lambda) must be > 0");
  return eigen_impl<std::complex<double>>(lambda, x);
}

double DiffusionModel::wronskian(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("wronskian: lambda must be > 0");
  const double m = mu();
  switch (family()) {
    case Family::brownian_drift: return 2.0 * std::sqrt(2.0 * lambda + m * m);
    case Family::bessel3_drift: return std::sqrt(2.0 * lambda + m * m);
    case Family::reflected_bm: return std::sqrt(2.0 * lambda);
  }
  return 0.0;
}

std::complex<double> DiffusionModel::wronskian(std::complex<double> lambda) const {
  if (!(lambda.real() > 0.0)) throw DomainError("wronskian: Re(lambda) must be > 0");
  const double m = mu();
  switch (family()) {
    case Family::brownian_drift: return 2.0 * std::sqrt(2.0 * lambda + m * m);
    case Family::bessel3_drift: return std::sqrt(2.0 * lambda + m * m);
    case Family::reflected_bm: return std::sqrt(2.0 * lambda);
  }
  return 0.0;
}

double DiffusionModel::log_derivative_at_zero(Sign sign, double x) const {
  require_domain(x, "log_derivative_at_zero");
  const double m = mu();
  switch (family()) {
    case Family::brownian_drift:
      return sign == Sign::plus ? -(std::abs(m) + m) : std::abs(m) - m;
    case Family::bessel3_drift:
      return sign == Sign::plus ? -m - m / std::tanh(m * x) : 0.0;
    case Family::reflected_bm: return 0.0;
  }
  return 0.0;
}

double DiffusionModel::inverse_green_at_zero(double a) const {
  require_domain(a, "inverse_green_at_zero");
  const double m = mu();
  switch (family()) {
    case Family::brownian_drift: return 2.0 * std::abs(m) * std::exp(2.0 * m * a);
    case Family::bessel3_drift: return std::expm1(2.0 * m * a) / (2.0 * m);
    case Family::reflected_bm: return 0.0;
  }
  return 0.0;
}

double DiffusionModel::transition_density(double t, double x, double z) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("transition_density: t must be > 0");
  require_domain(x, "transition_density");
  require_domain(z, "transition_density");
  const double m = mu();
  switch (family()) {
    case Family::brownian_drift:
      return 0.5 / (kSqrt2Pi * std::sqrt(t)) *
             std::exp(-(z - x) * (z - x) / (2.0 * t) - m * (x + z) - 0.5 * m * m * t);
    case Family::bessel3_drift:
      return m * m * std::exp(-0.5 * m * m * t) * gauss(t, z - x) * -std::expm1(-2.0 * x * z / t) /
             (2.0 * std::sinh(m * x) * std::sinh(m * z));
    case Family::reflected_bm: return 0.5 * (gauss(t, z - x) + gauss(t, z + x));
  }
  return 0.0;
}

double DiffusionModel::transition_density_dx(double t, double x, double z) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("transition_density_dx: t must be > 0");
  require_domain(x, "transition_density_dx");
  require_domain(z, "transition_density_dx");
  const double m = mu();
  switch (family()) {
    case Family::brownian_drift: return transition_density(t, x, z) * ((z - x) / t - m);
    case Family::bessel3_drift: {
      const double pre = m * m * std::exp(-0.5 * m * m * t) / (2.0 * std::sinh(m * x) * std::sinh(m * z));
      const double kernel_dx = (gauss(t, z - x) * (z - x) + gauss(t, z + x) * (z + x)) / t;
      return pre * kernel_dx - m / std::tanh(m * x) * transition_density(t, x, z);
    }
    case Family::reflected_bm:
      return (gauss(t, z - x) * (z - x) - gauss(t, z + x) * (z + x)) / (2.0 * t);
  }
  return 0.0;
}

double DiffusionModel::hitting_density(double x, double a, double t) const {
  require_domain(x, "hitting_density");
  require_domain(a, "hitting_density");
  if (x == a) throw DomainError("hitting_density: x == a gives T_a = 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("hitting_density: t must be > 0");
  const double m = mu();
  switch (family()) {
    case Family::brownian_drift: {
      const double d = a - x;
      return std::abs(d) / (kSqrt2Pi * t * std::sqrt(t)) * std::exp(-(d - m * t) * (d - m * t) / (2.0 * t));
    }
    case Family::bessel3_drift: {
      const double ratio = std::sinh(m * a) / std::sinh(m * x) * std::exp(-0.5 * m * m * t);
      if (x > a) return ratio * free_exit_density(x - a, t);
      return ratio * killed_exit_density(x, a, t);
    }
    case Family::reflected_bm:
      if (x > a) return free_exit_density(x - a, t);
      return reflected_exit_density(x, a, t);
  }
  return 0.0;
}

double DiffusionModel::hitting_probability(double x, double a) const {
  require_domain(x, "hitting_probability");
  require_domain(a, "hitting_probability");
  if (x == a) return 1.0;
  if (x > a) {
    const double top = scale_at_sup();
    if (!std::isfinite(top)) return 1.0;
    return (top - scale(x)) / (top - scale(a));
  }
  const double bottom = scale_at_inf();
  if (!std::isfinite(bottom)) return 1.0;
  return (scale(x) - bottom) / (scale(a) - bottom);
}

LevyMeasure DiffusionModel::levy(double level, Sign sign) const {
  if (!in_interior(level)) {
    std::ostringstream msg;
    msg << "levy: level " << level << " outside the interior of the state space";
    throw DomainError(msg.str());
  }
  const double m = mu();
  using Shape = LevyMeasure::Shape;
  switch (family()) {
    case Family::brownian_drift: {
      const double c = std::exp(2.0 * m * level);
      const double atom = c * (std::abs(m) + (sign == Sign::plus ? m : -m));
      return LevyMeasure(level, sign, Shape::tempered_stable, c, 0.5 * m * m, atom);
    }
    case Family::bessel3_drift: {
      const double sh = std::sinh(m * level);
      const double c = sh * sh / (m * m);
      if (sign == Sign::plus) {
        return LevyMeasure(level, sign, Shape::tempered_stable, c, 0.5 * m * m,
                           std::expm1(2.0 * m * level) / (2.0 * m));
      }
      return LevyMeasure(level, sign, Shape::killed_below, c, 0.5 * m * m, 0.0);
    }
    case Family::reflected_bm:
      if (sign == Sign::plus) return LevyMeasure(level, sign, Shape::tempered_stable, 1.0, 0.0, 0.0);
      return LevyMeasure(level, sign, Shape::reflected_below, 1.0, 0.0, 0.0);
  }
  throw DomainError("levy: unsupported family");
}

}  // namespace parisian
