#include "parisian/inversion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "parisian/errors.hpp"

namespace parisian {

namespace {

constexpr double kExcursion = 1e-6;

std::string at_node(const char* what, std::complex<double> s) {
  std::ostringstream msg;
  msg << what << " [inversion node s=" << s.real() << (s.imag() < 0.0 ? "" : "+") << s.imag() << "i]";
  return msg.str();
}

}  // namespace

void InversionSpec::validate() const {
  if (node_count < 8 || node_count % 2 != 0) throw DomainError("InversionSpec: node_count must be even and >= 8");
  if (t_grid.empty()) throw DomainError("InversionSpec: t_grid must be nonempty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) {
      throw DomainError("InversionSpec: t_grid values must be finite and > 0");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("InversionSpec: t_grid must be strictly increasing");
  }
}

double invert(const ComplexTransform& transform, double t, int node_count) {
  if (node_count < 8 || node_count % 2 != 0) throw DomainError("invert: node_count must be even and >= 8");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("invert: t must be finite and > 0");
  const int m = node_count / 2;
  const double shift = m * std::numbers::ln10 / 3.0;

  // Euler weights xi_k: 1/2, then ones up to M, then the binomial tail
  // xi_{2M-k} = xi_{2M-k+1} + 2^{-M} C(M, k), down to xi_{2M} = 2^{-M}.
  std::vector<double> xi(2 * m + 1, 1.0);
  xi[0] = 0.5;
  const double scale = std::pow(2.0, -m);
  xi[2 * m] = scale;
  double binom = 1.0;  // C(M, k)
  for (int k = 1; k < m; ++k) {
    binom = binom * (m - k + 1) / k;
    xi[2 * m - k] = xi[2 * m - k + 1] + scale * binom;
  }

  const double amplitude = std::pow(10.0, m / 3.0);
  double sum = 0.0;
  for (int k = 0; k <= 2 * m; ++k) {
    const std::complex<double> s(shift / t, std::numbers::pi * k / t);
    std::complex<double> value;
    try {
      value = transform(s);
    } catch (const AccuracyError& e) {
      throw AccuracyError(at_node(e.what(), s), e.best_estimate(), e.error_bound());
    } catch (const SingularityError& e) {
      throw SingularityError(at_node(e.what(), s), e.breakdown());
    } catch (const DomainError& e) {
      throw DomainError(at_node(e.what(), s));
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw AccuracyError(at_node("invert: non-finite transform value", s), 0.0, INFINITY);
    }
    const double eta = amplitude * (k % 2 == 0 ? 1.0 : -1.0) * xi[k];
    sum += eta * value.real();
  }
  return sum / t;
}

CdfResult cdf_on_grid(const ComplexTransform& law_transform, const InversionSpec& spec, double delay) {
  spec.validate();
  if (!(delay >= 0.0) || !std::isfinite(delay)) throw DomainError("cdf_on_grid: delay must be finite and >= 0");
  const ComplexTransform cdf_transform = [&](std::complex<double> s) { return law_transform(s) / s; };
  CdfResult result;
  result.points.reserve(spec.t_grid.size());
  for (double t : spec.t_grid) {
    const double raw = t <= delay ? 0.0 : invert(cdf_transform, t - delay, spec.node_count);
    const double clamped = std::min(1.0, std::max(0.0, raw));
    if (raw < -kExcursion || raw > 1.0 + kExcursion) {
      std::ostringstream msg;
      msg << "cdf_on_grid: raw value " << raw << " at t=" << t << " lies outside [0, 1] by more than 1e-6";
      result.warnings.push_back(msg.str());
    }
    result.points.push_back({t, clamped, raw});
  }
  return result;
}

}  // namespace parisian
