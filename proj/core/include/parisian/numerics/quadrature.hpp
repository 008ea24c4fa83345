#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature on finite intervals and
// on [lower, +inf). The integrand may be real or std::complex<double> valued;
// error bookkeeping is done on magnitudes.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include "parisian/errors.hpp"
#include "parisian/numerics/tolerance.hpp"

namespace parisian::numerics {

template <class R>
struct QuadratureResult {
  R value{};
  double error = 0.0;
  std::size_t evals = 0;
};

namespace detail {

// Kronrod abscissae on [0, 1); odd indices are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208643474262, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class R>
struct Segment {
  double lo;
  double hi;
  R value;
  double error;
  bool frozen = false;
};

inline double magnitude(double v) { return std::abs(v); }
// Scalar reported by AccuracyError: the signed value for real integrands.
inline double reportable(double v) { return v; }
inline double reportable(const std::complex<double>& v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class R, class F>
Segment<R> gauss_kronrod_21(F& f, double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<R, 21> fv{};
  fv[10] = f(center);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[20 - j] = f(center + dx);
  }

  R resk = fv[10] * kWgk[10];
  R resg{};
  double resabs = magnitude(fv[10]) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const R pair = fv[j] + fv[20 - j];
    resk += pair * kWgk[j];
    resabs += kWgk[j] * (magnitude(fv[j]) + magnitude(fv[20 - j]));
    if (j % 2 == 1) resg += pair * kWg[j / 2];
  }
  const R reskh = resk * 0.5;
  double resasc = kWgk[10] * magnitude(fv[10] - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (magnitude(fv[j] - reskh) + magnitude(fv[20 - j] - reskh));
  }

  const double ah = std::abs(half);
  resabs *= ah;
  resasc *= ah;
  double err = magnitude((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);

  return Segment<R>{lo, hi, resk * half, err};
}

template <class R>
struct ByError {
  bool operator()(const Segment<R>& x, const Segment<R>& y) const { return x.error < y.error; }
};

template <class R, class F>
QuadratureResult<R> adaptive(F& f, double lo, double hi, const ToleranceSpec& tol) {
  tol.validate();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<Segment<R>> heap;
  std::vector<Segment<R>> frozen;
  heap.reserve(64);

  heap.push_back(gauss_kronrod_21<R>(f, lo, hi));
  std::size_t evals = 21;

  auto totals = [&]() {
    R value{};
    double error = 0.0;
    for (const auto& s : heap) {
      value += s.value;
      error += s.error;
    }
    for (const auto& s : frozen) {
      value += s.value;
      error += s.error;
    }
    return std::pair<R, double>{value, error};
  };

  auto [value, error] = totals();
  if (!finite(value) || !std::isfinite(error)) {
    throw AccuracyError("quadrature: non-finite integrand value", reportable(value), error);
  }

  std::size_t iteration = 0;
  while (error > std::max(tol.rel_tol * magnitude(value), tol.abs_tol)) {
    if (heap.empty()) {
      std::ostringstream msg;
      msg << "quadrature: subdivision limit reached on [" << lo << ", " << hi
          << "], estimate " << magnitude(value) << " +/- " << error;
      throw AccuracyError(msg.str(), reportable(value), error);
    }
    if (evals + 42 > tol.max_evals) {
      std::ostringstream msg;
      msg << "quadrature: max_evals (" << tol.max_evals << ") exceeded on [" << lo << ", " << hi
          << "], estimate " << magnitude(value) << " +/- " << error;
      throw AccuracyError(msg.str(), reportable(value), error);
    }
    std::pop_heap(heap.begin(), heap.end(), ByError<R>{});
    Segment<R> worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
    if (!(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) <= 8.0 * eps * scale) {
      worst.frozen = true;
      frozen.push_back(worst);
      continue;
    }

    Segment<R> left = gauss_kronrod_21<R>(f, worst.lo, mid);
    Segment<R> right = gauss_kronrod_21<R>(f, mid, worst.hi);
    evals += 42;
    if (!finite(left.value) || !finite(right.value)) {
      throw AccuracyError("quadrature: non-finite integrand value", reportable(value), error);
    }
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), ByError<R>{});
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), ByError<R>{});

    if (++iteration % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  return QuadratureResult<R>{value, error, evals};
}

}  // namespace detail

template <class F>
using integrand_result_t = std::decay_t<std::invoke_result_t<F&, double>>;

/// Adaptive integral of f over [lo, hi]. Integrable endpoint singularities are
/// handled by repeated bisection toward the offending endpoint.
template <class F>
QuadratureResult<integrand_result_t<F>> integrate_bounded_detailed(F&& f, double lo, double hi,
                                                                   const ToleranceSpec& tol = {}) {
  using R = integrand_result_t<F>;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("integrate_bounded: endpoints must be finite");
  }
  if (lo > hi) throw DomainError("integrate_bounded: lo > hi");
  if (lo == hi) return QuadratureResult<R>{};
  return detail::adaptive<R>(f, lo, hi, tol);
}

template <class F>
integrand_result_t<F> integrate_bounded(F&& f, double lo, double hi, const ToleranceSpec& tol = {}) {
  return integrate_bounded_detailed(std::forward<F>(f), lo, hi, tol).value;
}

/// Integral of f over [lower, +inf) through t = lower + s/(1-s). The
/// subdivision runs in w = 1 - s so that the point at infinity (w -> 0) keeps
/// full floating-point resolution.
template <class F>
QuadratureResult<integrand_result_t<F>> integrate_to_infinity_detailed(F&& f, double lower,
                                                                       const ToleranceSpec& tol = {}) {
  using R = integrand_result_t<F>;
  if (!std::isfinite(lower)) throw DomainError("integrate_to_infinity: lower must be finite");
  auto mapped = [&f, lower](double w) -> R {
    const double t = lower + (1.0 - w) / w;
    if (!std::isfinite(t)) return R{};
    return (f(t) / w) / w;
  };
  return detail::adaptive<R>(mapped, 0.0, 1.0, tol);
}

template <class F>
integrand_result_t<F> integrate_to_infinity(F&& f, double lower, const ToleranceSpec& tol = {}) {
  return integrate_to_infinity_detailed(std::forward<F>(f), lower, tol).value;
}

}  // namespace parisian::numerics
