#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <type_traits>

#include "parisian/errors.hpp"
#include "parisian/numerics/tolerance.hpp"

namespace parisian::numerics {

/// Sum of term(n) over all integers n. Terms are added in shells {n, -n}
/// outward from 0 so that sign patterns symmetric in n stay paired. Summation
/// stops after two consecutive shells each below rel_tol*|sum| + abs_tol.
template <class F>
double bilateral_sum(F&& term, const ToleranceSpec& tol = {}) {
  tol.validate();
  double sum = term(0L);
  std::size_t evals = 1;
  int quiet_shells = 0;
  for (long n = 1;; ++n) {
    if (evals + 2 > tol.max_evals) {
      std::ostringstream msg;
      msg << "bilateral_sum: max_evals (" << tol.max_evals << ") exceeded at |n| = " << n;
      throw AccuracyError(msg.str(), sum, std::abs(term(n) + term(-n)));
    }
    const double shell = term(n) + term(-n);
    evals += 2;
    sum += shell;
    if (std::abs(shell) <= tol.rel_tol * std::abs(sum) + tol.abs_tol) {
      if (++quiet_shells >= 2) break;
    } else {
      quiet_shells = 0;
    }
  }
  return sum;
}

/// Sum of term(k) for k = first, first + 1, ... Stops after two consecutive
/// terms each below rel_tol*|sum| + abs_tol; terms must eventually decrease.
template <class F>
auto unilateral_sum(F&& term, long first, const ToleranceSpec& tol = {}) {
  tol.validate();
  using R = std::decay_t<decltype(term(first))>;
  R sum{};
  int quiet_terms = 0;
  for (long k = first;; ++k) {
    if (static_cast<std::size_t>(k - first) >= tol.max_evals) {
      std::ostringstream msg;
      msg << "unilateral_sum: max_evals (" << tol.max_evals << ") exceeded";
      throw AccuracyError(msg.str(), std::abs(sum), std::abs(term(k)));
    }
    const R value = term(k);
    sum += value;
    if (std::abs(value) <= tol.rel_tol * std::abs(sum) + tol.abs_tol) {
      if (++quiet_terms >= 2) break;
    } else {
      quiet_terms = 0;
    }
  }
  return sum;
}

}  // namespace parisian::numerics
