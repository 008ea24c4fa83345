#pragma once

#include <cstddef>

#include "parisian/errors.hpp"

namespace parisian::numerics {

struct ToleranceSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_evals = 1'000'000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("ToleranceSpec: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw DomainError("ToleranceSpec: abs_tol must be >= 0");
    if (max_evals < 1) throw DomainError("ToleranceSpec: max_evals must be >= 1");
  }
};

}  // namespace parisian::numerics
