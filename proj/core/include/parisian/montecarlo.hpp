#pragma once

// Brute-force path simulation of Parisian times, used as an independent oracle
// for the closed-form engine.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "parisian/model.hpp"

namespace parisian {

struct SimConfig {
  std::size_t n_paths = 100'000;
  double dt = 1e-4;         // finest step, used within a few sqrt(dt) of a level
  double horizon = 1e3;     // paths are censored here
  std::uint64_t seed = 1;
  bool bridge_correction = true;
  unsigned threads = 0;     // 0: PARISIAN_THREADS, else hardware concurrency

  /// n_paths >= 1, 0 < dt <= horizon, horizon finite.
  void validate() const;
};

/// Levels and durations of the two Parisian times. b = +inf leaves
/// kappa^{(b,+)} untracked; a = -inf leaves kappa^{(a,-)} untracked.
struct ParisianScenario {
  double a = 0.0;
  double b = 1.0;
  double x = 0.0;
  double u = 1.0;
  double v = 1.0;

  void validate(const DiffusionModel& model) const;
};

enum class KappaStatus {
  observed,  // happened before the horizon
  censored,  // still pending at the horizon
  never,     // ruled out: untracked level, or the path escaped for good
};

/// Censoring-aware value of the event {kappa^+ <= kappa^- < inf}.
enum class OrderEvent { occurred, not_occurred, unknown };

struct ParisianSample {
  double kappa_minus = std::numeric_limits<double>::infinity();
  double kappa_plus = std::numeric_limits<double>::infinity();
  KappaStatus minus_status = KappaStatus::censored;
  KappaStatus plus_status = KappaStatus::censored;
  double x_at_minus = std::numeric_limits<double>::quiet_NaN();  // <= a when observed
  double x_at_plus = std::numeric_limits<double>::quiet_NaN();   // >= b when observed
  OrderEvent order_event = OrderEvent::unknown;
  std::uint64_t steps = 0;
  std::uint64_t floor_events = 0;  // bessel positivity floor engagements
};

struct SampleSet {
  std::vector<ParisianSample> samples;  // in path-index order
  std::uint64_t total_steps = 0;
  std::uint64_t floor_events = 0;
  std::vector<std::string> warnings;
};

/// Simulates config.n_paths independent paths. Path i draws from generators
/// seeded by (config.seed, i) only, so results do not depend on threading.
SampleSet simulate(const DiffusionModel& model, const ParisianScenario& scenario, const SimConfig& config);

/// The order event implied by the two statuses, given the model's recurrence.
OrderEvent classify_order_event(const ParisianSample& s, Recurrence recurrence);

enum class KappaSide { minus, plus };

struct Functional {
  enum class Kind { order_probability, pair_laplace, kappa_cdf, position_mean, independence_covariance };

  Kind kind = Kind::order_probability;
  double gamma = 0.0;
  double lambda = 0.0;
  double t = 0.0;
  KappaSide side = KappaSide::minus;
  std::function<double(double)> time_fn;      // f applied to the Parisian time
  std::function<double(double)> position_fn;  // weight or g applied to the position
  std::string name;

  static Functional order_probability();
  /// E[e^{-gamma kappa^- - lambda kappa^+}; kappa^+ <= kappa^-]; censored
  /// times contribute e^{-rate * inf} = 0.
  static Functional pair_laplace(double gamma, double lambda);
  /// P(kappa <= t); t must not exceed the horizon.
  static Functional kappa_cdf(double t, KappaSide side = KappaSide::minus);
  /// E[weight(X_kappa) | kappa observed].
  static Functional position_mean(std::function<double(double)> weight, KappaSide side);
  /// Cov(f(kappa), g(X_kappa)) over paths in the order event; for kappa^+ the
  /// two are independent there, so the z-score mean/std_error tests that.
  static Functional independence_covariance(std::function<double(double)> f, std::function<double(double)> g,
                                            KappaSide side = KappaSide::plus);
};

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;               // observations entering the estimate
  double censored_fraction = 0.0;  // over all paths
};

EstimateWithError estimate(const SampleSet& set, const Functional& functional);

/// Probability that a Brownian bridge of duration dt from x0 to x1 (both on
/// the same side of level) touches the level.
double bridge_crossing_probability(double x0, double x1, double level, double dt);

/// Level crossings along a fixed skeleton (times, xs). With the bridge
/// correction, same-side steps also count as a crossing with the bridge
/// probability, decided by uniforms from `seed`.
std::size_t count_level_crossings(const std::vector<double>& times, const std::vector<double>& xs, double level,
                                  bool bridge_correction, std::uint64_t seed);

}  // namespace parisian
