#include "parisian/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "parisian/errors.hpp"

namespace parisian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this probability of ever returning to a level, the path is treated
// as having escaped from it for good.
constexpr double kEscapeProbability = 1e-9;
constexpr unsigned kEscapeCheckEvery = 256;
// Steps are at most this many dt: exact Gaussian schemes and Euler.
constexpr double kMaxStepExact = 1e4;
constexpr double kMaxStepEuler = 1e2;
constexpr std::size_t kChunk = 256;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(2 * index + stream));
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PARISIAN_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Excursion clock of one level. `below` selects kappa^{(a,-)}.
struct Clock {
  double level;
  double duration;
  bool below;
  bool active;
  double g = 0.0;  // start of the current excursion
  KappaStatus status = KappaStatus::censored;
  double time = kInf;
  double x_at = std::numeric_limits<double>::quiet_NaN();

  bool on_side(double x) const { return below ? x < level : x > level; }
};

class PathSimulator {
 public:
  PathSimulator(const DiffusionModel& model, const ParisianScenario& sc, const SimConfig& cfg)
      : model_(model), sc_(sc), cfg_(cfg), euler_(model.family() == Family::bessel3_drift),
        max_step_(cfg.dt * (euler_ ? kMaxStepEuler : kMaxStepExact)),
        transient_(model.recurrence() != Recurrence::recurrent) {}

  ParisianSample run(std::uint64_t index) const {
    std::mt19937_64 gen(path_seed(cfg_.seed, index, 0));
    std::mt19937_64 bridge_gen(path_seed(cfg_.seed, index, 1));
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> uniform;

    Clock clocks[2] = {{sc_.a, sc_.u, true, std::isfinite(sc_.a)}, {sc_.b, sc_.v, false, std::isfinite(sc_.b)}};
    for (Clock& c : clocks) {
      if (!c.active) c.status = KappaStatus::never;
    }
    const double short_duration = 0.5 * std::min(sc_.u, sc_.v);
    const double eps = cfg_.dt;  // bessel positivity floor

    ParisianSample out;
    double t = 0.0;
    double x = sc_.x;
    auto pending = [&]() { return clocks[0].active || clocks[1].active; };

    while (pending() && t < cfg_.horizon) {
      // Step size: fine near a pending level (or near 0 for bessel), coarse
      // far away; landing exactly on excursion deadlines and the horizon.
      double dist = euler_ ? x : kInf;
      for (const Clock& c : clocks) {
        if (c.active) dist = std::min(dist, std::abs(x - c.level));
      }
      double step = std::clamp(dist * dist / 36.0, cfg_.dt, max_step_);
      step = std::min({step, short_duration, cfg_.horizon - t});
      for (const Clock& c : clocks) {
        if (c.active && c.on_side(x)) step = std::min(step, c.g + c.duration - t);
      }
      step = std::max(step, 1e-15 * (1.0 + t));

      const double z = normal(gen);
      double x_new = 0.0;
      switch (model_.family()) {
        case Family::brownian_drift:
          x_new = x + model_.mu() * step + std::sqrt(step) * z;
          break;
        case Family::reflected_bm:
          x_new = std::abs(x + std::sqrt(step) * z);
          break;
        case Family::bessel3_drift:
          x_new = x + model_.drift(x) * step + std::sqrt(step) * z;
          if (x_new < eps) {
            x_new = 2.0 * eps - x_new;
            ++out.floor_events;
          }
          break;
      }
      const double t_new = t + step;
      ++out.steps;

      for (Clock& c : clocks) {
        if (!c.active) continue;
        const double d0 = x - c.level;
        const double d1 = x_new - c.level;
        if (d0 * d1 < 0.0) {
          c.g = t + step * d0 / (d0 - d1);
        } else if (d1 == 0.0) {
          c.g = t_new;
        } else if (cfg_.bridge_correction && d0 == 0.0) {
          // Started on the level: the bridge's last visit lies inside the step.
          c.g = t + 0.5 * step;
        } else if (cfg_.bridge_correction) {
          const double p = std::exp(-2.0 * d0 * d1 / step);
          if (p > 1e-300 && uniform(bridge_gen) < p) c.g = t + 0.5 * step;
        }
        if (c.on_side(x_new) && t_new >= c.g + c.duration - 1e-12 * (1.0 + t_new)) {
          c.status = KappaStatus::observed;
          c.time = t_new;
          c.x_at = x_new;
          c.active = false;
        }
      }
      t = t_new;
      x = x_new;

      if (transient_ && out.steps % kEscapeCheckEvery == 0) {
        for (Clock& c : clocks) {
          if (c.active && !c.on_side(x) && x != c.level &&
              model_.hitting_probability(x, c.level) < kEscapeProbability) {
            c.status = KappaStatus::never;
            c.active = false;
          }
        }
      }
    }

    out.minus_status = clocks[0].status;
    out.kappa_minus = clocks[0].time;
    out.x_at_minus = clocks[0].x_at;
    out.plus_status = clocks[1].status;
    out.kappa_plus = clocks[1].time;
    out.x_at_plus = clocks[1].x_at;
    out.order_event = classify_order_event(out, model_.recurrence());
    return out;
  }

 private:
  const DiffusionModel& model_;
  const ParisianScenario& sc_;
  const SimConfig& cfg_;
  bool euler_;
  double max_step_;
  bool transient_;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Mean of per-observation values with the plain standard error.
EstimateWithError summarize(const std::vector<double>& values, double censored_fraction) {
  if (values.empty()) throw DomainError("estimate: no observations enter the functional");
  const double m = mean_of(values);
  double ss = 0.0;
  for (double x : values) ss += (x - m) * (x - m);
  const double n = static_cast<double>(values.size());
  const double se = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {m, se, values.size(), censored_fraction};
}

// e^{-rate * kappa}, with a censored or absent kappa counting as +inf.
double discount(double rate, KappaStatus status, double time) {
  if (status == KappaStatus::observed) return std::exp(-rate * time);
  return rate == 0.0 ? 1.0 : 0.0;
}

}  // namespace

void SimConfig::validate() const {
  if (n_paths < 1) throw DomainError("SimConfig: n_paths must be >= 1");
  if (!std::isfinite(horizon)) throw DomainError("SimConfig: horizon must be finite");
  if (!(dt > 0.0) || !(dt <= horizon)) throw DomainError("SimConfig: need 0 < dt <= horizon");
}

void ParisianScenario::validate(const DiffusionModel& model) const {
  const bool has_a = std::isfinite(a);
  const bool has_b = std::isfinite(b);
  if (!has_a && !has_b) throw DomainError("ParisianScenario: at least one of a, b must be finite");
  if (std::isnan(a) || std::isnan(b)) throw DomainError("ParisianScenario: levels must not be NaN");
  if (has_a && !model.in_interior(a)) throw DomainError("ParisianScenario: a must lie in the interior of I");
  if (has_b && !model.in_interior(b)) throw DomainError("ParisianScenario: b must lie in the interior of I");
  if (has_a && has_b && !(a < b)) throw DomainError("ParisianScenario: need a < b");
  if (!model.in_domain(x)) throw DomainError("ParisianScenario: start x must lie in I");
  if ((has_a && x < a) || (has_b && x > b)) throw DomainError("ParisianScenario: need a <= x <= b");
  if (!(u > 0.0) || !(v > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
    throw DomainError("ParisianScenario: durations must be finite and > 0");
  }
}

OrderEvent classify_order_event(const ParisianSample& s, Recurrence recurrence) {
  switch (s.minus_status) {
    case KappaStatus::observed:
      return s.plus_status == KappaStatus::observed && s.kappa_plus <= s.kappa_minus ? OrderEvent::occurred
                                                                                      : OrderEvent::not_occurred;
    case KappaStatus::never:
      return OrderEvent::not_occurred;
    case KappaStatus::censored:
      break;
  }
  if (s.plus_status == KappaStatus::never) return OrderEvent::not_occurred;
  // kappa^- lies beyond the horizon; it is finite almost surely unless the
  // model drifts to the top of I.
  if (s.plus_status == KappaStatus::observed && recurrence != Recurrence::transient_to_sup) {
    return OrderEvent::occurred;
  }
  return OrderEvent::unknown;
}

SampleSet simulate(const DiffusionModel& model, const ParisianScenario& scenario, const SimConfig& config) {
  config.validate();
  scenario.validate(model);
  const PathSimulator sim(model, scenario, config);

  SampleSet set;
  set.samples.resize(config.n_paths);
  const unsigned n_threads = std::min<std::size_t>(resolve_threads(config.threads),
                                                   (config.n_paths + kChunk - 1) / kChunk);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= config.n_paths) return;
      const std::size_t end = std::min(begin + kChunk, config.n_paths);
      for (std::size_t i = begin; i < end; ++i) set.samples[i] = sim.run(i);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::size_t censored = 0;
  for (const ParisianSample& s : set.samples) {
    set.total_steps += s.steps;
    set.floor_events += s.floor_events;
    if (s.minus_status == KappaStatus::censored || s.plus_status == KappaStatus::censored) ++censored;
  }
  if (set.floor_events > set.total_steps / 1000) {
    std::ostringstream msg;
    msg << "simulate: positivity floor engaged in " << set.floor_events << " of " << set.total_steps
        << " steps (> 0.1%); expect discretization bias near 0";
    set.warnings.push_back(msg.str());
  }
  if (censored > 0) {
    std::ostringstream msg;
    msg << "simulate: " << censored << " of " << config.n_paths << " paths censored at horizon " << config.horizon;
    set.warnings.push_back(msg.str());
  }
  return set;
}

Functional Functional::order_probability() {
  Functional f;
  f.kind = Kind::order_probability;
  f.name = "order_probability";
  return f;
}

Functional Functional::pair_laplace(double gamma, double lambda) {
  if (!(gamma >= 0.0) || !(lambda >= 0.0)) throw DomainError("pair_laplace: rates must be >= 0");
  Functional f;
  f.kind = Kind::pair_laplace;
  f.gamma = gamma;
  f.lambda = lambda;
  f.name = "pair_laplace";
  return f;
}

Functional Functional::kappa_cdf(double t, KappaSide side) {
  if (!(t >= 0.0)) throw DomainError("kappa_cdf: t must be >= 0");
  Functional f;
  f.kind = Kind::kappa_cdf;
  f.t = t;
  f.side = side;
  f.name = "kappa_cdf";
  return f;
}

Functional Functional::position_mean(std::function<double(double)> weight, KappaSide side) {
  Functional f;
  f.kind = Kind::position_mean;
  f.side = side;
  f.position_fn = std::move(weight);
  f.name = "position_mean";
  return f;
}

Functional Functional::independence_covariance(std::function<double(double)> time_fn,
                                               std::function<double(double)> position_fn, KappaSide side) {
  Functional f;
  f.kind = Kind::independence_covariance;
  f.side = side;
  f.time_fn = std::move(time_fn);
  f.position_fn = std::move(position_fn);
  f.name = "independence_covariance";
  return f;
}

EstimateWithError estimate(const SampleSet& set, const Functional& fn) {
  const auto& samples = set.samples;
  if (samples.empty()) throw DomainError("estimate: empty sample set");
  const double n_all = static_cast<double>(samples.size());
  auto status_of = [&](const ParisianSample& s) { return fn.side == KappaSide::minus ? s.minus_status : s.plus_status; };
  auto time_of = [&](const ParisianSample& s) { return fn.side == KappaSide::minus ? s.kappa_minus : s.kappa_plus; };
  auto position_of = [&](const ParisianSample& s) { return fn.side == KappaSide::minus ? s.x_at_minus : s.x_at_plus; };

  std::vector<double> values;
  std::size_t censored = 0;
  switch (fn.kind) {
    case Functional::Kind::order_probability:
      values.reserve(samples.size());
      for (const ParisianSample& s : samples) {
        if (s.order_event == OrderEvent::unknown) ++censored;
        values.push_back(s.order_event == OrderEvent::occurred ? 1.0 : 0.0);
      }
      return summarize(values, censored / n_all);

    case Functional::Kind::pair_laplace:
      values.reserve(samples.size());
      for (const ParisianSample& s : samples) {
        if (s.minus_status == KappaStatus::censored || s.plus_status == KappaStatus::censored) ++censored;
        const bool in_event = s.order_event == OrderEvent::occurred;
        values.push_back(in_event ? discount(fn.gamma, s.minus_status, s.kappa_minus) *
                                        discount(fn.lambda, s.plus_status, s.kappa_plus)
                                  : 0.0);
      }
      return summarize(values, censored / n_all);

    case Functional::Kind::kappa_cdf:
      values.reserve(samples.size());
      for (const ParisianSample& s : samples) {
        if (status_of(s) == KappaStatus::censored) ++censored;
        values.push_back(status_of(s) == KappaStatus::observed && time_of(s) <= fn.t ? 1.0 : 0.0);
      }
      return summarize(values, censored / n_all);

    case Functional::Kind::position_mean:
      if (!fn.position_fn) throw DomainError("position_mean: weight is required");
      for (const ParisianSample& s : samples) {
        if (status_of(s) == KappaStatus::censored) ++censored;
        if (status_of(s) == KappaStatus::observed) values.push_back(fn.position_fn(position_of(s)));
      }
      return summarize(values, censored / n_all);

    case Functional::Kind::independence_covariance: {
      if (!fn.time_fn || !fn.position_fn) throw DomainError("independence_covariance: f and g are required");
      std::vector<double> fs;
      std::vector<double> gs;
      for (const ParisianSample& s : samples) {
        if (s.order_event == OrderEvent::unknown) ++censored;
        if (s.order_event != OrderEvent::occurred || status_of(s) != KappaStatus::observed) continue;
        fs.push_back(fn.time_fn(time_of(s)));
        gs.push_back(fn.position_fn(position_of(s)));
      }
      if (fs.size() < 2) throw DomainError("independence_covariance: fewer than two paths in the order event");
      const double mf = mean_of(fs);
      const double mg = mean_of(gs);
      // Influence function of the covariance: (f - mf)(g - mg) - cov.
      values.resize(fs.size());
      for (std::size_t i = 0; i < fs.size(); ++i) values[i] = (fs[i] - mf) * (gs[i] - mg);
      return summarize(values, censored / n_all);
    }
  }
  throw DomainError("estimate: unknown functional");
}

double bridge_crossing_probability(double x0, double x1, double level, double dt) {
  if (!(dt > 0.0)) throw DomainError("bridge_crossing_probability: dt must be > 0");
  const double prod = (x0 - level) * (x1 - level);
  if (prod <= 0.0) return 1.0;
  return std::exp(-2.0 * prod / dt);
}

std::size_t count_level_crossings(const std::vector<double>& times, const std::vector<double>& xs, double level,
                                  bool bridge_correction, std::uint64_t seed) {
  if (times.size() != xs.size()) throw DomainError("count_level_crossings: times and xs differ in length");
  std::mt19937_64 gen(path_seed(seed, 0, 1));
  boost::random::uniform_01<double> uniform;
  std::size_t count = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double d0 = xs[i - 1] - level;
    const double d1 = xs[i] - level;
    // Uniforms are drawn on every step so that both modes see one skeleton.
    const double draw = uniform(gen);
    if (d0 * d1 < 0.0 || d1 == 0.0) {
      ++count;
    } else if (bridge_correction && d0 != 0.0 && draw < std::exp(-2.0 * d0 * d1 / (times[i] - times[i - 1]))) {
      ++count;
    }
  }
  return count;
}

}  // namespace parisian
