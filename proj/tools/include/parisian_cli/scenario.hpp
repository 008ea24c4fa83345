#pragma once

// Scenario documents: JSON describing a model, the two-barrier query, weights
// and command-specific extras. Every field keeps its origin (file line or
// command-line flag) so that validation errors can point at it.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parisian/errors.hpp"
#include "parisian/inversion.hpp"
#include "parisian/model.hpp"
#include "parisian/montecarlo.hpp"
#include "parisian/parisian.hpp"

namespace parisian::cli {

/// Invalid scenario content. The message starts with the origin of the
/// offending field, e.g. "scenario.json:7: query.x: ...".
class ScenarioError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Named built-in weights, all continuous except indicator_below:
///   one              1
///   distance         min(|z - level|, cap)
///   indicator_below  1{z < threshold}
///   power            min(|z - level|, cap)^exponent
struct WeightSpec {
  std::string kind = "one";
  std::optional<double> level;  // defaults to a for alpha, b for beta
  double threshold = 0.0;
  double exponent = 1.0;
  std::optional<double> cap;
};

struct MeanderSpec {
  std::optional<double> level;     // defaults to a (down) or b (up)
  MeanderDirection direction = MeanderDirection::down;
  std::optional<double> duration;  // defaults to u (down) or v (up)
  std::vector<double> z;           // density grid; empty means expectation
  WeightSpec weight;
};

struct Scenario {
  ModelParams model;
  TwoBarrierQuery query;
  WeightSpec alpha;
  WeightSpec beta;
  MeanderSpec meander;
  InversionSpec inversion{32, {0.5, 1.0, 2.0, 5.0, 10.0}};
  SimConfig simulation{10'000, 1e-3, 1e3, 1, true, 0};

  /// Dotted field path -> human-readable origin ("file:line" or "--flag").
  std::map<std::string, std::string> origins;

  std::string origin_of(const std::string& field) const;
  [[noreturn]] void fail(const std::string& field, const std::string& message) const;
};

/// Parses a scenario document. `source` names it in error messages.
Scenario parse_scenario(const std::string& text, const std::string& source);
Scenario load_scenario(const std::string& path);

// Which query fields a command reads; unused levels are not validated.
inline constexpr unsigned kNeedA = 1;
inline constexpr unsigned kNeedB = 2;
inline constexpr unsigned kNeedX = 4;  // x between the needed levels
inline constexpr unsigned kNeedAll = kNeedA | kNeedB | kNeedX;

/// Checks every invariant the command relies on; throws ScenarioError naming
/// the field and its origin.
void validate_scenario(const Scenario& s, unsigned needs = kNeedAll);

BoundedWeight make_weight(const WeightSpec& spec, double default_level);

}  // namespace parisian::cli
