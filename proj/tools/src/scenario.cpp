#include "parisian_cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace parisian::cli {

namespace {

using nlohmann::json;

// 1-based line of the key path inside the document text, or 0 if not found.
// Keys are searched in order, each after the previous match.
int line_of(const std::string& text, const std::string& dotted) {
  std::size_t pos = 0;
  std::istringstream parts(dotted);
  std::string key;
  while (std::getline(parts, key, '.')) {
    const std::string quoted = "\"" + key + "\"";
    for (;;) {
      pos = text.find(quoted, pos);
      if (pos == std::string::npos) return 0;
      std::size_t after = pos + quoted.size();
      while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
      if (after < text.size() && text[after] == ':') break;
      pos += quoted.size();
    }
  }
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Reader {
 public:
  Reader(Scenario& s, const std::string& text, const std::string& source) : s_(s), text_(text), source_(source) {}

  void record(const std::string& field) {
    const int line = line_of(text_, field);
    s_.origins[field] = line > 0 ? source_ + ":" + std::to_string(line) : source_;
  }

  // Rejects keys outside the schema so that typos do not pass silently.
  void only(const json& obj, const std::string& prefix, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
      record(prefix);
      s_.fail(prefix, "expected an object");
    }
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : obj.items()) {
      if (!allowed.count(k)) {
        const std::string field = prefix.empty() ? k : prefix + "." + k;
        record(field);
        s_.fail(field, "unknown key");
      }
    }
  }

  template <class T>
  bool read(const json& obj, const std::string& prefix, const char* key, T& out) {
    if (!obj.contains(key)) return false;
    const std::string field = prefix + "." + key;
    record(field);
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      s_.fail(field, std::string("wrong type (") + obj.at(key).type_name() + ")");
    }
    return true;
  }

  template <class T>
  void read_optional(const json& obj, const std::string& prefix, const char* key, std::optional<T>& out) {
    T value{};
    if (read(obj, prefix, key, value)) out = value;
  }

  void weight(const json& obj, const std::string& prefix, WeightSpec& w) {
    only(obj, prefix, {"kind", "level", "threshold", "exponent", "cap"});
    read(obj, prefix, "kind", w.kind);
    read_optional(obj, prefix, "level", w.level);
    read(obj, prefix, "threshold", w.threshold);
    read(obj, prefix, "exponent", w.exponent);
    read_optional(obj, prefix, "cap", w.cap);
  }

 private:
  Scenario& s_;
  const std::string& text_;
  const std::string& source_;
};

void check_weight(const Scenario& s, const std::string& prefix, const WeightSpec& w) {
  static const std::set<std::string> kinds = {"one", "distance", "indicator_below", "power"};
  if (!kinds.count(w.kind)) s.fail(prefix + ".kind", "unknown weight '" + w.kind + "'");
  if (!(w.exponent >= 0.0) || !std::isfinite(w.exponent)) s.fail(prefix + ".exponent", "must be finite and >= 0");
  if (w.cap && !(*w.cap > 0.0)) s.fail(prefix + ".cap", "must be > 0");
  if (w.level && !std::isfinite(*w.level)) s.fail(prefix + ".level", "must be finite");
}

}  // namespace

std::string Scenario::origin_of(const std::string& field) const {
  const auto it = origins.find(field);
  return it == origins.end() ? "default" : it->second;
}

void Scenario::fail(const std::string& field, const std::string& message) const {
  throw ScenarioError(origin_of(field) + ": " + field + ": " + message);
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    throw ScenarioError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }

  Scenario s;
  Reader r(s, text, source);
  s.origins[""] = source;
  r.only(doc, "", {"model", "query", "alpha", "beta", "meander", "inversion", "simulation"});

  if (doc.contains("model")) {
    const json& m = doc["model"];
    r.only(m, "model", {"family", "mu"});
    std::string family;
    if (r.read(m, "model", "family", family)) {
      try {
        s.model.family = family_from_string(family);
      } catch (const DomainError&) {
        s.fail("model.family", "unknown family '" + family + "'");
      }
    }
    r.read(m, "model", "mu", s.model.mu);
  }
  if (doc.contains("query")) {
    const json& q = doc["query"];
    r.only(q, "query", {"a", "b", "x", "u", "v", "gamma", "lambda"});
    r.read(q, "query", "a", s.query.a);
    r.read(q, "query", "b", s.query.b);
    r.read(q, "query", "x", s.query.x);
    r.read(q, "query", "u", s.query.u);
    r.read(q, "query", "v", s.query.v);
    r.read(q, "query", "gamma", s.query.gamma);
    r.read(q, "query", "lambda", s.query.lambda);
  }
  if (doc.contains("alpha")) r.weight(doc["alpha"], "alpha", s.alpha);
  if (doc.contains("beta")) r.weight(doc["beta"], "beta", s.beta);
  if (doc.contains("meander")) {
    const json& m = doc["meander"];
    r.only(m, "meander", {"level", "direction", "duration", "z", "weight"});
    r.read_optional(m, "meander", "level", s.meander.level);
    std::string dir;
    if (r.read(m, "meander", "direction", dir)) {
      if (dir == "down") {
        s.meander.direction = MeanderDirection::down;
      } else if (dir == "up") {
        s.meander.direction = MeanderDirection::up;
      } else {
        s.fail("meander.direction", "must be \"down\" or \"up\"");
      }
    }
    r.read_optional(m, "meander", "duration", s.meander.duration);
    r.read(m, "meander", "z", s.meander.z);
    if (m.contains("weight")) r.weight(m["weight"], "meander.weight", s.meander.weight);
  }
  if (doc.contains("inversion")) {
    const json& inv = doc["inversion"];
    r.only(inv, "inversion", {"node_count", "t_grid"});
    r.read(inv, "inversion", "node_count", s.inversion.node_count);
    r.read(inv, "inversion", "t_grid", s.inversion.t_grid);
  }
  if (doc.contains("simulation")) {
    const json& sim = doc["simulation"];
    r.only(sim, "simulation", {"n_paths", "dt", "horizon", "seed", "bridge_correction", "threads"});
    r.read(sim, "simulation", "n_paths", s.simulation.n_paths);
    r.read(sim, "simulation", "dt", s.simulation.dt);
    r.read(sim, "simulation", "horizon", s.simulation.horizon);
    r.read(sim, "simulation", "seed", s.simulation.seed);
    r.read(sim, "simulation", "bridge_correction", s.simulation.bridge_correction);
    r.read(sim, "simulation", "threads", s.simulation.threads);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

void validate_scenario(const Scenario& s, unsigned needs) {
  if (!std::isfinite(s.model.mu)) s.fail("model.mu", "must be finite");
  std::optional<DiffusionModel> model;
  try {
    model.emplace(s.model);
  } catch (const DomainError& e) {
    s.fail("model.mu", e.what());
  }

  const TwoBarrierQuery& q = s.query;
  auto finite = [&](const char* field, double v) {
    if (!std::isfinite(v)) s.fail(field, "must be finite");
  };
  const bool need_a = needs & kNeedA;
  const bool need_b = needs & kNeedB;
  if (need_a) {
    finite("query.a", q.a);
    if (!model->in_interior(q.a)) s.fail("query.a", "must lie in the interior of the state space");
  }
  if (need_b) {
    finite("query.b", q.b);
    if (!model->in_interior(q.b)) s.fail("query.b", "must lie in the interior of the state space");
  }
  if (need_a && need_b && !(q.a < q.b)) s.fail("query.b", "must be > query.a");
  if (needs & kNeedX) {
    finite("query.x", q.x);
    if ((need_a && q.x < q.a) || (need_b && q.x > q.b) || !model->in_domain(q.x)) {
      s.fail("query.x", need_a && need_b ? "must satisfy a <= x <= b" : need_a ? "must satisfy x >= a" : "must satisfy x <= b");
    }
  }
  if (!(q.u > 0.0) || !std::isfinite(q.u)) s.fail("query.u", "must be finite and > 0");
  if (!(q.v > 0.0) || !std::isfinite(q.v)) s.fail("query.v", "must be finite and > 0");
  if (!(q.gamma >= 0.0) || !std::isfinite(q.gamma)) s.fail("query.gamma", "must be finite and >= 0");
  if (!(q.lambda >= 0.0) || !std::isfinite(q.lambda)) s.fail("query.lambda", "must be finite and >= 0");

  check_weight(s, "alpha", s.alpha);
  check_weight(s, "beta", s.beta);
  check_weight(s, "meander.weight", s.meander.weight);
  if (s.meander.level && !model->in_interior(*s.meander.level)) {
    s.fail("meander.level", "must lie in the interior of the state space");
  }
  if (s.meander.duration && (!(*s.meander.duration > 0.0) || !std::isfinite(*s.meander.duration))) {
    s.fail("meander.duration", "must be finite and > 0");
  }

  if (s.inversion.node_count < 8 || s.inversion.node_count % 2 != 0) {
    s.fail("inversion.node_count", "must be even and >= 8");
  }
  if (s.inversion.t_grid.empty()) s.fail("inversion.t_grid", "must be nonempty");
  for (std::size_t i = 0; i < s.inversion.t_grid.size(); ++i) {
    const double t = s.inversion.t_grid[i];
    if (!(t > 0.0) || !std::isfinite(t)) s.fail("inversion.t_grid", "values must be finite and > 0");
    if (i > 0 && !(t > s.inversion.t_grid[i - 1])) s.fail("inversion.t_grid", "must be strictly increasing");
  }

  const SimConfig& c = s.simulation;
  if (c.n_paths < 1) s.fail("simulation.n_paths", "must be >= 1");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) s.fail("simulation.horizon", "must be finite and > 0");
  if (!(c.dt > 0.0) || !(c.dt <= c.horizon)) s.fail("simulation.dt", "must satisfy 0 < dt <= horizon");
}

BoundedWeight make_weight(const WeightSpec& spec, double default_level) {
  const double level = spec.level.value_or(default_level);
  const double cap = spec.cap.value_or(std::numeric_limits<double>::infinity());
  BoundedWeight w;
  w.name = spec.kind;
  if (spec.kind == "one") return BoundedWeight::one();
  if (spec.kind == "distance") {
    w.fn = [level, cap](double z) { return std::min(std::abs(z - level), cap); };
    w.sup_bound = cap;
  } else if (spec.kind == "indicator_below") {
    const double threshold = spec.threshold;
    w.fn = [threshold](double z) { return z < threshold ? 1.0 : 0.0; };
    w.sup_bound = 1.0;
  } else if (spec.kind == "power") {
    const double p = spec.exponent;
    w.fn = [level, cap, p](double z) { return std::pow(std::min(std::abs(z - level), cap), p); };
    w.sup_bound = std::pow(cap, p);
  } else {
    throw ScenarioError("unknown weight '" + spec.kind + "'");
  }
  return w;
}

}  // namespace parisian::cli
