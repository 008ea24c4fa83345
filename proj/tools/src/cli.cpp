#include "parisian_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parisian/inversion.hpp"
#include "parisian/montecarlo.hpp"
#include "parisian/parisian.hpp"
#include "parisian_cli/csv.hpp"
#include "parisian_cli/scenario.hpp"

namespace parisian::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Command-line values; each one present overrides the scenario file.
struct Overrides {
  std::string scenario_path;
  std::string out_path;
  std::optional<std::string> family;
  std::optional<double> mu, gamma, lambda, a, b, x, u, v, dt, horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_paths;
  std::optional<unsigned> threads;
};

template <class T, class F>
void apply(Scenario& s, const std::optional<T>& value, const char* field, const char* flag, F&& assign) {
  if (!value) return;
  assign(*value);
  s.origins[field] = std::string("flag ") + flag;
}

Scenario build_scenario(const Overrides& o) {
  Scenario s = o.scenario_path.empty() ? Scenario{} : load_scenario(o.scenario_path);
  if (o.family) {
    try {
      s.model.family = family_from_string(*o.family);
    } catch (const DomainError&) {
      throw ScenarioError("flag --family: unknown family '" + *o.family + "'");
    }
    s.origins["model.family"] = "flag --family";
  }
  apply(s, o.mu, "model.mu", "--mu", [&](double v) { s.model.mu = v; });
  apply(s, o.gamma, "query.gamma", "--gamma", [&](double v) { s.query.gamma = v; });
  apply(s, o.lambda, "query.lambda", "--lambda", [&](double v) { s.query.lambda = v; });
  apply(s, o.a, "query.a", "--a", [&](double v) { s.query.a = v; });
  apply(s, o.b, "query.b", "--b", [&](double v) { s.query.b = v; });
  apply(s, o.x, "query.x", "--x", [&](double v) { s.query.x = v; });
  apply(s, o.u, "query.u", "--u", [&](double v) { s.query.u = v; });
  apply(s, o.v, "query.v", "--v", [&](double v) { s.query.v = v; });
  apply(s, o.dt, "simulation.dt", "--dt", [&](double v) { s.simulation.dt = v; });
  apply(s, o.horizon, "simulation.horizon", "--horizon", [&](double v) { s.simulation.horizon = v; });
  apply(s, o.seed, "simulation.seed", "--seed", [&](std::uint64_t v) { s.simulation.seed = v; });
  apply(s, o.n_paths, "simulation.n_paths", "--n-paths", [&](std::size_t v) { s.simulation.n_paths = v; });
  apply(s, o.threads, "simulation.threads", "--threads", [&](unsigned v) { s.simulation.threads = v; });
  return s;
}

void warn_all(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) err << "warning: " << w << '\n';
}

void require_rates(const Scenario& s) {
  if (!(s.query.gamma > 0.0)) s.fail("query.gamma", "this command needs gamma > 0");
  if (!(s.query.lambda > 0.0)) s.fail("query.lambda", "this command needs lambda > 0");
}

void write_breakdown(CsvWriter& csv, const TransformValue& tv, const std::string& name) {
  csv.quantity(name, tv.value);
  for (const auto& [key, value] : tv.breakdown) csv.quantity(key, value);
}

ParisianScenario sim_scenario(const Scenario& s) {
  return {s.query.a, s.query.b, s.query.x, s.query.u, s.query.v};
}

CdfResult kappa_minus_cdf(const DiffusionModel& model, const Scenario& s) {
  const double a = s.query.a;
  const double u = s.query.u;
  const double x = s.query.x;
  return cdf_on_grid([&](std::complex<double> g) { return kappa_laplace_shifted(model, g, a, u, x); }, s.inversion,
                     u);
}

std::string cdf_label(const char* side, double t) {
  std::ostringstream label;
  label << "kappa_" << side << "_cdf@" << t;
  return label.str();
}

int cmd_transform(const Scenario& s, std::ostream& out) {
  validate_scenario(s);
  require_rates(s);
  const DiffusionModel model(s.model);
  const TransformValue tv =
      quadruple_transform(model, s.query, make_weight(s.alpha, s.query.a), make_weight(s.beta, s.query.b));
  CsvWriter csv(out, {"quantity", "value", "std_error"});
  write_breakdown(csv, tv, "quadruple_transform");
  return kExitOk;
}

int cmd_pair(const Scenario& s, std::ostream& out) {
  validate_scenario(s);
  const DiffusionModel model(s.model);
  CsvWriter csv(out, {"quantity", "value", "std_error"});
  if (s.query.gamma == 0.0 && s.query.lambda == 0.0) {
    const TwoBarrierQuery& q = s.query;
    csv.quantity("pair_laplace", pair_laplace_at_zero_rates(model, q.a, q.b, q.x, q.u, q.v));
    return kExitOk;
  }
  require_rates(s);
  write_breakdown(csv, pair_laplace_detailed(model, s.query), "pair_laplace");
  return kExitOk;
}

int cmd_one_barrier(const Scenario& s, std::ostream& out) {
  validate_scenario(s, kNeedB);
  require_rates(s);
  const DiffusionModel model(s.model);
  const TwoBarrierQuery& q = s.query;
  CsvWriter csv(out, {"quantity", "value", "std_error"});
  csv.quantity("one_barrier_pair_laplace", one_barrier_pair_laplace(model, q.b, q.u, q.v, q.gamma, q.lambda));
  return kExitOk;
}

int cmd_order_prob(const Scenario& s, std::ostream& out) {
  validate_scenario(s);
  const DiffusionModel model(s.model);
  const TwoBarrierQuery& q = s.query;
  CsvWriter csv(out, {"quantity", "value", "std_error"});
  csv.quantity("order_probability", order_probability(model, q.a, q.b, q.x, q.u, q.v));
  return kExitOk;
}

int cmd_ruin(const Scenario& s, std::ostream& out) {
  validate_scenario(s, kNeedA);
  const DiffusionModel model(s.model);
  CsvWriter csv(out, {"quantity", "value", "std_error"});
  csv.quantity("ruin_probability", ruin_probability(model, s.query.a, s.query.u));
  return kExitOk;
}

int cmd_meander(const Scenario& s, std::ostream& out) {
  const bool down = s.meander.direction == MeanderDirection::down;
  validate_scenario(s, down ? kNeedA : kNeedB);
  const DiffusionModel model(s.model);
  const double level = s.meander.level.value_or(down ? s.query.a : s.query.b);
  const double duration = s.meander.duration.value_or(down ? s.query.u : s.query.v);
  if (s.meander.z.empty()) {
    CsvWriter csv(out, {"quantity", "value", "std_error"});
    const BoundedWeight w = make_weight(s.meander.weight, level);
    csv.quantity("meander_expectation", meander_expectation(model, level, s.meander.direction, duration, w));
    return kExitOk;
  }
  for (double z : s.meander.z) {
    if (down ? !(z < level) : !(z > level)) s.fail("meander.z", "points must lie strictly on the meander's side");
  }
  CsvWriter csv(out, {"z", "density"});
  for (double z : s.meander.z) {
    csv.row({format_number(z), format_number(meander_density(model, level, s.meander.direction, duration, z))});
  }
  return kExitOk;
}

int cmd_invert_cdf(const Scenario& s, std::ostream& out, std::ostream& err) {
  validate_scenario(s, kNeedA | kNeedX);
  const DiffusionModel model(s.model);
  const CdfResult cdf = kappa_minus_cdf(model, s);
  warn_all(err, cdf.warnings);
  CsvWriter csv(out, {"t", "cdf"});
  for (const CdfPoint& p : cdf.points) csv.row({format_number(p.t), format_number(p.value)});
  return kExitOk;
}

int cmd_simulate(const Scenario& s, std::ostream& out, std::ostream& err) {
  validate_scenario(s);
  const DiffusionModel model(s.model);
  const SampleSet set = simulate(model, sim_scenario(s), s.simulation);
  warn_all(err, set.warnings);
  CsvWriter csv(out, {"quantity", "value", "std_error"});
  const EstimateWithError order = estimate(set, Functional::order_probability());
  csv.quantity("order_probability", order.mean, order.std_error);
  if (s.query.gamma > 0.0 || s.query.lambda > 0.0) {
    const EstimateWithError pair = estimate(set, Functional::pair_laplace(s.query.gamma, s.query.lambda));
    csv.quantity("pair_laplace", pair.mean, pair.std_error);
  }
  for (double t : s.inversion.t_grid) {
    if (t > s.simulation.horizon) continue;
    const EstimateWithError cdf = estimate(set, Functional::kappa_cdf(t, KappaSide::minus));
    csv.quantity(cdf_label("minus", t), cdf.mean, cdf.std_error);
  }
  csv.quantity("censored_fraction", order.censored_fraction);
  csv.quantity("paths", static_cast<double>(set.samples.size()));
  return kExitOk;
}

struct Check {
  std::string name;
  double formula;
  double monte_carlo;
  double std_error;
  double tolerance;
  bool pass;
};

int cmd_verify(const Scenario& s, std::ostream& out, std::ostream& err) {
  validate_scenario(s);
  const DiffusionModel model(s.model);
  const TwoBarrierQuery& q = s.query;
  // Discretization bias allowance on top of 3 standard errors: exact
  // Gaussian steps for Brownian families, Euler steps for bessel3_drift.
  const double budget = model.family() == Family::bessel3_drift ? 0.01 : 0.005;
  std::vector<Check> checks;
  auto compare = [&](const std::string& name, double formula, const EstimateWithError& mc, double tol) {
    checks.push_back({name, formula, mc.mean, mc.std_error, tol, std::abs(formula - mc.mean) <= tol});
  };

  const SampleSet set = simulate(model, sim_scenario(s), s.simulation);
  warn_all(err, set.warnings);

  const EstimateWithError order = estimate(set, Functional::order_probability());
  compare("order_probability", order_probability(model, q.a, q.b, q.x, q.u, q.v), order,
          3.0 * order.std_error + budget);

  if (q.gamma > 0.0 && q.lambda > 0.0) {
    const EstimateWithError pair = estimate(set, Functional::pair_laplace(q.gamma, q.lambda));
    compare("pair_laplace", pair_laplace(model, q), pair, 3.0 * pair.std_error + budget);
  }

  try {
    const EstimateWithError cov = estimate(
        set, Functional::independence_covariance([](double t) { return std::exp(-t); },
                                                 [b = q.b](double z) { return std::exp(-(z - b)); }));
    const double z = cov.std_error > 0.0 ? cov.mean / cov.std_error : 0.0;
    checks.push_back({"independence_z", 0.0, z, 1.0, 3.0, std::abs(z) < 3.0});
  } catch (const DomainError& e) {
    err << "warning: independence check skipped: " << e.what() << '\n';
  }

  const CdfResult cdf = kappa_minus_cdf(model, s);
  warn_all(err, cdf.warnings);
  for (const CdfPoint& p : cdf.points) {
    if (p.t > s.simulation.horizon) continue;
    const EstimateWithError mc = estimate(set, Functional::kappa_cdf(p.t, KappaSide::minus));
    compare(cdf_label("minus", p.t), p.value, mc, std::max(3.0 * mc.std_error, 0.01));
  }

  if (model.recurrence() != Recurrence::recurrent) {
    const SampleSet from_a = simulate(model, {q.a, kInf, q.a, q.u, q.v}, s.simulation);
    warn_all(err, from_a.warnings);
    const EstimateWithError ruin = estimate(from_a, Functional::kappa_cdf(s.simulation.horizon, KappaSide::minus));
    compare("ruin_probability", ruin_probability(model, q.a, q.u), ruin, 3.0 * ruin.std_error + budget);
  }

  CsvWriter csv(out, {"check", "formula", "monte_carlo", "std_error", "tolerance", "pass"});
  bool all = true;
  for (const Check& c : checks) {
    csv.row({c.name, format_number(c.formula), format_number(c.monte_carlo), format_number(c.std_error),
             format_number(c.tolerance), c.pass ? "pass" : "FAIL"});
    all = all && c.pass;
  }
  return all ? kExitOk : kExitVerify;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parisian stopping times of linear diffusions: closed forms, inversion and Monte Carlo"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--scenario", o.scenario_path, "Scenario JSON file");
  app.add_option("--out", o.out_path, "Write CSV here instead of standard output");
  app.add_option("--family", o.family, "brownian_drift, bessel3_drift or reflected_bm");
  app.add_option("--mu", o.mu, "Drift parameter");
  app.add_option("--gamma", o.gamma, "Rate on kappa^(a,-)");
  app.add_option("--lambda", o.lambda, "Rate on kappa^(b,+)");
  app.add_option("--a", o.a, "Lower level");
  app.add_option("--b", o.b, "Upper level");
  app.add_option("--x", o.x, "Starting point");
  app.add_option("--u", o.u, "Duration below a");
  app.add_option("--v", o.v, "Duration above b");
  app.add_option("--seed", o.seed, "Simulation seed");
  app.add_option("--n-paths", o.n_paths, "Simulated paths");
  app.add_option("--dt", o.dt, "Finest simulation step");
  app.add_option("--horizon", o.horizon, "Simulation censoring horizon");
  app.add_option("--threads", o.threads, "Simulation workers (0: PARISIAN_THREADS or all cores)");

  using Handler = std::function<int(const Scenario&, std::ostream&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h) {
    commands.emplace_back(app.add_subcommand(name, help), std::move(h));
  };
  auto plain = [](int (*f)(const Scenario&, std::ostream&)) {
    return [f](const Scenario& s, std::ostream& o, std::ostream&) { return f(s, o); };
  };
  add("transform", "Weighted joint transform with breakdown", plain(cmd_transform));
  add("pair", "Joint Laplace transform on {kappa+ <= kappa-}", plain(cmd_pair));
  add("one-barrier", "Joint transform of the two Parisian times of level b", plain(cmd_one_barrier));
  add("order-prob", "P(kappa+ <= kappa- < inf)", plain(cmd_order_prob));
  add("ruin", "P_a(kappa_u^(a,-) < inf)", plain(cmd_ruin));
  add("meander", "Meander endpoint density or expectation", plain(cmd_meander));
  add("invert-cdf", "CDF of kappa_u^(a,-) from x by Laplace inversion", cmd_invert_cdf);
  add("simulate", "Monte Carlo estimates for the scenario", cmd_simulate);
  add("verify", "Formula versus Monte Carlo comparison table", cmd_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const Scenario scenario = build_scenario(o);
    std::ofstream file;
    if (!o.out_path.empty()) {
      file.open(o.out_path);
      if (!file) {
        err << "error: cannot open --out file " << o.out_path << '\n';
        return kExitInvalid;
      }
    }
    std::ostream& sink = o.out_path.empty() ? out : file;
    for (const auto& [sub, handler] : commands) {
      if (sub->parsed()) return handler(scenario, sink, err);
    }
    return kExitInvalid;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const AccuracyError& e) {
    err << "numerical error: " << e.what() << " (best estimate " << e.best_estimate() << " +/- " << e.error_bound()
        << ")\n";
    return kExitNumerical;
  } catch (const SingularityError& e) {
    err << "numerical error: " << e.what() << '\n';
    for (const auto& [k, v] : e.breakdown()) err << "  " << k << " = " << v << '\n';
    return kExitNumerical;
  }
}

}  // namespace parisian::cli
