#include <algorithm>
#include <cmath>
#include <sstream>

#include "parisian/parisian.hpp"

namespace parisian {

namespace {

void require_rate(double rate, const char* what) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    std::ostringstream msg;
    msg << what << ": rate must be finite and > 0, got " << rate;
    throw DomainError(msg.str());
  }
}

void require_duration(double r, const char* what) {
  if (!(r > 0.0) || std::isnan(r)) {
    std::ostringstream msg;
    msg << what << ": duration must be > 0, got " << r;
    throw DomainError(msg.str());
  }
}

template <class T>
T w_impl(const DiffusionModel& model, T lambda, double c, double x) {
  const auto ec = model.eigen(lambda, c);
  const auto ex = model.eigen(lambda, x);
  return ex.phi_plus * ec.phi_minus - ex.phi_minus * ec.phi_plus;
}

template <class T>
T inverse_green_diag(const DiffusionModel& model, T lambda, double a) {
  const auto e = model.eigen(lambda, a);
  return model.wronskian(lambda) / (e.phi_minus * e.phi_plus);
}

// Pieces of the two-barrier formula at rate rho = gamma + lambda.
struct TwoBarrierCore {
  double w_ba_over_omega;  // W_rho^{(b)}(a) / omega_rho
  double psi_plus;         // Psi_rho^{(+)}(a, b, v)
  double psi_minus;        // Psi_rho^{(-)}(b, a, u)
  double denominator;      // psi_plus - 1/psi_minus
  double kappa_b;          // E_b[e^{-gamma kappa_u^{(a,-)}}]
};

TwoBarrierCore two_barrier_core(const DiffusionModel& model, const TwoBarrierQuery& q) {
  const double rho = q.gamma + q.lambda;
  TwoBarrierCore core{};
  core.w_ba_over_omega = w_impl<double>(model, rho, q.b, q.a) / model.wronskian(rho);
  core.psi_plus = psi(model, rho, q.a, q.b, Sign::plus, q.v);
  core.psi_minus = psi(model, rho, q.b, q.a, Sign::minus, q.u);
  core.denominator = core.psi_plus - 1.0 / core.psi_minus;
  core.kappa_b = kappa_laplace(model, q.gamma, q.a, q.u, q.b);
  if (!(std::abs(core.denominator) >= 1e-12)) {
    throw SingularityError("two-barrier denominator Psi^(+) - 1/Psi^(-) vanished",
                           {{"psi_plus", core.psi_plus},
                            {"psi_minus", core.psi_minus},
                            {"denominator", core.denominator},
                            {"W_over_omega", core.w_ba_over_omega}});
  }
  return core;
}

// F(x) from F(b): (W^{(b)}(x)/W^{(b)}(a)/Psi^{(-)} + W^{(a)}(x)/W^{(a)}(b)) F(b), all at rate rho.
double propagate_from_b(const DiffusionModel& model, const TwoBarrierQuery& q, double psi_minus, double f_b) {
  if (q.x == q.b) return f_b;
  const double rho = q.gamma + q.lambda;
  const double below = w_impl<double>(model, rho, q.b, q.x) / w_impl<double>(model, rho, q.b, q.a);
  const double above = w_impl<double>(model, rho, q.a, q.x) / w_impl<double>(model, rho, q.a, q.b);
  return (below / psi_minus + above) * f_b;
}

}  // namespace

void TwoBarrierQuery::validate(const DiffusionModel& model, bool require_rates) const {
  std::ostringstream msg;
  if (!model.in_interior(a) || !model.in_interior(b)) {
    msg << "query: levels a=" << a << ", b=" << b << " must lie inside the state space";
  } else if (!(a < b)) {
    msg << "query: need a < b, got a=" << a << ", b=" << b;
  } else if (!(x >= a && x <= b)) {
    msg << "query: need a <= x <= b, got x=" << x;
  } else if (!(u > 0.0) || !(v > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
    msg << "query: durations must be finite and > 0, got u=" << u << ", v=" << v;
  } else if (!(gamma >= 0.0) || !(lambda >= 0.0) || !std::isfinite(gamma) || !std::isfinite(lambda)) {
    msg << "query: rates must be finite and >= 0";
  } else if (require_rates && !(gamma > 0.0 && lambda > 0.0)) {
    msg << "query: transforms need gamma > 0 and lambda > 0";
  } else {
    return;
  }
  throw DomainError(msg.str());
}

BoundedWeight BoundedWeight::one() { return BoundedWeight{[](double) { return 1.0; }, 1.0, "one"}; }

double w_func(const DiffusionModel& model, double lambda, double c, double x) {
  require_rate(lambda, "w_func");
  return w_impl<double>(model, lambda, c, x);
}

std::complex<double> w_func(const DiffusionModel& model, std::complex<double> lambda, double c, double x) {
  return w_impl<std::complex<double>>(model, lambda, c, x);
}

double green(const DiffusionModel& model, double lambda, double x, double y) {
  require_rate(lambda, "green");
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  return model.eigen(lambda, lo).phi_minus * model.eigen(lambda, hi).phi_plus / model.wronskian(lambda);
}

double hitting_laplace(const DiffusionModel& model, double lambda, double x, double a) {
  require_rate(lambda, "hitting_laplace");
  const auto ex = model.eigen(lambda, x);
  const auto ea = model.eigen(lambda, a);
  if (x == a) return 1.0;
  return x > a ? ex.phi_plus / ea.phi_plus : ex.phi_minus / ea.phi_minus;
}

double hitting_laplace_before(const DiffusionModel& model, double lambda, double x, double target,
                              double avoid) {
  require_rate(lambda, "hitting_laplace_before");
  if (target == avoid) throw DomainError("hitting_laplace_before: target and avoid coincide");
  if (x < std::min(target, avoid) || x > std::max(target, avoid)) {
    throw DomainError("hitting_laplace_before: x must lie between target and avoid");
  }
  return w_impl<double>(model, lambda, avoid, x) / w_impl<double>(model, lambda, avoid, target);
}

TransformValue psi_detailed(const DiffusionModel& model, double lambda, double x, double level, Sign sign,
                            double r) {
  require_rate(lambda, "psi");
  require_duration(r, "psi");
  const auto ex = model.eigen(lambda, x);
  const auto el = model.eigen(lambda, level);
  const double ratio = sign == Sign::plus ? ex.phi_plus / el.phi_plus : ex.phi_minus / el.phi_minus;
  const double w = ex.phi_plus * el.phi_minus - ex.phi_minus * el.phi_plus;
  double correction = 0.0;
  double tail = 0.0;
  if (w != 0.0) {
    tail = model.levy(level, sign).exp_tail(lambda, r);
    correction = (sign == Sign::plus ? 1.0 : -1.0) * w / model.wronskian(lambda) * tail;
  }
  return TransformValue{ratio + correction,
                        {{"phi_ratio", ratio}, {"levy_term", correction}, {"exp_tail", tail}}};
}

double psi(const DiffusionModel& model, double lambda, double x, double level, Sign sign, double r) {
  return psi_detailed(model, lambda, x, level, sign, r).value;
}

double kappa_laplace(const DiffusionModel& model, double gamma, double a, double u, double start) {
  require_rate(gamma, "kappa_laplace");
  require_duration(u, "kappa_laplace");
  if (start < a) throw DomainError("kappa_laplace: start must be >= a");
  const auto ea = model.eigen(gamma, a);
  const auto es = model.eigen(gamma, start);
  const LevyMeasure nu = model.levy(a, Sign::minus);
  const double inv_green = model.wronskian(gamma) / (ea.phi_minus * ea.phi_plus);
  return std::exp(-gamma * u) * (es.phi_plus / ea.phi_plus) * nu.tail(u) / (inv_green + nu.exp_tail(gamma, u));
}

std::complex<double> kappa_laplace_shifted(const DiffusionModel& model, std::complex<double> gamma, double a,
                                           double u, double start) {
  require_duration(u, "kappa_laplace_shifted");
  if (start < a) throw DomainError("kappa_laplace_shifted: start must be >= a");
  const auto ea = model.eigen(gamma, a);
  const auto es = model.eigen(gamma, start);
  const LevyMeasure nu = model.levy(a, Sign::minus);
  return (es.phi_plus / ea.phi_plus) * nu.tail(u) / (inverse_green_diag(model, gamma, a) + nu.exp_tail(gamma, u));
}

double ruin_probability(const DiffusionModel& model, double a, double u) {
  require_duration(u, "ruin_probability");
  const LevyMeasure nu = model.levy(a, Sign::minus);
  if (model.recurrence() != Recurrence::transient_to_sup) return 1.0;
  return nu.tail(u) / (model.inverse_green_at_zero(a) + nu.tail_finite(u));
}

TransformValue quadruple_transform(const DiffusionModel& model, const TwoBarrierQuery& q,
                                   const BoundedWeight& alpha, const BoundedWeight& beta) {
  q.validate(model, true);
  const double rho = q.gamma + q.lambda;
  const TwoBarrierCore core = two_barrier_core(model, q);
  const double phi_b = model.eigen(q.gamma, q.b).phi_plus;
  const double gamma = q.gamma;
  const BoundedWeight tilted{[&](double z) { return model.eigen(gamma, z).phi_plus / phi_b * beta(z); },
                             beta.sup_bound, "tilted"};
  const double down = meander_expectation(model, q.a, MeanderDirection::down, q.u, alpha);
  const double up = meander_expectation(model, q.b, MeanderDirection::up, q.v, tilted);
  const double nu_tail = model.levy(q.b, Sign::plus).tail(q.v);
  const double f_b =
      std::exp(-rho * q.v) * core.w_ba_over_omega * nu_tail * core.kappa_b / core.denominator * down * up;
  const double f_a = propagate_from_b(model, TwoBarrierQuery{q.a, q.b, q.a, q.u, q.v, q.gamma, q.lambda},
                                      core.psi_minus, f_b);
  const double f_x = propagate_from_b(model, q, core.psi_minus, f_b);
  return TransformValue{f_x,
                        {{"F_a", f_a},
                         {"F_b", f_b},
                         {"psi_plus", core.psi_plus},
                         {"psi_minus", core.psi_minus},
                         {"denominator", core.denominator},
                         {"meander_down", down},
                         {"meander_up", up},
                         {"kappa_laplace_b", core.kappa_b}}};
}

TransformValue pair_laplace_detailed(const DiffusionModel& model, const TwoBarrierQuery& q) {
  q.validate(model, true);
  const TwoBarrierCore core = two_barrier_core(model, q);
  const double tail = model.levy(q.b, Sign::plus).exp_tail(q.gamma, q.v);
  const double f_b = std::exp(-q.lambda * q.v) * core.w_ba_over_omega * tail * core.kappa_b / core.denominator;
  const double f_a = propagate_from_b(model, TwoBarrierQuery{q.a, q.b, q.a, q.u, q.v, q.gamma, q.lambda},
                                      core.psi_minus, f_b);
  const double f_x = propagate_from_b(model, q, core.psi_minus, f_b);
  return TransformValue{f_x,
                        {{"F_a", f_a},
                         {"F_b", f_b},
                         {"psi_plus", core.psi_plus},
                         {"psi_minus", core.psi_minus},
                         {"denominator", core.denominator},
                         {"kappa_laplace_b", core.kappa_b}}};
}

double pair_laplace(const DiffusionModel& model, const TwoBarrierQuery& q) {
  return pair_laplace_detailed(model, q).value;
}

double pair_laplace_at_zero_rates(const DiffusionModel& model, double a, double b, double x, double u, double v) {
  TwoBarrierQuery{a, b, x, u, v, 0.0, 0.0}.validate(model, false);
  // W/omega -> s(b) - s(a); Phi ratios -> hitting probabilities; tails lose the atom.
  const double d = model.scale(b) - model.scale(a);
  const double big_m = model.levy(b, Sign::plus).tail_finite(v);
  const double big_n = model.levy(a, Sign::minus).tail_finite(u);
  const double p_ba = model.hitting_probability(b, a);
  const double p_ab = model.hitting_probability(a, b);
  const double kappa_b = p_ba * ruin_probability(model, a, u);
  const double psi_plus = 1.0 / p_ba + d * big_m;
  const double psi_minus = 1.0 / p_ab + d * big_n;
  const double f_b = d * big_m * kappa_b / (psi_plus - 1.0 / psi_minus);
  if (x == b) return f_b;
  const double sx = model.scale(x);
  return ((model.scale(b) - sx) / (d * psi_minus) + (sx - model.scale(a)) / d) * f_b;
}

double one_barrier_pair_laplace(const DiffusionModel& model, double b, double u, double v, double gamma,
                                double lambda) {
  require_rate(gamma, "one_barrier_pair_laplace");
  require_rate(lambda, "one_barrier_pair_laplace");
  require_duration(u, "one_barrier_pair_laplace");
  require_duration(v, "one_barrier_pair_laplace");
  const double rho = gamma + lambda;
  const LevyMeasure up = model.levy(b, Sign::plus);
  const LevyMeasure down = model.levy(b, Sign::minus);
  const double denominator = up.exp_tail(rho, v) + down.exp_tail(rho, u) + inverse_green_diag(model, rho, b);
  return std::exp(-lambda * v) * up.exp_tail(gamma, v) / denominator * kappa_laplace(model, gamma, b, u, b);
}

double order_probability(const DiffusionModel& model, double a, double b, double x, double u, double v) {
  TwoBarrierQuery{a, b, x, u, v, 0.0, 0.0}.validate(model, false);
  const double d = model.scale(b) - model.scale(a);
  const double big_n = model.levy(a, Sign::minus).tail_finite(u);
  const double big_m = model.levy(b, Sign::plus).tail_finite(v);
  const double below = model.scale(x) - model.scale(a);
  if (model.recurrence() == Recurrence::recurrent) {
    return (1.0 + below * big_n) * big_m / (big_n + big_m + d * big_n * big_m);
  }
  const double hit_down = model.hitting_probability(b, a);
  const double hit_up = model.hitting_probability(a, b);
  const double ruin = ruin_probability(model, a, u);
  const double exit_weight = 1.0 / hit_up + d * big_n;
  const double from_b = d * big_m * hit_down * ruin / (1.0 / hit_down + d * big_m - 1.0 / exit_weight);
  return ((d - below) / exit_weight + below) * from_b / d;
}

double hitting_before_parisian_laplace(const DiffusionModel& model, double lambda, double a, double b, double u) {
  if (!(a < b)) throw DomainError("hitting_before_parisian_laplace: need a < b");
  return 1.0 / psi(model, lambda, b, a, Sign::minus, u);
}

}  // namespace parisian
