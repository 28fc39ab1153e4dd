#include "msfpop/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace msfpop {

static void check_n(int n) {
  if (n < 1) throw std::invalid_argument("penalty: series length must be >= 1");
}

PenaltyModel PenaltyModel::multiscale(int n, double beta, double gamma) {
  check_n(n);
  if (!(beta > 0.0)) throw std::invalid_argument("penalty: beta must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("penalty: gamma must be > 0");
  PenaltyModel m;
  m.kind = PenaltyKind::multiscale;
  m.beta = beta;
  m.gamma = gamma;
  m.alpha = gamma + beta * std::log(static_cast<double>(n));
  m.n = n;
  return m;
}

PenaltyModel PenaltyModel::bic(int n) {
  return bic(n, 2.0 * std::log(static_cast<double>(n)));
}

PenaltyModel PenaltyModel::bic(int n, double alpha) {
  check_n(n);
  if (!std::isfinite(alpha)) throw std::invalid_argument("penalty: alpha must be finite");
  PenaltyModel m;
  m.kind = PenaltyKind::bic;
  m.alpha = alpha;
  m.n = n;
  return m;
}

double g_eval(const PenaltyModel& model, int len) {
  if (len < 1) throw std::invalid_argument("g_eval: segment length must be >= 1");
  if (model.kind == PenaltyKind::multiscale) return std::log(static_cast<double>(len));
  return 0.0;
}

double h_eval(const PenaltyModel& model, int t, int s, int s2) {
  if (!(s <= s2 && s2 < t)) throw std::invalid_argument("h_eval: requires s <= s2 < t");
  return g_eval(model, t - s2) - g_eval(model, t - s);
}

double segment_penalty(const PenaltyModel& model, int len) {
  if (len < 1 || len > model.n)
    throw std::invalid_argument("segment_penalty: length out of range");
  return model.alpha - model.beta * g_eval(model, len);
}

double pelt_constant_K(const PenaltyModel& model) {
  if (model.kind == PenaltyKind::multiscale) return -model.beta * std::log(2.0);
  return 0.0;
}

double pelt_constant_K_general(const PenaltyModel& model) {
  double gmin = g_eval(model, 1);
  double gmax = gmin;
  for (int len = 2; len <= model.n; ++len) {
    double g = g_eval(model, len);
    gmin = std::min(gmin, g);
    gmax = std::max(gmax, g);
  }
  return 2.0 * model.beta * gmin - model.beta * gmax;
}

double pelt_adaptive_K(const PenaltyModel& model, int len) {
  if (len < 1) throw std::invalid_argument("pelt_adaptive_K: length must be >= 1");
  return model.beta * (g_eval(model, len) + g_eval(model, 1) - g_eval(model, len + 1));
}

PruningBound PruningBound::none() { return PruningBound{PruneMode::none, 0.0}; }

PruningBound PruningBound::constant(const PenaltyModel& model) {
  return PruningBound{PruneMode::constant, pelt_constant_K(model)};
}

PruningBound PruningBound::adaptive() { return PruningBound{PruneMode::adaptive, 0.0}; }

double PruningBound::bound_for_len(const PenaltyModel& model, int len) const {
  switch (mode) {
    case PruneMode::constant: return K;
    case PruneMode::adaptive: return pelt_adaptive_K(model, len);
    case PruneMode::none: break;
  }
  throw std::logic_error("bound_for_len: no bound in mode none");
}

}  // namespace msfpop
