#pragma once

namespace msfpop {

enum class PenaltyKind { bic, multiscale };

// Per-segment penalty constants bound to a series of length n.
//
// multiscale: a segment of length l costs alpha - beta*log(l) with
//             alpha = gamma + beta*log(n). Favors well spread changepoints.
// bic:        constant alpha per segment (default 2*log(n)), no length term.
struct PenaltyModel {
  PenaltyKind kind = PenaltyKind::bic;
  double beta = 0.0;   // multiplier of the length term
  double gamma = 0.0;  // per-segment constant (multiscale only)
  double alpha = 0.0;  // total per-segment constant
  int n = 1;           // series length this model is bound to

  static PenaltyModel multiscale(int n, double beta = 2.25, double gamma = 9.0);
  static PenaltyModel bic(int n);  // alpha = 2*log(n)
  static PenaltyModel bic(int n, double alpha);

  // gamma = q*L and beta = 2*L
  double scale_L() const { return beta / 2.0; }
  double scale_q() const { return gamma / scale_L(); }
};

// g(len): log(len) for multiscale, 0 for bic. Requires len >= 1.
double g_eval(const PenaltyModel& model, int len);

// h(t,s,s2) = g(t-s2) - g(t-s) for s <= s2 < t. Non-decreasing in t,
// always <= 0, tends to 0 as t grows.
double h_eval(const PenaltyModel& model, int t, int s, int s2);

// alpha - beta*g(len); equals gamma + beta*log(n/len) for multiscale.
double segment_penalty(const PenaltyModel& model, int len);

// PELT pruning constant, concave fast path:
// K = beta*(2 g(1) - g(2)) = -beta*log(2) for g = log, 0 for bic.
double pelt_constant_K(const PenaltyModel& model);

// Same constant via the general bounded-g route, scanning g over 1..n:
// K = 2*beta*min g - beta*max g. Looser than the concave value.
double pelt_constant_K_general(const PenaltyModel& model);

// Length-adaptive constant K_len = beta*(g(len) + g(1) - g(len+1)).
// For g = log this is -beta*log(1 + 1/len): negative, non-decreasing in
// len, equal to -beta*log(2) at len = 1.
double pelt_adaptive_K(const PenaltyModel& model, int len);

enum class PruneMode { none, constant, adaptive };

// Candidate elimination rule for pelt_segment.
struct PruningBound {
  PruneMode mode = PruneMode::adaptive;
  double K = 0.0;  // constant mode only

  static PruningBound none();
  static PruningBound constant(const PenaltyModel& model);
  static PruningBound adaptive();

  // Bound applied to a candidate whose open segment has the given length.
  double bound_for_len(const PenaltyModel& model, int len) const;
};

}  // namespace msfpop
