#pragma once

#include <optional>

#include "msfpop/intervals.hpp"
#include "msfpop/penalty.hpp"

namespace msfpop {

// Quadratic a2*mu^2 + a1*mu + a0.
struct QuadraticPoly {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  double eval(double mu) const { return (a2 * mu + a1) * mu + a0; }
  double vertex() const { return -a1 / (2.0 * a2); }
};

// Cost of extending the last segment from position s+1 through the current
// time with constant mean mu, as a quadratic in mu, plus the living set of
// mu values where this candidate is still optimal somewhere.
struct Candidate {
  int s = 0;      // last changepoint before the open segment (0-based boundary)
  int len = 0;    // observations absorbed so far
  QuadraticPoly quad;
  IntervalSet living;
};

// Fresh candidate born at time t with best-so-far cost F_t: constant
// functional F_t + alpha over the whole domain.
Candidate make_candidate(int s, double F_s, const PenaltyModel& model, Interval domain);

// Absorb one weighted observation into the open segment. Keeps the
// quadratic equal to the exact segment cost plus the per-segment penalty
// alpha - beta*g(len).
void add_point(Candidate& c, double y, double w, const PenaltyModel& model);

struct PointMin {
  double value = 0.0;
  double argmin = 0.0;
};

// Minimum of the quadratic over an interval set; leftmost argmin on ties.
// Returns nothing for a set with no intervals. Requires a2 > 0.
std::optional<PointMin> min_on(const QuadraticPoly& q, const IntervalSet& z);

// {mu : older(mu) + correction <= newer(mu)} clipped to the domain, where
// older.s < newer.s. The difference has nonnegative leading coefficient for
// synchronized candidates; a negative one means the inputs are out of order.
IntervalSet compare_interval(const Candidate& older, const Candidate& newer,
                             double correction, Interval domain);

// The same region as compare_interval, but as a single clipped interval
// (the solution set is always one interval, the whole domain, or empty) so
// the solver loop can restrict living sets without allocating.
std::optional<Interval> compare_region(const Candidate& older, const Candidate& newer,
                                       double correction, Interval domain);

// compare_interval with the time-invariant correction
// beta*(g(t - older.s) - g(t - newer.s)), valid for every future time.
// By convention g is taken as 0 for a segment that has no observations yet.
IntervalSet limit_interval(const Candidate& older, const Candidate& newer,
                           const PenaltyModel& model, int t, Interval domain);

// Allocation-free form of limit_interval, as for compare_region.
std::optional<Interval> limit_region(const Candidate& older, const Candidate& newer,
                                     const PenaltyModel& model, int t, Interval domain);

}  // namespace msfpop
