#include "msfpop/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace msfpop {

namespace {

// g with the empty-segment convention g(0) = 0.
double g_len(const PenaltyModel& model, int len) {
  return len == 0 ? 0.0 : g_eval(model, len);
}

// a*b - c*d with one rounding via fma, so the discriminant keeps its sign
// even when the products nearly cancel.
double diff_of_products(double a, double b, double c, double d) {
  double cd = c * d;
  double err = std::fma(-c, d, cd);
  double dop = std::fma(a, b, -cd);
  return dop + err;
}

// Solutions of q(mu) <= 0 for a2 > 0: the closed interval between the real
// roots, or nothing when the quadratic stays positive.
std::optional<Interval> below_zero(const QuadraticPoly& q) {
  double disc = diff_of_products(q.a1, q.a1, 4.0 * q.a2, q.a0);
  if (disc < 0.0) return std::nullopt;
  double sq = std::sqrt(disc);
  double num = -0.5 * (q.a1 + std::copysign(sq, q.a1));
  double r1, r2;
  if (num != 0.0) {
    r1 = num / q.a2;
    r2 = q.a0 / num;
  } else {
    // a1 == 0 and disc == 0, hence a0 == 0: double root at the origin.
    r1 = r2 = 0.0;
  }
  if (r1 > r2) std::swap(r1, r2);
  return Interval{r1, r2};
}

}  // namespace

Candidate make_candidate(int s, double F_s, const PenaltyModel& model, Interval domain) {
  Candidate c;
  c.s = s;
  c.len = 0;
  c.quad = QuadraticPoly{0.0, 0.0, F_s + model.alpha};
  c.living = IntervalSet::full(domain);
  return c;
}

void add_point(Candidate& c, double y, double w, const PenaltyModel& model) {
  if (!(w > 0.0)) throw std::invalid_argument("add_point: weight must be > 0");
  c.quad.a2 += w;
  c.quad.a1 -= 2.0 * w * y;
  c.quad.a0 += w * y * y;
  if (model.kind == PenaltyKind::multiscale)
    c.quad.a0 += model.beta * (g_len(model, c.len) - g_eval(model, c.len + 1));
  ++c.len;
}

std::optional<PointMin> min_on(const QuadraticPoly& q, const IntervalSet& z) {
  if (!z.has_intervals()) return std::nullopt;
  if (!(q.a2 > 0.0)) throw std::invalid_argument("min_on: quadratic must be strictly convex");
  double v = q.vertex();
  std::optional<PointMin> best;
  for (const Interval& iv : z.intervals()) {
    double x = std::min(std::max(v, iv.lo), iv.hi);
    double val = q.eval(x);
    if (!best || val < best->value) best = PointMin{val, x};
  }
  return best;
}

std::optional<Interval> compare_region(const Candidate& older, const Candidate& newer,
                                       double correction, Interval domain) {
  if (!(older.s < newer.s))
    throw std::invalid_argument("compare_interval: first candidate must be the older one");
  QuadraticPoly d{older.quad.a2 - newer.quad.a2, older.quad.a1 - newer.quad.a1,
                  older.quad.a0 - newer.quad.a0 + correction};
  if (d.a2 == 0.0) {
    if (d.a1 != 0.0)
      throw std::invalid_argument("compare_interval: candidates are not synchronized");
    if (d.a0 <= 0.0) return domain;
    return std::nullopt;
  }
  if (d.a2 < 0.0)
    throw std::invalid_argument("compare_interval: candidates are not synchronized");
  auto iv = below_zero(d);
  if (!iv) return std::nullopt;
  Interval clipped{std::max(iv->lo, domain.lo), std::min(iv->hi, domain.hi)};
  if (!(clipped.lo <= clipped.hi)) return std::nullopt;
  return clipped;
}

IntervalSet compare_interval(const Candidate& older, const Candidate& newer,
                             double correction, Interval domain) {
  auto region = compare_region(older, newer, correction, domain);
  return region ? IntervalSet(*region) : IntervalSet{};
}

std::optional<Interval> limit_region(const Candidate& older, const Candidate& newer,
                                     const PenaltyModel& model, int t, Interval domain) {
  if (!(older.s < newer.s && newer.s <= t))
    throw std::invalid_argument("limit_interval: requires older.s < newer.s <= t");
  double correction =
      model.beta * (g_len(model, t - older.s) - g_len(model, t - newer.s));
  return compare_region(older, newer, correction, domain);
}

IntervalSet limit_interval(const Candidate& older, const Candidate& newer,
                           const PenaltyModel& model, int t, Interval domain) {
  auto region = limit_region(older, newer, model, t, domain);
  return region ? IntervalSet(*region) : IntervalSet{};
}

}  // namespace msfpop
