#include "msfpop/intervals.hpp"

#include <algorithm>
#include <stdexcept>

namespace msfpop {

IntervalSet::IntervalSet(Interval iv) { append(iv); }

IntervalSet IntervalSet::full(Interval domain) { return IntervalSet(domain); }

double IntervalSet::total_width() const {
  double w = 0.0;
  for (const Interval& iv : ivs_) w += iv.width();
  return w;
}

bool IntervalSet::contains(double x) const {
  for (const Interval& iv : ivs_) {
    if (x < iv.lo) return false;
    if (x <= iv.hi) return true;
  }
  return false;
}

void IntervalSet::append(Interval iv) {
  if (!(iv.lo <= iv.hi)) throw std::invalid_argument("IntervalSet: inverted interval");
  if (!ivs_.empty() && !(ivs_.back().hi < iv.lo))
    throw std::invalid_argument("IntervalSet: intervals must be sorted and disjoint");
  ivs_.push_back(iv);
}

void IntervalSet::clip_to(Interval iv) {
  if (!(iv.lo <= iv.hi)) throw std::invalid_argument("IntervalSet: inverted interval");
  std::size_t keep = 0;
  for (const Interval& a : ivs_) {
    double lo = std::max(a.lo, iv.lo);
    double hi = std::min(a.hi, iv.hi);
    if (lo <= hi) ivs_[keep++] = {lo, hi};
  }
  ivs_.resize(keep);
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  const auto& A = a.intervals();
  const auto& B = b.intervals();
  std::size_t i = 0, j = 0;
  while (i < A.size() && j < B.size()) {
    double lo = std::max(A[i].lo, B[j].lo);
    double hi = std::min(A[i].hi, B[j].hi);
    if (lo <= hi) out.append({lo, hi});
    if (A[i].hi < B[j].hi)
      ++i;
    else
      ++j;
  }
  return out;
}

IntervalSet subtract(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  const auto& A = a.intervals();
  const auto& B = b.intervals();
  std::size_t j0 = 0;
  for (const Interval& z : A) {
    while (j0 < B.size() && B[j0].hi < z.lo) ++j0;
    double cur = z.lo;
    bool swallowed = false;
    for (std::size_t j = j0; j < B.size() && B[j].lo < z.hi; ++j) {
      const Interval& cut = B[j];
      if (cut.width() <= 0.0) continue;  // removing a point leaves the closure unchanged
      if (cut.hi <= cur) continue;
      if (cut.lo > cur) out.append({cur, cut.lo});
      cur = cut.hi;
      if (cur >= z.hi) {
        swallowed = cur > z.hi;
        break;
      }
    }
    if (cur < z.hi)
      out.append({cur, z.hi});
    else if (cur == z.hi && !swallowed && z.width() <= 0.0)
      out.append(z);  // point minuend untouched only when nothing covered it
  }
  return out;
}

void subtract_into(const IntervalSet& a, Interval cut, IntervalSet& out) {
  if (!(cut.lo <= cut.hi)) throw std::invalid_argument("IntervalSet: inverted interval");
  out.clear();
  for (const Interval& z : a.intervals()) {
    double cur = z.lo;
    bool swallowed = false;
    if (cut.width() > 0.0 && cut.lo < z.hi && cut.hi > cur) {
      if (cut.lo > cur) out.append({cur, cut.lo});
      cur = cut.hi;
      swallowed = cur > z.hi;
    }
    if (cur < z.hi)
      out.append({cur, z.hi});
    else if (cur == z.hi && !swallowed && z.width() <= 0.0)
      out.append(z);  // point minuend untouched only when nothing covered it
  }
}

IntervalSet restrict_set(const IntervalSet& z, const IntervalSet& i, RestrictMode mode) {
  return mode == RestrictMode::intersect ? intersect(z, i) : subtract(z, i);
}

}  // namespace msfpop
