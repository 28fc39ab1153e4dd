#pragma once

#include <vector>

namespace msfpop {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Ordered, pairwise-disjoint closed intervals on the real line. Zero-width
// members are legal; "empty for pruning purposes" means total width <= 0,
// not "no intervals".
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(Interval iv);
  static IntervalSet full(Interval domain);

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool has_intervals() const { return !ivs_.empty(); }
  double total_width() const;
  bool effectively_empty() const { return total_width() <= 0.0; }
  bool contains(double x) const;

  // Appended intervals must stay sorted and disjoint.
  void append(Interval iv);
  void clear() { ivs_.clear(); }

  // In-place intersection with a single closed interval. Clamping each
  // member cannot split it, so the set never grows and nothing allocates.
  void clip_to(Interval iv);

  void swap(IntervalSet& other) { ivs_.swap(other.ivs_); }

 private:
  std::vector<Interval> ivs_;
};

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);

// Closure of the set difference a \ b: interior overlap splits intervals,
// bare shared endpoints are kept ({[0,5]} minus {[1,2]} is {[0,1],[2,5]}).
IntervalSet subtract(const IntervalSet& a, const IntervalSet& b);

// subtract(a, IntervalSet(cut)) written into out, which is cleared first
// but keeps its capacity; out must not alias a.
void subtract_into(const IntervalSet& a, Interval cut, IntervalSet& out);

enum class RestrictMode { intersect, subtract };

IntervalSet restrict_set(const IntervalSet& z, const IntervalSet& i, RestrictMode mode);

}  // namespace msfpop
