#include "msfpop/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "msfpop/rng.hpp"

namespace msfpop {

void Series::validate() const {
  if (values.empty()) throw std::invalid_argument("series: needs at least one value");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("series: values must be finite");
  if (!weights.empty()) {
    if (weights.size() != values.size())
      throw std::invalid_argument("series: weights must match values in length");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("series: weights must be positive and finite");
  }
}

namespace {

void check_model(const Series& series, const PenaltyModel& model) {
  if (model.n != series.n())
    throw std::invalid_argument("solver: penalty model bound to a different length");
}

Interval data_domain(const Series& series) {
  auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
  double a = *lo, b = *hi;
  if (!(a < b)) {
    // Constant series: widen so living sets have measure. Any superset of
    // the data range is a valid domain.
    a -= 1.0;
    b += 1.0;
  }
  return {a, b};
}

void check_changepoints(const std::vector<int>& cps, int n) {
  int prev = 0;
  for (int tau : cps) {
    if (tau <= prev || tau >= n)
      throw std::invalid_argument("changepoints must be strictly increasing in 1..n-1");
    prev = tau;
  }
}

const Candidate& candidate_with_start(const std::vector<Candidate>& active,
                                      std::size_t after, int s2) {
  auto it = std::lower_bound(active.begin() + after + 1, active.end(), s2,
                             [](const Candidate& c, int s) { return c.s < s; });
  if (it == active.end() || it->s != s2)
    throw std::runtime_error("solver: sampled start is not active");
  return *it;
}

}  // namespace

Segmentation msfpop_segment(const Series& series, const PenaltyModel& model,
                            const SamplerSpec& sampler, const StepObserver* observer) {
  series.validate();
  check_model(series, model);
  if (sampler.mode == SamplerMode::rand && sampler.k < 1)
    throw std::invalid_argument("solver: rand sampler needs k >= 1");

  const int n = series.n();
  const Interval domain = data_domain(series);
  std::vector<double> F(n + 1, 0.0);
  std::vector<int> cp(n + 1, 0);
  F[0] = -model.alpha;

  std::vector<Candidate> active;
  active.push_back(make_candidate(0, F[0], model, domain));

  std::vector<int> starts, fut;
  std::vector<Candidate> next;
  IntervalSet scratch;
  for (int t = 1; t <= n; ++t) {
    const double y = series.values[t - 1];
    const double w = series.weight(t - 1);
    for (Candidate& c : active) add_point(c, y, w, model);

    double best = std::numeric_limits<double>::infinity();
    int best_s = -1;
    for (const Candidate& c : active) {
      auto m = min_on(c.quad, c.living);
      if (m && m->value < best) {
        best = m->value;
        best_s = c.s;  // strict improvement keeps the smallest start on ties
      }
    }
    if (best_s < 0) throw std::runtime_error("solver: candidate set collapsed");
    F[t] = best;
    cp[t] = best_s;

    // Birth: the newborn keeps only the part of the domain where no current
    // candidate dominates it at every future time.
    Candidate fresh = make_candidate(t, F[t], model, domain);
    for (const Candidate& c : active) {
      auto cut = limit_region(c, fresh, model, t, domain);
      if (!cut) continue;
      subtract_into(fresh.living, *cut, scratch);
      fresh.living.swap(scratch);
      if (fresh.living.effectively_empty()) break;  // subtraction only shrinks
    }

    starts.clear();
    for (const Candidate& c : active) starts.push_back(c.s);
    for (std::size_t i = 0; i < active.size(); ++i) {
      Candidate& c = active[i];
      if (c.living.effectively_empty()) continue;  // already dies at the end of this step
      sample_future(starts, c.s, t, sampler, fut);
      for (int s2 : fut) {
        std::optional<Interval> keep;
        if (s2 == t) {
          // The newborn's segment is still empty, which puts the raw
          // same-step comparison outside the monotone regime of the length
          // correction: its penalty advantage still grows once at the next
          // step. Shifting by beta*(g(len) - g(len+1)) keeps the cut valid
          // at every later time (it is the adaptive inequality bound).
          double slack = pelt_adaptive_K(model, c.len);
          keep = compare_region(c, fresh, slack, domain);
        } else {
          const Candidate& other = candidate_with_start(active, i, s2);
          keep = compare_region(c, other, 0.0, domain);
        }
        if (!keep) {
          c.living.clear();
          break;
        }
        c.living.clip_to(*keep);
        if (c.living.effectively_empty()) break;  // restriction only shrinks
      }
    }

    next.clear();
    for (Candidate& c : active)
      if (c.living.total_width() > 0.0) next.push_back(std::move(c));
    if (fresh.living.total_width() > 0.0) next.push_back(std::move(fresh));
    active.swap(next);

    if (observer) (*observer)(SolverState{t, F, cp, active, domain});
  }

  Segmentation out;
  out.changepoints = backtrack(cp, n);
  out.means = segment_means(series, out.changepoints);
  // F counts alpha once per change; the reported criterion counts it once
  // per segment.
  out.objective = F[n] + model.alpha;
  return out;
}

Segmentation pelt_segment(const Series& series, const PenaltyModel& model,
                          const PruningBound& pruning) {
  series.validate();
  check_model(series, model);
  const int n = series.n();

  std::vector<double> W(n + 1, 0.0), WY(n + 1, 0.0), WY2(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    double w = series.weight(i - 1), yv = series.values[i - 1];
    W[i] = W[i - 1] + w;
    WY[i] = WY[i - 1] + w * yv;
    WY2[i] = WY2[i - 1] + w * yv * yv;
  }

  // g over segment lengths 1..n+1, tabulated once; all-zero for bic so the
  // hot loop stays branch-free.
  std::vector<double> gtab(static_cast<std::size_t>(n) + 2, 0.0);
  if (model.kind == PenaltyKind::multiscale)
    for (int l = 1; l <= n + 1; ++l) gtab[l] = std::log(static_cast<double>(l));
  const double* gl = gtab.data();

  std::vector<double> F(n + 1);
  std::vector<int> cp(n + 1, 0);
  F[0] = -model.alpha;
  std::vector<int> cand{0};
  std::vector<double> base(1);  // F_s + SS - beta*g per candidate, reused when pruning

  const double beta = model.beta;
  for (int t = 1; t <= n; ++t) {
    base.resize(cand.size());
    double best = std::numeric_limits<double>::infinity();
    int best_s = -1;
    for (std::size_t idx = 0; idx < cand.size(); ++idx) {
      int s = cand[idx];
      double dw = W[t] - W[s];
      double dy = WY[t] - WY[s];
      double b = F[s] + (WY2[t] - WY2[s] - dy * dy / dw) - beta * gl[t - s];
      base[idx] = b;
      if (b + model.alpha < best) {
        best = b + model.alpha;
        best_s = s;
      }
    }
    F[t] = best;
    cp[t] = best_s;

    if (pruning.mode != PruneMode::none) {
      std::size_t keep = 0;
      if (pruning.mode == PruneMode::constant) {
        const double K = pruning.K;
        for (std::size_t idx = 0; idx < cand.size(); ++idx)
          if (base[idx] + K < F[t]) cand[keep++] = cand[idx];
      } else {
        for (std::size_t idx = 0; idx < cand.size(); ++idx) {
          int len = t - cand[idx];
          double K = beta * (gl[len] + gl[1] - gl[len + 1]);
          if (base[idx] + K < F[t]) cand[keep++] = cand[idx];
        }
      }
      cand.resize(keep);
    }
    cand.push_back(t);
  }

  Segmentation out;
  out.changepoints = backtrack(cp, n);
  out.means = segment_means(series, out.changepoints);
  out.objective = F[n] + model.alpha;
  return out;
}

std::vector<int> sample_future(const std::vector<int>& active, int s, int t,
                               const SamplerSpec& spec) {
  std::vector<int> out;
  sample_future(active, s, t, spec, out);
  return out;
}

void sample_future(const std::vector<int>& active, int s, int t,
                   const SamplerSpec& spec, std::vector<int>& out) {
  out.clear();
  if (s >= t) throw std::invalid_argument("sample_future: requires s < t");
  auto it = std::upper_bound(active.begin(), active.end(), s);
  const int tail = static_cast<int>(active.end() - it);
  const int pool = tail + 1;  // strictly later actives plus the newborn t
  if (spec.mode == SamplerMode::all) {
    out.reserve(pool);
    for (auto p = it; p != active.end(); ++p) out.push_back(*p);
    out.push_back(t);
    return;
  }
  if (spec.k < 1) throw std::invalid_argument("sample_future: rand sampler needs k >= 1");
  CounterRng rng(spec.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(s));
  if (spec.k == 1) {
    int j = rng.next_below(pool);
    out.push_back(j == tail ? t : it[j]);
    return;
  }
  // uniform draw of min(k, pool) futures without replacement (selection
  // sampling), emitted in ascending order
  int need = std::min(spec.k, pool);
  for (int i = 0; i < pool && need > 0; ++i) {
    if (rng.next_below(pool - i) < need) {
      out.push_back(i == tail ? t : it[i]);
      --need;
    }
  }
}

std::vector<int> backtrack(const std::vector<int>& cp, int n) {
  if (n < 0 || cp.size() < static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("backtrack: need cp[0..n]");
  std::vector<int> out;
  int t = n;
  while (t > 0) {
    int s = cp[t];
    if (s < 0 || s >= t) throw std::runtime_error("backtrack: corrupted backpointers");
    if (s > 0) out.push_back(s);
    t = s;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<double> segment_means(const Series& series, const std::vector<int>& cps) {
  const int n = series.n();
  check_changepoints(cps, n);
  std::vector<double> means;
  means.reserve(cps.size() + 1);
  int start = 0;
  for (std::size_t j = 0; j <= cps.size(); ++j) {
    int end = j < cps.size() ? cps[j] : n;
    double sw = 0.0, swy = 0.0;
    for (int i = start; i < end; ++i) {
      double w = series.weight(i);
      sw += w;
      swy += w * series.values[i];
    }
    means.push_back(swy / sw);
    start = end;
  }
  return means;
}

double evaluate_criterion(const Series& series, const std::vector<int>& cps,
                          const PenaltyModel& model) {
  return evaluate_criterion_at(series, cps, segment_means(series, cps), model);
}

double evaluate_criterion_at(const Series& series, const std::vector<int>& cps,
                             const std::vector<double>& means, const PenaltyModel& model) {
  const int n = series.n();
  series.validate();
  check_model(series, model);
  check_changepoints(cps, n);
  if (means.size() != cps.size() + 1)
    throw std::invalid_argument("evaluate_criterion_at: need one mean per segment");
  double total = 0.0;
  int start = 0;
  for (std::size_t j = 0; j < means.size(); ++j) {
    int end = j < cps.size() ? cps[j] : n;
    double sse = 0.0;
    for (int i = start; i < end; ++i) {
      double d = series.values[i] - means[j];
      sse += series.weight(i) * d * d;
    }
    total += sse + segment_penalty(model, end - start);
    start = end;
  }
  return total;
}

}  // namespace msfpop
