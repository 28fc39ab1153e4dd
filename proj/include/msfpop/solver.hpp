#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "msfpop/cost.hpp"
#include "msfpop/intervals.hpp"
#include "msfpop/penalty.hpp"

namespace msfpop {

// Univariate series with optional positive weights (unit weights if empty).
struct Series {
  std::vector<double> values;
  std::vector<double> weights;

  int n() const { return static_cast<int>(values.size()); }
  double weight(int i) const { return weights.empty() ? 1.0 : weights[i]; }
  void validate() const;
};

enum class SamplerMode { all, rand };

// How many future candidates each survivor is compared against per step.
struct SamplerSpec {
  SamplerMode mode = SamplerMode::rand;
  int k = 1;
  std::uint64_t seed = 0;

  static SamplerSpec all() { return SamplerSpec{SamplerMode::all, 0, 0}; }
  static SamplerSpec rand_k(int k, std::uint64_t seed) {
    return SamplerSpec{SamplerMode::rand, k, seed};
  }
};

// Changepoints are 1-based positions tau: segment j covers tau_{j-1}+1..tau_j.
struct Segmentation {
  std::vector<int> changepoints;
  std::vector<double> means;
  double objective = 0.0;

  int num_changes() const { return static_cast<int>(changepoints.size()); }
};

// Snapshot handed to the observer after each step t of the functional
// solver: prefix objectives F[0..t], backpointers cp[1..t], and the
// candidate set that survives into step t+1 with its living sets.
struct SolverState {
  int t = 0;
  const std::vector<double>& F;
  const std::vector<int>& cp;
  const std::vector<Candidate>& active;
  Interval domain;
};

using StepObserver = std::function<void(const SolverState&)>;

// Functional-pruning solver. Exact for any sampler choice; the sampler only
// affects how quickly losing candidates are discarded.
Segmentation msfpop_segment(const Series& series, const PenaltyModel& model,
                            const SamplerSpec& sampler,
                            const StepObserver* observer = nullptr);

// Inequality-pruning solver over the same objective (PELT; optimal
// partitioning when pruning is off).
Segmentation pelt_segment(const Series& series, const PenaltyModel& model,
                          const PruningBound& pruning);

// Future candidates s' > s drawn from active (ascending starts) plus the
// newborn t, deterministically keyed by (seed, t, s). Mode all returns every
// such s'; mode rand-k draws min(k, pool) of them uniformly without
// replacement, in ascending order.
std::vector<int> sample_future(const std::vector<int>& active, int s, int t,
                               const SamplerSpec& spec);
void sample_future(const std::vector<int>& active, int s, int t,
                   const SamplerSpec& spec, std::vector<int>& out);

// Follow backpointers cp[t] from n down to 0; returns 1-based changepoints.
std::vector<int> backtrack(const std::vector<int>& cp, int n);

// Weighted means of the segments cut at the given changepoints.
std::vector<double> segment_means(const Series& series, const std::vector<int>& cps);

// Penalized objective of a given segmentation, with per-segment optimal
// means or with the supplied means.
double evaluate_criterion(const Series& series, const std::vector<int>& cps,
                          const PenaltyModel& model);
double evaluate_criterion_at(const Series& series, const std::vector<int>& cps,
                             const std::vector<double>& means, const PenaltyModel& model);

}  // namespace msfpop
