#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msfpop/simulate.hpp"
#include "msfpop/solver.hpp"

namespace msfpop {

enum class SolverFamily { functional, inequality };

// A named solver configuration runnable against any generated series.
//
// Registry names: msfpop (= msfpop-rand1), msfpop-rand2, msfpop-rand3,
// msfpop-all, fpop (bic, rand1), fpop-all, mspelt (adaptive bound),
// mspelt-constant, op (no pruning), pelt (bic), op-bic.
struct MethodSpec {
  std::string name;
  SolverFamily family = SolverFamily::functional;
  PenaltyKind penalty = PenaltyKind::multiscale;
  SamplerSpec sampler;       // functional family
  PruneMode prune = PruneMode::adaptive;  // inequality family
  double beta = 2.25;
  double gamma = 9.0;
  std::optional<double> bic_alpha;  // default 2*log(n) when unset

  PenaltyModel bind(int n) const;
  Segmentation run(const Series& series, std::uint64_t sampler_seed) const;
};

MethodSpec parse_method(const std::string& name, double beta = 2.25, double gamma = 9.0);

struct ReplicateOutcome {
  ReplicateMetrics metrics;
  double runtime_s = 0.0;
};

struct MethodResult {
  MethodSpec method;
  std::vector<ReplicateOutcome> reps;
  double r_gt0 = 0.0;        // fraction with d_hat >= 1
  double r_2 = 0.0;          // fraction with d_hat == 2
  double mean_delta_d = 0.0;
  double mean_mse = 0.0;
  double mean_ari = 0.0;
  double mean_runtime_s = 0.0;
};

struct MetricsReport {
  int replicates = 0;
  std::vector<MethodResult> methods;
};

// Run `replicates` series of the scenario (seeds derived from master_seed
// and scenario_index) through every method. Replicates are distributed
// over `threads` workers; results are identical for any thread count.
MetricsReport run_study(const ScenarioSpec& scenario, const std::vector<MethodSpec>& methods,
                        int replicates, std::uint64_t master_seed,
                        std::uint64_t scenario_index, int threads);

// log2(R_2[a] / R_2[b]); absent unless both rates are positive.
std::optional<double> delta_r2(const MetricsReport& report, std::size_t a, std::size_t b);

enum class AeCriterion { delta_d, mse, ari };

// "At least as extreme" percentage: per replicate, every method tied with
// the best value of the criterion (|delta_D| low, MSE low, ARI high) gets a
// tally; reported per method as a percentage of replicates.
std::vector<double> ae_percent(const MetricsReport& report, AeCriterion criterion);

// Deterministic replicate seed for scenario scenario_index, replicate r.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t scenario_index,
                             std::uint64_t r);

// Run fn(0..count-1) on up to `threads` workers (serial when threads <= 1).
// The first exception thrown by any worker is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// count integers log-spaced between lo and hi inclusive, deduplicated.
std::vector<int> log_spaced_integers(int lo, int hi, int count);

// Grid of hat-scenario tau1 values: `count` log-spaced points between lo
// and floor(n/3), optionally mirrored about floor(n/3) (tau1 -> 2n/3 - tau1).
std::vector<int> hat_tau1_grid(int n, int lo, int count, bool mirror);

}  // namespace msfpop
