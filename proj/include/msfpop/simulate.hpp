#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msfpop/solver.hpp"

namespace msfpop {

enum class ScenarioKind { null_signal, alternating, hat, step, custom };

// Piecewise-constant signal plus iid N(0, sigma2) noise.
//
//   null:        flat zero signal.
//   alternating: d_true changes at tau_j = floor(j*n/(d_true+1)), means
//                alternating 0,1,0,...
//   hat:         changes at (tau1, floor(2n/3)), means 0, sqrt(100/n), 0.
//   step:        one change at tau1, jump sqrt(70/n).
//   custom:      explicit changepoints and means.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::null_signal;
  int n = 0;
  int d_true = 0;            // alternating
  std::vector<int> tau;      // hat/step: {tau1}; custom: all changepoints
  std::vector<double> means; // custom
  double sigma2 = 1.0;
  std::uint64_t seed = 0;

  static ScenarioSpec null_signal_spec(int n, std::uint64_t seed);
  static ScenarioSpec alternating_spec(int n, int d_true, std::uint64_t seed);
  static ScenarioSpec hat_spec(int n, int tau1, std::uint64_t seed);
  static ScenarioSpec step_spec(int n, int tau1, std::uint64_t seed);
  static ScenarioSpec custom_spec(int n, std::vector<int> tau, std::vector<double> means,
                                  std::uint64_t seed);
};

const char* scenario_name(ScenarioKind kind);

struct GeneratedSeries {
  Series series;
  Segmentation truth;  // objective left NaN: it is not defined by the signal
};

GeneratedSeries generate(const ScenarioSpec& spec);

// Noise scale from the lag-1 differences: 1.4826 * mad / sqrt(2), where mad
// is the median of |diff - median(diff)|. Degenerate (zero spread) estimates
// are flagged; callers must not standardize by them.
struct SigmaEstimate {
  double sigma = 0.0;
  bool degenerate = false;
};

SigmaEstimate estimate_sigma_mad(const Series& series);

// Adjusted Rand index between two labelings of the same positions (labels
// are arbitrary ints). Identical trivial partitions score 1.
double adjusted_rand_index_labels(const std::vector<int>& la, const std::vector<int>& lb);

// Same, for segmentations of 1..n given by their changepoints (each
// position labeled by its segment index).
double adjusted_rand_index(const std::vector<int>& cps_a, const std::vector<int>& cps_b,
                           int n);

struct ReplicateMetrics {
  int d_true = 0;
  int d_hat = 0;
  int delta_d = 0;     // |d_hat - d_true|
  double mse = 0.0;    // mean squared error of the fitted signal
  double ari = 0.0;
};

ReplicateMetrics compute_metrics(const Segmentation& truth, const Segmentation& estimate,
                                 int n);

}  // namespace msfpop
