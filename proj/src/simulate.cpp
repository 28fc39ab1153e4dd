#include "msfpop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "msfpop/rng.hpp"

namespace msfpop {

namespace {

void check_scenario_n(int n, int min_n) {
  if (n < min_n) throw std::invalid_argument("scenario: series too short");
}

std::vector<double> expand_signal(const std::vector<int>& tau,
                                  const std::vector<double>& means, int n) {
  std::vector<double> f(n);
  int start = 0;
  for (std::size_t j = 0; j < means.size(); ++j) {
    int end = j < tau.size() ? tau[j] : n;
    for (int i = start; i < end; ++i) f[i] = means[j];
    start = end;
  }
  return f;
}

double median_inplace(std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("median of empty vector");
  std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  double hi = v[m];
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + m);
  return 0.5 * (lo + hi);
}

std::vector<int> segment_labels(const std::vector<int>& cps, int n) {
  std::vector<int> lab(n);
  int seg = 0;
  std::size_t next = 0;
  for (int i = 0; i < n; ++i) {
    while (next < cps.size() && i >= cps[next]) {
      ++seg;
      ++next;
    }
    lab[i] = seg;
  }
  return lab;
}

}  // namespace

ScenarioSpec ScenarioSpec::null_signal_spec(int n, std::uint64_t seed) {
  check_scenario_n(n, 1);
  ScenarioSpec s;
  s.kind = ScenarioKind::null_signal;
  s.n = n;
  s.seed = seed;
  return s;
}

ScenarioSpec ScenarioSpec::alternating_spec(int n, int d_true, std::uint64_t seed) {
  if (d_true < 0) throw std::invalid_argument("scenario: d_true must be >= 0");
  check_scenario_n(n, d_true + 1);
  ScenarioSpec s;
  s.kind = ScenarioKind::alternating;
  s.n = n;
  s.d_true = d_true;
  s.seed = seed;
  return s;
}

ScenarioSpec ScenarioSpec::hat_spec(int n, int tau1, std::uint64_t seed) {
  check_scenario_n(n, 3);
  int tau2 = 2 * n / 3;
  if (!(tau1 >= 1 && tau1 < tau2))
    throw std::invalid_argument("scenario: hat needs 1 <= tau1 < floor(2n/3)");
  ScenarioSpec s;
  s.kind = ScenarioKind::hat;
  s.n = n;
  s.tau = {tau1};
  s.seed = seed;
  return s;
}

ScenarioSpec ScenarioSpec::step_spec(int n, int tau1, std::uint64_t seed) {
  check_scenario_n(n, 2);
  if (!(tau1 >= 1 && tau1 <= n - 1))
    throw std::invalid_argument("scenario: step needs 1 <= tau1 <= n-1");
  ScenarioSpec s;
  s.kind = ScenarioKind::step;
  s.n = n;
  s.tau = {tau1};
  s.seed = seed;
  return s;
}

ScenarioSpec ScenarioSpec::custom_spec(int n, std::vector<int> tau,
                                       std::vector<double> means, std::uint64_t seed) {
  check_scenario_n(n, 1);
  int prev = 0;
  for (int t : tau) {
    if (t <= prev || t >= n)
      throw std::invalid_argument("scenario: changepoints must be strictly increasing in 1..n-1");
    prev = t;
  }
  if (means.size() != tau.size() + 1)
    throw std::invalid_argument("scenario: need one mean per segment");
  ScenarioSpec s;
  s.kind = ScenarioKind::custom;
  s.n = n;
  s.tau = std::move(tau);
  s.means = std::move(means);
  s.seed = seed;
  return s;
}

const char* scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::null_signal: return "null";
    case ScenarioKind::alternating: return "alternating";
    case ScenarioKind::hat: return "hat";
    case ScenarioKind::step: return "step";
    case ScenarioKind::custom: return "custom";
  }
  return "?";
}

GeneratedSeries generate(const ScenarioSpec& spec) {
  if (!(spec.sigma2 >= 0.0)) throw std::invalid_argument("scenario: sigma2 must be >= 0");
  std::vector<int> tau;
  std::vector<double> means;
  switch (spec.kind) {
    case ScenarioKind::null_signal:
      means = {0.0};
      break;
    case ScenarioKind::alternating: {
      for (int j = 1; j <= spec.d_true; ++j)
        tau.push_back(static_cast<int>(static_cast<long long>(j) * spec.n / (spec.d_true + 1)));
      for (std::size_t j = 0; j < tau.size(); ++j)
        if (j > 0 && tau[j] <= tau[j - 1])
          throw std::invalid_argument("scenario: alternating changepoints collide");
      if (!tau.empty() && (tau.front() < 1 || tau.back() > spec.n - 1))
        throw std::invalid_argument("scenario: alternating changepoints out of range");
      for (int j = 0; j <= spec.d_true; ++j) means.push_back(j % 2 == 0 ? 0.0 : 1.0);
      break;
    }
    case ScenarioKind::hat:
      tau = {spec.tau[0], 2 * spec.n / 3};
      means = {0.0, std::sqrt(100.0 / spec.n), 0.0};
      break;
    case ScenarioKind::step:
      tau = {spec.tau[0]};
      means = {0.0, std::sqrt(70.0 / spec.n)};
      break;
    case ScenarioKind::custom:
      tau = spec.tau;
      means = spec.means;
      break;
  }

  std::vector<double> f = expand_signal(tau, means, spec.n);
  CounterRng rng(spec.seed);
  double sd = std::sqrt(spec.sigma2);
  GeneratedSeries out;
  out.series.values.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) out.series.values[i] = f[i] + sd * rng.next_normal();
  out.truth.changepoints = std::move(tau);
  out.truth.means = std::move(means);
  out.truth.objective = std::numeric_limits<double>::quiet_NaN();
  return out;
}

SigmaEstimate estimate_sigma_mad(const Series& series) {
  if (series.n() < 2)
    throw std::invalid_argument("sigma estimate: needs at least two observations");
  std::vector<double> d(series.values.size() - 1);
  for (std::size_t i = 0; i + 1 < series.values.size(); ++i)
    d[i] = series.values[i + 1] - series.values[i];
  std::vector<double> dev = d;
  double med = median_inplace(dev);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(d[i] - med);
  double mad = median_inplace(d);
  SigmaEstimate out;
  out.sigma = 1.4826 * mad / std::sqrt(2.0);
  out.degenerate = !(out.sigma > 0.0);
  return out;
}

double adjusted_rand_index_labels(const std::vector<int>& la_raw,
                                  const std::vector<int>& lb_raw) {
  if (la_raw.size() != lb_raw.size() || la_raw.empty())
    throw std::invalid_argument("ari: labelings must be nonempty and of equal length");
  auto densify = [](const std::vector<int>& raw, int& k) {
    std::vector<int> uniq(raw);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    k = static_cast<int>(uniq.size());
    std::vector<int> dense(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      dense[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), raw[i]) -
                                  uniq.begin());
    return dense;
  };
  int ka = 0, kb = 0;
  std::vector<int> la = densify(la_raw, ka);
  std::vector<int> lb = densify(lb_raw, kb);
  int n = static_cast<int>(la.size());
  std::vector<std::vector<long long>> cont(ka, std::vector<long long>(kb, 0));
  for (int i = 0; i < n; ++i) ++cont[la[i]][lb[i]];

  auto choose2 = [](long long x) { return x * (x - 1) / 2; };
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (int a = 0; a < ka; ++a) {
    long long row = 0;
    for (int b = 0; b < kb; ++b) {
      row += cont[a][b];
      sum_ij += choose2(cont[a][b]);
    }
    sum_a += choose2(row);
  }
  for (int b = 0; b < kb; ++b) {
    long long col = 0;
    for (int a = 0; a < ka; ++a) col += cont[a][b];
    sum_b += choose2(col);
  }
  double total = choose2(n);
  if (total == 0.0) return 1.0;  // single observation: partitions coincide
  double expected = sum_a * sum_b / total;
  double max_index = 0.5 * (sum_a + sum_b);
  double denom = max_index - expected;
  if (denom == 0.0) return 1.0;  // both partitions trivial and identical
  return (sum_ij - expected) / denom;
}

double adjusted_rand_index(const std::vector<int>& cps_a, const std::vector<int>& cps_b,
                           int n) {
  return adjusted_rand_index_labels(segment_labels(cps_a, n), segment_labels(cps_b, n));
}

ReplicateMetrics compute_metrics(const Segmentation& truth, const Segmentation& estimate,
                                 int n) {
  ReplicateMetrics m;
  m.d_true = truth.num_changes();
  m.d_hat = estimate.num_changes();
  m.delta_d = std::abs(m.d_hat - m.d_true);
  std::vector<double> f = expand_signal(truth.changepoints, truth.means, n);
  std::vector<double> fh = expand_signal(estimate.changepoints, estimate.means, n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = fh[i] - f[i];
    acc += d * d;
  }
  m.mse = acc / n;
  m.ari = adjusted_rand_index(truth.changepoints, estimate.changepoints, n);
  return m;
}

}  // namespace msfpop
