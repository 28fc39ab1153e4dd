#include "msfpop/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "msfpop/rng.hpp"

namespace msfpop {

PenaltyModel MethodSpec::bind(int n) const {
  if (penalty == PenaltyKind::multiscale) return PenaltyModel::multiscale(n, beta, gamma);
  return bic_alpha ? PenaltyModel::bic(n, *bic_alpha) : PenaltyModel::bic(n);
}

Segmentation MethodSpec::run(const Series& series, std::uint64_t sampler_seed) const {
  PenaltyModel model = bind(series.n());
  if (family == SolverFamily::functional) {
    SamplerSpec sp = sampler;
    sp.seed = sampler_seed;
    return msfpop_segment(series, model, sp);
  }
  PruningBound bound = PruningBound::none();
  if (prune == PruneMode::constant)
    bound = PruningBound::constant(model);
  else if (prune == PruneMode::adaptive)
    bound = PruningBound::adaptive();
  return pelt_segment(series, model, bound);
}

MethodSpec parse_method(const std::string& name, double beta, double gamma) {
  MethodSpec m;
  m.name = name;
  m.beta = beta;
  m.gamma = gamma;
  if (name == "msfpop" || name == "msfpop-rand1") {
    m.family = SolverFamily::functional;
    m.penalty = PenaltyKind::multiscale;
    m.sampler = SamplerSpec::rand_k(1, 0);
  } else if (name == "msfpop-rand2" || name == "msfpop-rand3") {
    m.family = SolverFamily::functional;
    m.penalty = PenaltyKind::multiscale;
    m.sampler = SamplerSpec::rand_k(name.back() - '0', 0);
  } else if (name == "msfpop-all") {
    m.family = SolverFamily::functional;
    m.penalty = PenaltyKind::multiscale;
    m.sampler = SamplerSpec::all();
  } else if (name == "fpop") {
    m.family = SolverFamily::functional;
    m.penalty = PenaltyKind::bic;
    m.sampler = SamplerSpec::rand_k(1, 0);
  } else if (name == "fpop-all") {
    m.family = SolverFamily::functional;
    m.penalty = PenaltyKind::bic;
    m.sampler = SamplerSpec::all();
  } else if (name == "mspelt") {
    m.family = SolverFamily::inequality;
    m.penalty = PenaltyKind::multiscale;
    m.prune = PruneMode::adaptive;
  } else if (name == "mspelt-constant") {
    m.family = SolverFamily::inequality;
    m.penalty = PenaltyKind::multiscale;
    m.prune = PruneMode::constant;
  } else if (name == "op") {
    m.family = SolverFamily::inequality;
    m.penalty = PenaltyKind::multiscale;
    m.prune = PruneMode::none;
  } else if (name == "pelt") {
    m.family = SolverFamily::inequality;
    m.penalty = PenaltyKind::bic;
    m.prune = PruneMode::constant;
  } else if (name == "op-bic") {
    m.family = SolverFamily::inequality;
    m.penalty = PenaltyKind::bic;
    m.prune = PruneMode::none;
  } else {
    throw std::invalid_argument(
        "unknown method '" + name +
        "' (expected msfpop[-rand1|-rand2|-rand3|-all], fpop[-all], mspelt[-constant], "
        "op, op-bic or pelt)");
  }
  return m;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t scenario_index,
                             std::uint64_t r) {
  return derive_seed(master_seed, scenario_index, r);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = std::min(threads, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

MetricsReport run_study(const ScenarioSpec& scenario, const std::vector<MethodSpec>& methods,
                        int replicates, std::uint64_t master_seed,
                        std::uint64_t scenario_index, int threads) {
  if (replicates < 1) throw std::invalid_argument("study: replicates must be >= 1");
  if (methods.empty()) throw std::invalid_argument("study: needs at least one method");

  MetricsReport report;
  report.replicates = replicates;
  report.methods.resize(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    report.methods[m].method = methods[m];
    report.methods[m].reps.resize(replicates);
  }

  parallel_for(replicates, threads, [&](int r) {
    ScenarioSpec spec = scenario;
    spec.seed = replicate_seed(master_seed, scenario_index, static_cast<std::uint64_t>(r));
    GeneratedSeries gen = generate(spec);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::uint64_t sseed = derive_seed(spec.seed, static_cast<std::uint64_t>(m) + 1);
      auto t0 = std::chrono::steady_clock::now();
      Segmentation est = methods[m].run(gen.series, sseed);
      auto t1 = std::chrono::steady_clock::now();
      ReplicateOutcome& slot = report.methods[m].reps[r];
      slot.metrics = compute_metrics(gen.truth, est, spec.n);
      slot.runtime_s = std::chrono::duration<double>(t1 - t0).count();
    }
  });

  for (MethodResult& mr : report.methods) {
    double gt0 = 0, two = 0, dd = 0, mse = 0, ari = 0, rt = 0;
    for (const ReplicateOutcome& o : mr.reps) {
      if (o.metrics.d_hat >= 1) gt0 += 1;
      if (o.metrics.d_hat == 2) two += 1;
      dd += o.metrics.delta_d;
      mse += o.metrics.mse;
      ari += o.metrics.ari;
      rt += o.runtime_s;
    }
    double nr = static_cast<double>(replicates);
    mr.r_gt0 = gt0 / nr;
    mr.r_2 = two / nr;
    mr.mean_delta_d = dd / nr;
    mr.mean_mse = mse / nr;
    mr.mean_ari = ari / nr;
    mr.mean_runtime_s = rt / nr;
  }
  return report;
}

std::optional<double> delta_r2(const MetricsReport& report, std::size_t a, std::size_t b) {
  if (a >= report.methods.size() || b >= report.methods.size())
    throw std::invalid_argument("delta_r2: method index out of range");
  double ra = report.methods[a].r_2, rb = report.methods[b].r_2;
  if (!(ra > 0.0) || !(rb > 0.0)) return std::nullopt;
  return std::log2(ra / rb);
}

std::vector<double> ae_percent(const MetricsReport& report, AeCriterion criterion) {
  const std::size_t nm = report.methods.size();
  std::vector<double> tally(nm, 0.0);
  for (int r = 0; r < report.replicates; ++r) {
    double best = 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
      const ReplicateMetrics& met = report.methods[m].reps[r].metrics;
      double v = criterion == AeCriterion::delta_d ? std::abs(met.delta_d)
                 : criterion == AeCriterion::mse   ? met.mse
                                                   : -met.ari;
      if (m == 0 || v < best) best = v;
    }
    for (std::size_t m = 0; m < nm; ++m) {
      const ReplicateMetrics& met = report.methods[m].reps[r].metrics;
      double v = criterion == AeCriterion::delta_d ? std::abs(met.delta_d)
                 : criterion == AeCriterion::mse   ? met.mse
                                                   : -met.ari;
      if (v <= best) tally[m] += 1.0;
    }
  }
  for (double& t : tally) t = 100.0 * t / report.replicates;
  return tally;
}

std::vector<int> log_spaced_integers(int lo, int hi, int count) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("log grid: requires 1 <= lo <= hi");
  if (count < 1) throw std::invalid_argument("log grid: count must be >= 1");
  std::vector<int> out;
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  double llo = std::log(static_cast<double>(lo));
  double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < count; ++i) {
    double x = std::exp(llo + (lhi - llo) * i / (count - 1));
    int v = static_cast<int>(std::lround(x));
    out.push_back(std::min(std::max(v, lo), hi));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> hat_tau1_grid(int n, int lo, int count, bool mirror) {
  int third = n / 3;
  if (third < 1 || lo > third)
    throw std::invalid_argument("hat grid: needs lo <= floor(n/3)");
  std::vector<int> out = log_spaced_integers(lo, third, count);
  if (mirror) {
    int tau2 = 2 * n / 3;
    std::size_t base = out.size();
    for (std::size_t i = 0; i < base; ++i) {
      int mirrored = tau2 - out[i];
      if (mirrored >= 1 && mirrored < tau2) out.push_back(mirrored);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

}  // namespace msfpop
