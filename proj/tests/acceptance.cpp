// End-to-end acceptance checks, one per release gate. Each prints a single
// PASS/FAIL line; --criterion <k> runs just one of them.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "msfpop/oracle.hpp"
#include "msfpop/penalty.hpp"
#include "msfpop/simulate.hpp"
#include "msfpop/solver.hpp"
#include "msfpop/study.hpp"
#include "test_util.hpp"

using namespace msfpop;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

template <typename Fn>
double timed(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

// 1. Every solver configuration reproduces the enumerated optimum.
Outcome objective_matches_enumeration() {
  double worst = 0.0;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    int n = 2 + static_cast<int>(seed % 11);
    Series s = test_util::random_series(seed, n, seed % 2 == 0);
    for (PenaltyModel m :
         {PenaltyModel::multiscale(n, 2.25, 9.0), PenaltyModel::bic(n)}) {
      double ref = brute_force_segment(s, m).objective;
      const double objs[] = {
          msfpop_segment(s, m, SamplerSpec::all()).objective,
          msfpop_segment(s, m, SamplerSpec::rand_k(1, seed)).objective,
          pelt_segment(s, m, PruningBound::constant(m)).objective,
          pelt_segment(s, m, PruningBound::adaptive()).objective,
          pelt_segment(s, m, PruningBound::none()).objective,
      };
      for (double o : objs) {
        worst = std::max(worst, std::abs(o - ref) / std::max(1.0, std::abs(ref)));
        ++checked;
      }
    }
  }
  Outcome out;
  out.pass = worst <= 1e-9;
  out.detail = std::to_string(checked) +
               " solves on 200 series (n 2..12), 5 configs x 2 penalties; worst "
               "relative objective gap " +
               fmt(worst) + " (allowed 1e-09)";
  return out;
}

// 2. Grid points won by a candidate always lie inside its maintained set.
Outcome living_sets_contain_winners() {
  int violations = 0;
  long long points = 0;
  for (std::uint64_t seed = 0; seed < 50 && violations == 0; ++seed) {
    Series s = test_util::random_series(1000 + seed, 100, seed % 2 == 0);
    PenaltyModel m = PenaltyModel::multiscale(100, 2.25, 9.0);
    GridAtlas atlas = grid_living_sets(s, m, 1024);
    double span = atlas.grid.back() - atlas.grid.front();
    double eps = 1e-9 * (1.0 + span);
    for (SamplerSpec sp : {SamplerSpec::rand_k(1, seed), SamplerSpec::all()}) {
      std::vector<std::map<int, IntervalSet>> kept(101);
      StepObserver obs = [&](const SolverState& st) {
        for (const Candidate& c : st.active) kept[st.t].emplace(c.s, c.living);
      };
      msfpop_segment(s, m, sp, &obs);
      for (int t = 1; t <= 100; ++t) {
        for (int cand = 0; cand <= t; ++cand) {
          auto it = kept[t].find(cand);
          for (std::size_t g = 0; g < atlas.grid.size(); ++g) {
            if (!atlas.membership[t - 1][cand][g]) continue;
            ++points;
            double mu = atlas.grid[g];
            bool inside = false;
            if (it != kept[t].end())
              for (const Interval& iv : it->second.intervals())
                if (iv.lo - eps <= mu && mu <= iv.hi + eps) {
                  inside = true;
                  break;
                }
            if (!inside) ++violations;
          }
        }
      }
    }
  }
  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(points) +
               " winning grid points across 50 series (n=100, 1024-point grid, "
               "samplers rand-1 and all); " +
               std::to_string(violations) + " escaped the maintained sets";
  return out;
}

// 3. log l + log l' - log(l+l') over all admissible lengths stays above -log 2.
Outcome length_penalty_increment_bounded() {
  const int N = 10000;
  std::vector<double> lg(N + 1, 0.0);
  for (int i = 1; i <= N; ++i) lg[i] = std::log(static_cast<double>(i));
  double worst = std::numeric_limits<double>::infinity();
  long long checked = 0;
  for (int a = 1; a < N; ++a)
    for (int b = 1; a + b <= N; ++b) {
      worst = std::min(worst, lg[a] + lg[b] - lg[a + b]);
      ++checked;
    }
  const double bound = -std::log(2.0) - 1e-12;
  Outcome out;
  out.pass = worst >= bound;
  out.detail = "minimum of log l + log l' - log(l+l') over " + std::to_string(checked) +
               " length pairs (sums up to 10000) is " + fmt(worst) + ", bound " +
               fmt(bound);
  return out;
}

// 4. Default penalties keep the false-detection rate on pure-noise signals low.
Outcome null_detection_rate_calibrated() {
  std::vector<MethodSpec> methods{parse_method("msfpop")};
  double gated = 1.0;
  std::string rates;
  std::uint64_t idx = 0;
  for (int n : {100, 1000, 10000}) {
    MetricsReport rep = run_study(ScenarioSpec::null_signal_spec(n, 0), methods,
                                  1000, 41, idx++, 1);
    double r = rep.methods[0].r_gt0;
    if (n == 1000) gated = r;
    if (!rates.empty()) rates += ", ";
    rates += "n=" + std::to_string(n) + ": " + fmt(r);
  }
  Outcome out;
  out.pass = gated < 0.06;
  out.detail =
      "share of 1000 pure-noise replicates with detections under gamma=9, "
      "beta=2.25 (" +
      rates + "); gate is the n=1000 rate < 0.06";
  return out;
}

// 5. The functional solver beats the inequality solver by 10x on no-change data.
Outcome functional_outruns_inequality() {
  GeneratedSeries gs = generate(ScenarioSpec::null_signal_spec(100000, 7));
  MethodSpec fast = parse_method("msfpop");
  MethodSpec slow = parse_method("mspelt");
  Segmentation seg_fast, seg_slow;
  double t_fast = timed([&] { seg_fast = fast.run(gs.series, 1); });
  double t_slow = timed([&] { seg_slow = slow.run(gs.series, 1); });
  double rel = std::abs(seg_fast.objective - seg_slow.objective) /
               std::max(1.0, std::abs(seg_slow.objective));
  Outcome out;
  out.pass = t_fast <= t_slow / 10.0 && rel <= 1e-9;
  out.detail = "one no-change series, n=100000: msfpop(rand 1) " + fmt(t_fast) +
               " s vs mspelt(adaptive) " + fmt(t_slow) + " s (ratio " +
               fmt(t_slow / std::max(t_fast, 1e-12)) +
               ", need >= 10; objectives agree to " + fmt(rel) + ")";
  return out;
}

// 6. Doubling n at most triples the runtime (median of 5).
Outcome runtime_quasi_linear() {
  MethodSpec method = parse_method("msfpop");
  auto median5 = [&](int n) {
    GeneratedSeries gs = generate(ScenarioSpec::null_signal_spec(n, 11));
    std::vector<double> ts;
    for (int r = 0; r < 5; ++r)
      ts.push_back(timed([&] { method.run(gs.series, 1); }));
    std::sort(ts.begin(), ts.end());
    return ts[2];
  };
  double t1 = median5(100000);
  double t2 = median5(200000);
  Outcome out;
  out.pass = t2 <= 3.0 * t1;
  out.detail = "msfpop(rand 1) on no-change data, median of 5 runs: " + fmt(t1) +
               " s at n=100000 vs " + fmt(t2) + " s at n=200000 (ratio " +
               fmt(t2 / std::max(t1, 1e-12)) + ", allowed 3)";
  return out;
}

// 7. The length-adaptive penalty recovers the hat pattern at least as often
// as the constant one.
Outcome hat_pattern_power() {
  const int n = 10000;
  std::vector<MethodSpec> methods{parse_method("msfpop"), parse_method("fpop")};
  MetricsReport rep =
      run_study(ScenarioSpec::hat_spec(n, n / 3, 0), methods, 300, 4242, 0, 1);
  double r2_ms = rep.methods[0].r_2;
  double r2_fp = rep.methods[1].r_2;
  Outcome out;
  out.pass = r2_ms >= r2_fp;
  out.detail = "rate of exactly-two-change fits on hat signals (n=10000, "
               "tau1=3333, 300 replicates): multiscale " +
               fmt(r2_ms) + " vs bic " + fmt(r2_fp);
  return out;
}

// 8. Under the constant penalty, a candidate's maintained set never regains
// measure from one step to the next.
Outcome bic_widths_never_grow() {
  int violations = 0;
  long long checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Series s = test_util::random_series(500 + seed, 100, seed % 2 == 0);
    PenaltyModel m = PenaltyModel::bic(100);
    for (SamplerSpec sp : {SamplerSpec::rand_k(1, seed), SamplerSpec::all()}) {
      std::vector<std::map<int, double>> widths(101);
      double span = 0.0;
      StepObserver obs = [&](const SolverState& st) {
        span = st.domain.width();
        for (const Candidate& c : st.active)
          widths[st.t][c.s] = c.living.total_width();
      };
      msfpop_segment(s, m, sp, &obs);
      double eps = 1e-12 * (1.0 + span);
      for (int t = 1; t < 100; ++t)
        for (const auto& [cand, w_next] : widths[t + 1]) {
          auto it = widths[t].find(cand);
          if (it == widths[t].end()) continue;  // born at t+1
          ++checked;
          if (w_next > it->second + eps) ++violations;
        }
    }
  }
  Outcome out;
  out.pass = violations == 0;
  out.detail = std::to_string(checked) +
               " consecutive-step width comparisons across 50 bic runs (n=100, "
               "both samplers); " +
               std::to_string(violations) + " grew";
  return out;
}

// 9. Per-replicate best-method tallies cover every replicate of a small study.
Outcome best_method_tallies_cover() {
  std::vector<MethodSpec> methods{parse_method("msfpop"), parse_method("fpop"),
                                  parse_method("mspelt"), parse_method("op-bic")};
  std::vector<ScenarioSpec> scenarios{ScenarioSpec::null_signal_spec(200, 0),
                                      ScenarioSpec::alternating_spec(200, 4, 0),
                                      ScenarioSpec::hat_spec(300, 90, 0)};
  const int reps = 25;
  bool ok = true;
  int combos = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    MetricsReport rep = run_study(scenarios[i], methods, reps, 77, i, 1);
    for (AeCriterion crit :
         {AeCriterion::delta_d, AeCriterion::mse, AeCriterion::ari}) {
      std::vector<double> pct = ae_percent(rep, crit);
      double tallies = 0.0;
      for (double p : pct) {
        ok = ok && p >= 0.0 && p <= 100.0 + 1e-9;
        tallies += p * reps / 100.0;
      }
      // someone attains the per-replicate best, so tallies sum to >= reps
      ok = ok && tallies >= reps - 1e-6;
      ++combos;
    }
  }
  Outcome out;
  out.pass = ok;
  out.detail = std::to_string(combos) +
               " scenario-criterion combinations (3 scenarios x delta-D/MSE/ARI, "
               "4 methods, 25 replicates each): every replicate tallied for at "
               "least one method";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion 1..9]\n", argv[0]);
      return 64;
    }
  }
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "objective matches exhaustive enumeration", objective_matches_enumeration},
      {2, "winning grid points stay inside maintained living sets", living_sets_contain_winners},
      {3, "length-penalty increment bounded below", length_penalty_increment_bounded},
      {4, "null false-detection rate calibrated", null_detection_rate_calibrated},
      {5, "functional pruning outruns inequality pruning", functional_outruns_inequality},
      {6, "runtime quasi-linear in n", runtime_quasi_linear},
      {7, "multiscale penalty at least as powerful on hat signals", hat_pattern_power},
      {8, "bic living-set widths never grow", bic_widths_never_grow},
      {9, "best-method tallies cover every replicate", best_method_tallies_cover},
  };
  int failures = 0;
  bool ran = false;
  for (const Entry& e : entries) {
    if (only != 0 && e.id != only) continue;
    ran = true;
    Outcome o = e.fn();
    std::printf("C%d %s: %s — %s\n", e.id, o.pass ? "PASS" : "FAIL", e.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (!ran) {
    std::fprintf(stderr, "unknown criterion %d (expected 1..9)\n", only);
    return 64;
  }
  return failures == 0 ? 0 : 1;
}
