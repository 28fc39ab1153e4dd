#include "msfpop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace msfpop {

Segmentation brute_force_segment(const Series& series, const PenaltyModel& model) {
  series.validate();
  if (model.n != series.n())
    throw std::invalid_argument("brute force: penalty model bound to a different length");
  const int n = series.n();
  if (n > 20) throw std::invalid_argument("brute force: refusing n > 20");

  std::vector<double> W(n + 1, 0.0), WY(n + 1, 0.0), WY2(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    double w = series.weight(i - 1), yv = series.values[i - 1];
    W[i] = W[i - 1] + w;
    WY[i] = WY[i - 1] + w * yv;
    WY2[i] = WY2[i - 1] + w * yv * yv;
  }
  auto segment_cost = [&](int s, int e) {  // observations s+1..e plus penalty
    double dw = W[e] - W[s];
    double dy = WY[e] - WY[s];
    return WY2[e] - WY2[s] - dy * dy / dw + segment_penalty(model, e - s);
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_cps;
  std::vector<int> cps;
  const std::uint32_t masks = n >= 1 ? (1u << (n - 1)) : 1u;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    cps.clear();
    double cost = 0.0;
    int prev = 0;
    for (int tau = 1; tau < n; ++tau) {
      if (mask & (1u << (tau - 1))) {
        cost += segment_cost(prev, tau);
        cps.push_back(tau);
        prev = tau;
      }
    }
    cost += segment_cost(prev, n);
    bool take = cost < best;
    if (!take && cost == best) {
      take = cps.size() < best_cps.size() ||
             (cps.size() == best_cps.size() && cps < best_cps);
    }
    if (take) {
      best = cost;
      best_cps = cps;
    }
  }

  Segmentation out;
  out.changepoints = best_cps;
  out.means = segment_means(series, out.changepoints);
  out.objective = best;
  return out;
}

GridAtlas grid_living_sets(const Series& series, const PenaltyModel& model,
                           int grid_count) {
  series.validate();
  if (model.n != series.n())
    throw std::invalid_argument("grid atlas: penalty model bound to a different length");
  const int n = series.n();
  if (n > 200) throw std::invalid_argument("grid atlas: refusing n > 200");
  if (grid_count < 10) throw std::invalid_argument("grid atlas: need at least 10 grid points");

  std::vector<double> W(n + 1, 0.0), WY(n + 1, 0.0), WY2(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    double w = series.weight(i - 1), yv = series.values[i - 1];
    W[i] = W[i - 1] + w;
    WY[i] = WY[i - 1] + w * yv;
    WY2[i] = WY2[i - 1] + w * yv * yv;
  }

  GridAtlas atlas;
  auto [lo_it, hi_it] = std::minmax_element(series.values.begin(), series.values.end());
  double lo = *lo_it, hi = *hi_it;
  atlas.grid.resize(grid_count);
  for (int g = 0; g < grid_count; ++g)
    atlas.grid[g] = lo + (hi - lo) * g / (grid_count - 1);

  atlas.F.assign(n + 1, 0.0);
  atlas.F[0] = -model.alpha;
  atlas.membership.resize(n);

  // Candidate (t,s) evaluated from scratch: quadratic in mu with
  //   a2 = W(s+1..t), a1 = -2 WY(s+1..t),
  //   a0 = F_s + alpha + WY2(s+1..t) - beta*g(t-s).
  auto coeffs = [&](int t, int s) {
    QuadraticPoly q;
    q.a2 = W[t] - W[s];
    q.a1 = -2.0 * (WY[t] - WY[s]);
    q.a0 = atlas.F[s] + model.alpha + WY2[t] - WY2[s] -
           model.beta * g_eval(model, t - s);
    return q;
  };

  std::vector<QuadraticPoly> table;
  for (int t = 1; t <= n; ++t) {
    table.clear();
    double ft = std::numeric_limits<double>::infinity();
    for (int s = 0; s < t; ++s) {
      QuadraticPoly q = coeffs(t, s);
      table.push_back(q);
      ft = std::min(ft, q.eval(q.vertex()));  // unrestricted min is exact here
    }
    atlas.F[t] = ft;
    table.push_back(QuadraticPoly{0.0, 0.0, ft + model.alpha});  // newborn t

    auto& wt = atlas.membership[t - 1];
    wt.assign(t + 1, std::vector<char>(grid_count, 0));
    for (int g = 0; g < grid_count; ++g) {
      double mu = atlas.grid[g];
      double mn = std::numeric_limits<double>::infinity();
      for (int s = 0; s <= t; ++s) mn = std::min(mn, table[s].eval(mu));
      double tol = 1e-10 * (1.0 + std::abs(mn));
      for (int s = 0; s <= t; ++s)
        if (table[s].eval(mu) <= mn + tol) wt[s][g] = 1;
    }
  }
  return atlas;
}

}  // namespace msfpop
