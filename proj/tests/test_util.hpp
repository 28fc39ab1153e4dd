#pragma once

#include <cstdint>
#include <vector>

#include "msfpop/rng.hpp"
#include "msfpop/solver.hpp"

namespace test_util {

// Gaussian series, optionally with one mean shift so optima include actual
// changepoints; weighted variants draw weights in [0.5, 1.5].
inline msfpop::Series random_series(std::uint64_t seed, int n, bool with_jump,
                                    bool weighted = false) {
  msfpop::CounterRng rng(0xABCDu, seed);
  msfpop::Series s;
  s.values.resize(n);
  int jump_at = n >= 4 ? 1 + rng.next_below(n - 2) : -1;
  double shift = 2.0 + 2.0 * rng.next_unit();
  for (int i = 0; i < n; ++i) {
    double mu = (with_jump && jump_at >= 0 && i >= jump_at) ? shift : 0.0;
    s.values[i] = mu + rng.next_normal();
  }
  if (weighted) {
    s.weights.resize(n);
    for (int i = 0; i < n; ++i) s.weights[i] = 0.5 + rng.next_unit();
  }
  return s;
}

}  // namespace test_util
