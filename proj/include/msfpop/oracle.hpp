#pragma once

#include <vector>

#include "msfpop/penalty.hpp"
#include "msfpop/solver.hpp"

namespace msfpop {

// Exact optimum by enumerating all 2^(n-1) segmentations. Ties resolved
// toward fewer changepoints, then lexicographically smaller ones. Refuses
// n > 20.
Segmentation brute_force_segment(const Series& series, const PenaltyModel& model);

// For each time t and each unpruned start s = 0..t, which grid points of
// the data range the candidate (t,s) wins (ties shared). Built from prefix
// sums and full candidate tables, independently of the pruning solvers;
// meant as ground truth for their living sets. Refuses n > 200.
struct GridAtlas {
  std::vector<double> grid;
  // membership[t-1][s][g]: candidate s in 0..t optimal at grid point g
  // after step t (ties shared, small relative tolerance).
  std::vector<std::vector<std::vector<char>>> membership;
  std::vector<double> F;  // prefix objectives F[0..n] from the same table
};

GridAtlas grid_living_sets(const Series& series, const PenaltyModel& model,
                           int grid_count);

}  // namespace msfpop
