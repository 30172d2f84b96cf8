#pragma once

#include <vector>

#include "paccp/instance.hpp"

// Core combinatorial layer: alpha-distance arithmetic, objective evaluation,
// the p-center-variant evaluators, and exhaustive oracles used by the test
// suite and the verification CLI.  Facility and customer ids are 0-based
// throughout the library; the CLI layer converts to the 1-based convention of
// the instance files.

namespace paccp {

// A set of exactly p open facilities with its cached objective value.
struct Solution {
  std::vector<int> open;  // sorted ascending
  double value = 0.0;
};

// Objective variants evaluated by the property suite.
//   PCP    — p-center: max_i min_{j in P} d_ij.
//   PACCP  — p-alpha-closest-center: max_i (sum of the alpha smallest d_ij).
//   ANPCP  — alpha-neighbor p-center: max over i not in P of the alpha-th
//            smallest distance to P (requires I = J).
//   PNCP   — p-next-center: max_i of d(i, closest open j') plus the distance
//            from j' to its nearest open alternative (requires I = J).
struct VariantKind {
  enum Tag { PCP, ANPCP, PNCP, PACCP };
  Tag tag = PCP;
  int alpha = 1;  // used by ANPCP and PACCP

  static VariantKind pcp() { return {PCP, 1}; }
  static VariantKind anpcp(int a) { return {ANPCP, a}; }
  static VariantKind pncp() { return {PNCP, 1}; }
  static VariantKind paccp(int a) { return {PACCP, a}; }
};

// Sum of the alpha smallest distances from customer i to facilities in P.
// Throws std::invalid_argument when |P| < alpha or alpha < 1.
double alpha_distance(const Instance& inst, const std::vector<int>& P, int i,
                      int alpha);

// f_alpha(P) = max over all customers of alpha_distance.
double objective(const Instance& inst, const std::vector<int>& P, int alpha);

// The argmin subset realizing alpha_distance; ties broken by lowest facility
// id (sort by distance, then id, take the first alpha).  Returned sorted.
std::vector<int> alpha_closest_set(const Instance& inst,
                                   const std::vector<int>& P, int i,
                                   int alpha);

// All attainable alpha-distances d_iA, deduplicated to a strictly increasing
// list (tolerance kAlphaDistanceDedupTol).  Throws when C(m, alpha) exceeds
// the subset budget or the total value count exceeds the D^alpha budget.
std::vector<double> enumerate_alpha_distances(const Instance& inst, int alpha);

// Exhaustive optimum over all p-subsets of J; returns the value and the
// lexicographically smallest optimal P.  Guarded by max_m (default 16).
std::pair<double, Solution> brute_force_opt(const Instance& inst, int p,
                                            int alpha, int max_m = 16);

// Variant objective for a fixed P (see VariantKind).
double variant_value(const Instance& inst, const std::vector<int>& P,
                     const VariantKind& kind);

// Exhaustive minimum of variant_value over all p-subsets.
double brute_force_variant_opt(const Instance& inst, int p,
                               const VariantKind& kind, int max_m = 16);

// d_iA: total distance from customer i to every facility in the subset A.
double subset_distance(const Instance& inst, int i,
                       const std::vector<int>& subset);

// C(n, k) with saturation at a large sentinel to keep budget checks simple.
long long binomial(int n, int k);

// Visits every k-subset of {0, ..., m-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int m, int k, Fn&& fn) {
  if (k < 0 || k > m) return;
  std::vector<int> idx(k);
  for (int t = 0; t < k; ++t) idx[t] = t;
  while (true) {
    fn(const_cast<const std::vector<int>&>(idx));
    int t = k - 1;
    while (t >= 0 && idx[t] == m - k + t) --t;
    if (t < 0) break;
    ++idx[t];
    for (int s = t + 1; s < k; ++s) idx[s] = idx[s - 1] + 1;
  }
}

}  // namespace paccp
