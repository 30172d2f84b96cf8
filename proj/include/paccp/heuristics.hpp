#pragma once

#include <cstdint>
#include <vector>

#include "paccp/core.hpp"
#include "paccp/instance.hpp"

// Primal side of the solver: randomized greedy construction, swap local
// search, a seeded multi-start portfolio, and rounding of fractional y-values
// from an LP relaxation.  Every returned Solution carries |open| = p (sorted)
// and a freshly recomputed objective value.

namespace paccp {

struct HeuristicConfig {
  int runs = 10;            // independent greedy + local-search starts
  std::uint64_t seed = 0;   // master seed; per-run streams are forked from it
};

// Grows P from a random facility: repeatedly evaluates the alpha'-distance
// (alpha' = min{alpha, |P|}) of every candidate customer, picks a random
// farthest one, and opens it directly when customers and facilities coincide,
// otherwise the nearest still-closed facility to it.  Requires
// 1 <= alpha <= p < m.
Solution greedy_start(const Instance& inst, int p, int alpha,
                      std::uint64_t seed);

// First-improvement swap search over all P' differing from P in one facility.
// Candidate evaluation scans customers in decreasing current alpha-distance
// and bails out at the first one matching or exceeding the incumbent value,
// so a completed scan certifies a strict improvement.  Terminates at a
// swap-local optimum; the result never exceeds the start value.
Solution local_search(const Instance& inst, const Solution& start, int alpha);

// Best of `config.runs` local_search(greedy_start(...)) results, with
// per-run seeds forked deterministically from config.seed.  Ties between
// equal values resolve to the lexicographically smallest open set.
Solution run_start_portfolio(const Instance& inst, int p, int alpha,
                             const HeuristicConfig& config);

// Opens the p facilities with the largest y_star entries (ties: lowest
// index) and evaluates them exactly.  y_star must have one entry per
// facility.
Solution primal_round(const Instance& inst, const std::vector<double>& y_star,
                      int p, int alpha);

}  // namespace paccp
