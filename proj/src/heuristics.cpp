#include "paccp/heuristics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "paccp/rng.hpp"

namespace paccp {

namespace {

void check_problem(const Instance& inst, int p, int alpha) {
  if (alpha < 1 || alpha > p)
    throw std::invalid_argument("heuristics: need 1 <= alpha <= p");
  if (p > inst.m())
    throw std::invalid_argument("heuristics: need p <= m");
}

bool contains(const std::vector<int>& sorted, int v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

void insert_sorted(std::vector<int>& sorted, int v) {
  sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v), v);
}

}  // namespace

Solution greedy_start(const Instance& inst, int p, int alpha,
                      std::uint64_t seed) {
  check_problem(inst, p, alpha);
  if (p >= inst.m())
    throw std::invalid_argument("greedy_start: need p < m");
  Rng rng(seed);

  std::vector<int> open{rng.next_int(inst.m())};
  while (static_cast<int>(open.size()) < p) {
    const int alpha_now = std::min<int>(alpha, open.size());
    // Farthest candidate customers by current alpha'-distance; exact value
    // ties stay in the pool and are broken by a random draw.
    std::vector<int> pool;
    double best = -1.0;
    for (int i = 0; i < inst.n(); ++i) {
      if (inst.same_locations() && contains(open, i)) continue;
      const double d = alpha_distance(inst, open, i, alpha_now);
      if (d > best) {
        best = d;
        pool.assign(1, i);
      } else if (d == best) {
        pool.push_back(i);
      }
    }
    const int picked = pool[rng.next_int(static_cast<int>(pool.size()))];
    if (inst.same_locations()) {
      insert_sorted(open, picked);
      continue;
    }
    // Distinct facility set: open the nearest still-closed facility instead.
    int nearest = -1;
    for (int j = 0; j < inst.m(); ++j) {
      if (contains(open, j)) continue;
      if (nearest < 0 || inst.d(picked, j) < inst.d(picked, nearest))
        nearest = j;
    }
    insert_sorted(open, nearest);
  }
  return {open, objective(inst, open, alpha)};
}

Solution local_search(const Instance& inst, const Solution& start, int alpha) {
  const int p = static_cast<int>(start.open.size());
  check_problem(inst, p, alpha);
  for (int j : start.open)
    if (j < 0 || j >= inst.m())
      throw std::invalid_argument("local_search: facility id out of range");

  std::vector<int> open = start.open;
  std::sort(open.begin(), open.end());
  if (std::adjacent_find(open.begin(), open.end()) != open.end())
    throw std::invalid_argument("local_search: duplicate open facility");
  double value = objective(inst, open, alpha);

  std::vector<int> order(inst.n());
  bool improved = true;
  while (improved) {
    improved = false;
    // Customers in decreasing alpha-distance to the incumbent, so the scan
    // below fails fast on the customers most likely to block a swap.
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(inst.n());
    for (int i = 0; i < inst.n(); ++i)
      dist[i] = alpha_distance(inst, open, i, alpha);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (dist[a] != dist[b]) return dist[a] > dist[b];
      return a < b;
    });

    for (std::size_t t = 0; t < open.size() && !improved; ++t) {
      for (int swap_in = 0; swap_in < inst.m() && !improved; ++swap_in) {
        if (contains(open, swap_in)) continue;
        std::vector<int> candidate = open;
        candidate[t] = swap_in;
        std::sort(candidate.begin(), candidate.end());

        double worst = 0.0;
        bool rejected = false;
        for (int i : order) {
          const double d = alpha_distance(inst, candidate, i, alpha);
          if (d >= value) {  // matching the incumbent already disqualifies
            rejected = true;
            break;
          }
          worst = std::max(worst, d);
        }
        if (rejected) continue;
        // A full scan means every customer sits strictly below the incumbent
        // value, so `worst` is the exact new objective.
        if (worst >= value)
          throw std::logic_error("local_search: accepted move did not improve");
        open = std::move(candidate);
        value = worst;
        improved = true;
      }
    }
  }
  return {open, value};
}

Solution run_start_portfolio(const Instance& inst, int p, int alpha,
                             const HeuristicConfig& config) {
  if (config.runs < 1)
    throw std::invalid_argument("run_start_portfolio: need runs >= 1");
  Rng master(config.seed);
  Solution best;
  for (int r = 0; r < config.runs; ++r) {
    const Solution candidate =
        local_search(inst, greedy_start(inst, p, alpha, master.fork_seed()),
                     alpha);
    if (best.open.empty() || candidate.value < best.value ||
        (candidate.value == best.value && candidate.open < best.open))
      best = candidate;
  }
  return best;
}

Solution primal_round(const Instance& inst, const std::vector<double>& y_star,
                      int p, int alpha) {
  check_problem(inst, p, alpha);
  if (static_cast<int>(y_star.size()) != inst.m())
    throw std::invalid_argument("primal_round: y_star must have m entries");
  std::vector<int> order(inst.m());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (y_star[a] != y_star[b]) return y_star[a] > y_star[b];
    return a < b;
  });
  std::vector<int> open(order.begin(), order.begin() + p);
  std::sort(open.begin(), open.end());
  return {open, objective(inst, open, alpha)};
}

}  // namespace paccp
