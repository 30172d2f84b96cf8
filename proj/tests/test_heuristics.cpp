#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "paccp/core.hpp"
#include "paccp/heuristics.hpp"
#include "paccp/instance.hpp"
#include "paccp/rng.hpp"
#include "support/gen.hpp"
#include "support/paths.hpp"

using namespace paccp;

namespace {

Instance load_ex1() {
  return build_euclidean_instance(
      parse_tsplib(read_file(data_path("ex1.tsp"))));
}

Instance load_ex3() {
  return build_graph_instance(parse_pmed(read_file(data_path("ex3.pmed"))));
}

// Checks the Solution contract: p sorted distinct facilities, value matching
// an independent recomputation.
void check_solution(const Instance& inst, const Solution& s, int p,
                    int alpha) {
  REQUIRE(static_cast<int>(s.open.size()) == p);
  CHECK(std::is_sorted(s.open.begin(), s.open.end()));
  CHECK(std::adjacent_find(s.open.begin(), s.open.end()) == s.open.end());
  for (int j : s.open) {
    CHECK(j >= 0);
    CHECK(j < inst.m());
  }
  CHECK(s.value == doctest::Approx(objective(inst, s.open, alpha)));
}

// A seed whose first draw opens the requested facility.
std::uint64_t seed_with_start(int m, int start) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    if (Rng(seed).next_int(m) == start) return seed;
  }
  FAIL("no seed found");
  return 0;
}

}  // namespace

TEST_CASE("unit-square fixture: greedy expands to the far corner first") {
  const Instance inst = load_ex1();
  const std::uint64_t seed = seed_with_start(4, 0);
  const Solution s = greedy_start(inst, 3, 2, seed);
  check_solution(inst, s, 3, 2);
  // From the origin the unique farthest point is the diagonal corner; the
  // third pick ties between the two side corners.
  CHECK(std::binary_search(s.open.begin(), s.open.end(), 0));
  CHECK(std::binary_search(s.open.begin(), s.open.end(), 2));
  const bool side = std::binary_search(s.open.begin(), s.open.end(), 1) ||
                    std::binary_search(s.open.begin(), s.open.end(), 3);
  CHECK(side);
}

TEST_CASE("greedy start is deterministic and always feasible") {
  const Instance inst = load_ex1();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Solution a = greedy_start(inst, 3, 2, seed);  // p = m - 1
    const Solution b = greedy_start(inst, 3, 2, seed);
    check_solution(inst, a, 3, 2);
    CHECK(a.open == b.open);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("greedy start with distinct facility set opens the nearest one") {
  // Customer 0 sits on facility 0, customer 1 on facility 2; facility 1 is
  // remote for both, facility 3 middling for customer 1.
  const Instance inst("rect", 2, 4,
                      std::vector<double>{0, 5, 9, 9, 9, 9, 0, 5}, false);
  const std::uint64_t seed = seed_with_start(4, 0);
  const Solution s = greedy_start(inst, 2, 1, seed);
  check_solution(inst, s, 2, 1);
  // Farthest customer from {0} is customer 1; its nearest closed facility
  // is 2, which therefore gets opened (not customer index 1 itself).
  CHECK(s.open == std::vector<int>{0, 2});
  CHECK(s.value == doctest::Approx(0.0));
}

TEST_CASE("unit-square fixture: swap search leaves a global optimum alone") {
  const Instance inst = load_ex1();
  const Solution start{{1, 2, 3}, objective(inst, {1, 2, 3}, 2)};
  REQUIRE(start.value == doctest::Approx(2.0));
  const Solution out = local_search(inst, start, 2);
  CHECK(out.open == std::vector<int>{1, 2, 3});
  CHECK(out.value == doctest::Approx(2.0));
}

TEST_CASE("path-graph fixture: swap search improves the endpoint pair") {
  const Instance inst = load_ex3();
  const Solution start{{1, 2}, objective(inst, {1, 2}, 2)};
  REQUIRE(start.value == doctest::Approx(3.0));
  const Solution out = local_search(inst, start, 2);
  CHECK(out.open == std::vector<int>{0, 2});
  CHECK(out.value == doctest::Approx(2.0));

  // Feeding the result back is a no-op.
  const Solution again = local_search(inst, out, 2);
  CHECK(again.open == out.open);
  CHECK(again.value == out.value);
}

TEST_CASE("swap search returns a verified local optimum, never worse") {
  Rng rng(228725);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 5 + rng.next_int(4);
    const Instance inst = (trial % 2 == 0)
                              ? random_metric_instance(rng, n)
                              : random_nonmetric_instance(rng, n, true);
    const int alpha = 1 + rng.next_int(2);
    const int p = alpha + rng.next_int(n - alpha);
    if (p >= n) continue;
    CAPTURE(trial);

    // Random feasible start.
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    for (int t = n - 1; t > 0; --t)
      std::swap(ids[t], ids[rng.next_int(t + 1)]);
    std::vector<int> open(ids.begin(), ids.begin() + p);
    std::sort(open.begin(), open.end());
    const Solution start{open, objective(inst, open, alpha)};

    const Solution out = local_search(inst, start, alpha);
    check_solution(inst, out, p, alpha);
    CHECK(out.value <= start.value + 1e-12);

    // No single swap improves the result.
    for (int t = 0; t < p; ++t)
      for (int swap_in = 0; swap_in < n; ++swap_in) {
        if (std::binary_search(out.open.begin(), out.open.end(), swap_in))
          continue;
        std::vector<int> neighbor = out.open;
        neighbor[t] = swap_in;
        std::sort(neighbor.begin(), neighbor.end());
        CHECK(objective(inst, neighbor, alpha) >= out.value - 1e-12);
      }
  }
}

TEST_CASE("portfolio fixtures reach the brute-force optimum") {
  const Instance ex1 = load_ex1();
  const Solution a = run_start_portfolio(ex1, 3, 2, HeuristicConfig{10, 7});
  check_solution(ex1, a, 3, 2);
  CHECK(a.value == doctest::Approx(2.0));

  const Instance ex3 = load_ex3();
  const Solution b = run_start_portfolio(ex3, 2, 2, HeuristicConfig{10, 7});
  check_solution(ex3, b, 2, 2);
  CHECK(b.value == doctest::Approx(2.0));
  CHECK(b.open == std::vector<int>{0, 2});
}

TEST_CASE("portfolio of one equals a single seeded run") {
  const Instance inst = load_ex1();
  const HeuristicConfig config{1, 42};
  const Solution portfolio = run_start_portfolio(inst, 3, 2, config);
  const std::uint64_t first_seed = Rng(config.seed).fork_seed();
  const Solution direct =
      local_search(inst, greedy_start(inst, 3, 2, first_seed), 2);
  CHECK(portfolio.open == direct.open);
  CHECK(portfolio.value == direct.value);

  CHECK(HeuristicConfig{}.runs == 10);
}

TEST_CASE("portfolio is deterministic and near-exhaustive on small inputs") {
  Rng rng(239826);
  int optimal_hits = 0, total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5 + rng.next_int(4);
    const Instance inst = (trial % 2 == 0)
                              ? random_metric_instance(rng, n)
                              : random_nonmetric_instance(rng, n, true);
    const int alpha = 1 + rng.next_int(3);
    const int p = alpha + rng.next_int(n - alpha);
    if (p >= n || alpha > p) continue;
    CAPTURE(trial);

    const HeuristicConfig config{10, rng.fork_seed()};
    const Solution s = run_start_portfolio(inst, p, alpha, config);
    const Solution s2 = run_start_portfolio(inst, p, alpha, config);
    check_solution(inst, s, p, alpha);
    CHECK(s.open == s2.open);

    const auto [opt, best] = brute_force_opt(inst, p, alpha);
    CHECK(s.value >= opt - 1e-9);  // heuristics only produce upper bounds
    ++total;
    if (s.value <= opt + 1e-9) ++optimal_hits;
  }
  REQUIRE(total >= 30);
  // Quality smoke bar: the multi-start reaches the optimum on at least 80%.
  CHECK(optimal_hits * 10 >= total * 8);
}

TEST_CASE("rounding opens the largest fractional openings") {
  const Instance inst = load_ex1();
  const Solution a = primal_round(inst, {0.9, 0.8, 0.1, 0.2}, 2, 1);
  CHECK(a.open == std::vector<int>{0, 1});
  check_solution(inst, a, 2, 1);

  const Solution b = primal_round(inst, {0.5, 0.5, 0.5, 0.5}, 2, 1);
  CHECK(b.open == std::vector<int>{0, 1});  // ties fall to the lowest index

  // An integral opening vector comes back unchanged with its exact value.
  const Solution c = primal_round(inst, {1.0, 0.0, 0.0, 1.0}, 2, 2);
  CHECK(c.open == std::vector<int>{0, 3});
  CHECK(c.value == doctest::Approx(objective(inst, {0, 3}, 2)));
}

TEST_CASE("contract violations are rejected") {
  const Instance inst = load_ex1();
  CHECK_THROWS_AS(greedy_start(inst, 4, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(greedy_start(inst, 2, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(
      run_start_portfolio(inst, 3, 2, HeuristicConfig{0, 1}),
      std::invalid_argument);
  CHECK_THROWS_AS(primal_round(inst, {1.0, 0.0}, 2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(local_search(inst, Solution{{1, 1, 2}, 0.0}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(local_search(inst, Solution{{1}, 0.0}, 2),
                  std::invalid_argument);
}
