#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "paccp/core.hpp"
#include "paccp/cuts.hpp"
#include "paccp/formulations.hpp"
#include "paccp/instance.hpp"
#include "paccp/lifting.hpp"
#include "paccp/lp.hpp"
#include "paccp/rng.hpp"
#include "paccp/tolerances.hpp"
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

// All-equal distance matrix (diagonal included), distinct customer and
// facility roles.
Instance uniform_instance(int n, int m, double value) {
  std::vector<double> d(static_cast<size_t>(n) * m, value);
  return Instance("uniform", n, m, std::move(d), false);
}

// Canonical F1 encoding of an open set: x on each customer's alpha-closest
// open facilities, y on the open set.
std::vector<double> encode_f1(const Instance& inst, const VarMap& vars,
                              const std::vector<int>& open, int alpha) {
  std::vector<double> point(vars.num_cols(), 0.0);
  for (int j : open) point[vars.y(j)] = 1.0;
  double worst = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    double total = 0.0;
    for (int j : alpha_closest_set(inst, open, i, alpha)) {
      point[vars.x_f1(i, j)] = 1.0;
      total += inst.d(i, j);
    }
    worst = std::max(worst, total);
  }
  point[vars.z()] = worst;
  return point;
}

// Independent check of the general-row condition: every beta-subset B of the
// row's facility set must force d_iA > ub for all alpha-subsets A ⊇ B.
void check_general_condition(const Instance& inst, int i, int alpha, int beta,
                             double ub, const std::vector<int>& members) {
  for_each_subset(
      static_cast<int>(members.size()), beta, [&](const std::vector<int>& pos) {
        std::vector<int> b;
        for (int t : pos) b.push_back(members[t]);
        std::sort(b.begin(), b.end());
        double best = std::numeric_limits<double>::infinity();
        for_each_subset(inst.m(), alpha, [&](const std::vector<int>& subset) {
          if (!std::includes(subset.begin(), subset.end(), b.begin(), b.end()))
            return;
          best = std::min(best, subset_distance(inst, i, subset));
        });
        CHECK(best > ub);
      });
}

}  // namespace

TEST_CASE("unit-square fixture: remoteness keeps the diagonal out") {
  const Instance inst = load_ex1();
  const auto fixings = remoteness_fixings(inst, 3, 2);
  REQUIRE(fixings.size() == 4);  // p - alpha = 1 per customer
  // Customer 0 sits at the origin; its unique farthest facility is the
  // diagonal corner 2.
  CHECK(fixings[0] == std::pair{0, 2});
  CHECK(fixings[1] == std::pair{1, 3});
  CHECK(fixings[2] == std::pair{2, 0});
  CHECK(fixings[3] == std::pair{3, 1});

  CHECK(remoteness_fixings(inst, 2, 2).empty());  // p == alpha
}

TEST_CASE("remoteness tie rule picks the smallest ids") {
  const Instance inst = uniform_instance(3, 5, 7.0);
  const auto fixings = remoteness_fixings(inst, 4, 2);  // p - alpha = 2
  REQUIRE(fixings.size() == 6);
  for (int i = 0; i < 3; ++i) {
    CHECK(fixings[2 * i] == std::pair{i, 0});
    CHECK(fixings[2 * i + 1] == std::pair{i, 1});
  }
}

TEST_CASE("a remoteness-respecting assignment of optimal value exists") {
  Rng rng(149917);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + rng.next_int(4);
    const Instance inst = (trial % 2 == 0)
                              ? random_metric_instance(rng, n)
                              : random_nonmetric_instance(rng, n, true);
    const int alpha = 1 + rng.next_int(2);
    const int p = alpha + 1 + rng.next_int(n - alpha - 1);
    if (p >= n) continue;
    CAPTURE(trial);

    const auto [opt, best] = brute_force_opt(inst, p, alpha);
    const auto fixings = remoteness_fixings(inst, p, alpha);
    std::vector<std::set<int>> banned(n);
    for (auto [i, j] : fixings) banned[i].insert(j);
    // Serving every customer by the alpha closest open facilities outside its
    // banned set must not degrade the optimal value.
    for (int i = 0; i < n; ++i) {
      std::vector<int> allowed;
      for (int j : best.open)
        if (!banned[i].count(j)) allowed.push_back(j);
      REQUIRE(static_cast<int>(allowed.size()) >= alpha);
      CHECK(alpha_distance(inst, allowed, i, alpha) <= opt + 1e-9);
    }
  }
}

TEST_CASE("unit-square fixture: upper-bound fixings use the assignment sum") {
  const Instance inst = load_ex1();
  // Through the diagonal corner the cheapest pair is sqrt(2) + 0 <= 2, so
  // nothing is fixed at UB = 2.
  CHECK(upper_bound_fixings(inst, 2, 2.0).empty());
  // Just below sqrt(2) the diagonal assignment of every customer exceeds the
  // bound (cheapest pair through the diagonal is sqrt(2)); closer facilities
  // survive (cheapest pair through a side corner is 1).
  const auto fixings = upper_bound_fixings(inst, 2, 1.2);
  REQUIRE(fixings.size() == 4);
  CHECK(fixings[0] == std::pair{0, 2});
  CHECK(fixings[1] == std::pair{1, 3});
  CHECK(fixings[2] == std::pair{2, 0});
  CHECK(fixings[3] == std::pair{3, 1});
  // A bound above the worst assignment sum fixes nothing.
  CHECK(upper_bound_fixings(inst, 2, 1 + std::sqrt(2.0) + 0.1).empty());
}

TEST_CASE("upper-bound fixings match subset enumeration and every optimum") {
  Rng rng(151018);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + rng.next_int(4);
    const Instance inst = (trial % 2 == 0)
                              ? random_metric_instance(rng, n)
                              : random_nonmetric_instance(rng, n, true);
    const int alpha = 1 + rng.next_int(3);
    if (alpha >= n) continue;
    const int p = alpha + rng.next_int(n - alpha);
    if (p >= n) continue;
    const auto [opt, best] = brute_force_opt(inst, p, alpha);
    const double ub = opt * (1.0 + rng.next_double());
    const auto fixings = upper_bound_fixings(inst, alpha, ub);
    CAPTURE(trial);

    // Closed form == enumeration of min_{A containing j} d_iA.
    std::set<std::pair<int, int>> got(fixings.begin(), fixings.end());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double best_sum = std::numeric_limits<double>::infinity();
        for_each_subset(n, alpha, [&](const std::vector<int>& subset) {
          if (std::find(subset.begin(), subset.end(), j) == subset.end())
            return;
          best_sum = std::min(best_sum, subset_distance(inst, i, subset));
        });
        const bool expect =
            best_sum > ub + kAlphaDistanceDedupTol * (1.0 + std::abs(ub));
        CHECK(got.count({i, j}) == (expect ? 1u : 0u));
      }

    // Every optimal open set's canonical assignment avoids fixed pairs.
    for_each_subset(n, p, [&](const std::vector<int>& open) {
      if (objective(inst, open, alpha) > opt + 1e-9) return;
      for (int i = 0; i < n; ++i)
        for (int j : alpha_closest_set(inst, open, i, alpha))
          CHECK(got.count({i, j}) == 0u);
    });
  }
}

TEST_CASE("alpha=1 upper-bound fixings reduce to a distance threshold") {
  Rng rng(162119);
  const Instance inst = random_nonmetric_instance(rng, 6, false);
  const double ub = 40.0;
  const auto fixings = upper_bound_fixings(inst, 1, ub);
  std::set<std::pair<int, int>> got(fixings.begin(), fixings.end());
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(got.count({i, j}) == (inst.d(i, j) > ub ? 1u : 0u));
}

TEST_CASE("path-graph fixture: simple upper-bound rows") {
  const Instance inst = load_ex3();
  const VarMap vars = build_f1_relaxation(inst, 2, 2).vars;
  const auto rows = simple_ub_rows(inst, 2, 2.0, vars);
  // Customers 0 and 2 each have one facility beyond UB/2 = 1; the middle
  // customer reaches everyone within 1.
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].origin_customer == 0);
  CHECK(rows[0].family == CutFamily::SimpleUB);
  CHECK(rows[0].rel == Rel::LE);
  CHECK(rows[0].rhs == 1.0);
  CHECK(rows[0].idx == std::vector<int>{vars.x_f1(0, 2)});
  CHECK(rows[1].origin_customer == 2);
  CHECK(rows[1].idx == std::vector<int>{vars.x_f1(2, 0)});

  CHECK(simple_ub_rows(inst, 2, 100.0, vars).empty());
}

TEST_CASE("simple upper-bound rows cover the full facility set") {
  const Instance inst = uniform_instance(2, 3, 3.0);
  const VarMap vars = build_f1_relaxation(inst, 2, 2, false).vars;
  const auto rows = simple_ub_rows(inst, 2, 4.0, vars);  // threshold 2 < 3
  REQUIRE(rows.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(rows[i].idx.size() == 3);
    CHECK(rows[i].rhs == 1.0);
  }
}

TEST_CASE("simple rows hold at every optimal canonical assignment") {
  Rng rng(173220);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 4 + rng.next_int(4);
    const Instance inst = random_metric_instance(rng, n);
    const int alpha = 2 + rng.next_int(2);
    if (alpha >= n) continue;
    const int p = alpha + rng.next_int(n - alpha);
    if (p >= n) continue;
    const auto [opt, best] = brute_force_opt(inst, p, alpha);
    const VarMap vars = build_f1_relaxation(inst, p, alpha, false).vars;
    const double ub = opt * (1.0 + 0.5 * rng.next_double());
    CAPTURE(trial);
    for (const CutRow& row : simple_ub_rows(inst, alpha, ub, vars)) {
      for_each_subset(n, p, [&](const std::vector<int>& open) {
        if (objective(inst, open, alpha) > opt + 1e-9) return;
        const std::vector<double> point = encode_f1(inst, vars, open, alpha);
        double lhs = 0.0;
        for (std::size_t t = 0; t < row.idx.size(); ++t)
          lhs += row.val[t] * point[row.idx[t]];
        CHECK(lhs <= row.rhs + 1e-9);
      });
    }
  }
}

TEST_CASE("unit-square fixture: general row from a spread fractional point") {
  const Instance inst = load_ex1();
  const VarMap vars = build_f1_relaxation(inst, 2, 2).vars;
  std::vector<double> x_star(vars.num_cols(), 0.0);
  x_star[vars.x_f1(0, 1)] = 0.6;
  x_star[vars.x_f1(0, 2)] = 0.55;
  x_star[vars.x_f1(0, 3)] = 0.3;

  const auto rows = general_ub_rows(inst, 2, 2.0, x_star, 10, vars);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].origin_customer == 0);
  CHECK(rows[0].family == CutFamily::GeneralUB);
  CHECK(rows[0].rhs == 1.0);
  // The two high-x* corners form the clique: 1 + sqrt(2) > 2; adding either
  // remaining facility would create a pair summing to at most 2.
  CHECK(rows[0].idx ==
        std::vector<int>{vars.x_f1(0, 1), vars.x_f1(0, 2)});

  // A bound above every pair sum yields nothing.
  CHECK(general_ub_rows(inst, 2, 3.0, x_star, 10, vars).empty());
}

TEST_CASE("general rows: greedy condition verified by enumeration") {
  Rng rng(184321);
  int emitted = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 5 + rng.next_int(3);
    const Instance inst = (trial % 2 == 0)
                              ? random_metric_instance(rng, n)
                              : random_nonmetric_instance(rng, n, false);
    const int alpha = 2 + rng.next_int(2);
    if (alpha >= n) continue;
    const int p = alpha + rng.next_int(n - alpha);
    if (p >= n) continue;
    const auto [opt, best] = brute_force_opt(inst, p, alpha);
    const VarMap vars = build_f1_relaxation(inst, p, alpha, false).vars;

    // A deliberately spread fractional point concentrated on far facilities.
    std::vector<double> x_star(vars.num_cols(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        x_star[vars.x_f1(i, j)] =
            0.3 + 0.7 * inst.d(i, j) /
                      (1.0 + *std::max_element(inst.matrix().begin(),
                                               inst.matrix().end()));
    const double ub = opt;
    CAPTURE(trial);

    for (const CutRow& row : general_ub_rows(inst, alpha, ub, x_star, 50, vars)) {
      const int beta = static_cast<int>(row.rhs) + 1;
      REQUIRE(beta >= 2);
      std::vector<int> members;
      for (int c : row.idx)
        members.push_back(c - vars.x_f1(row.origin_customer, 0));
      check_general_condition(inst, row.origin_customer, alpha, beta, ub,
                              members);
      // Violated by construction.
      double lhs = 0.0;
      for (int c : row.idx) lhs += x_star[c];
      CHECK(lhs > row.rhs + kViolationTol);
      ++emitted;
    }

    // The canonical encoding of any optimum is never cut.
    const std::vector<double> integral = encode_f1(inst, vars, best.open, alpha);
    CHECK(general_ub_rows(inst, alpha, ub, integral, 50, vars).empty());
  }
  CHECK(emitted >= 5);
}

TEST_CASE("general rows respect the row budget and eligibility mask") {
  const Instance inst = uniform_instance(4, 4, 5.0);
  const VarMap vars = build_f1_relaxation(inst, 3, 2, false).vars;
  std::vector<double> x_star(vars.num_cols(), 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) x_star[vars.x_f1(i, j)] = 0.6;

  // Every pair sums to 10 > 8, so each customer yields a violated row.
  CHECK(general_ub_rows(inst, 2, 8.0, x_star, 10, vars).size() == 4);
  CHECK(general_ub_rows(inst, 2, 8.0, x_star, 2, vars).size() == 2);

  std::vector<char> eligible{1, 0, 0, 1};
  const auto masked = general_ub_rows(inst, 2, 8.0, x_star, 10, vars, &eligible);
  REQUIRE(masked.size() == 2);
  CHECK(masked[0].origin_customer == 0);
  CHECK(masked[1].origin_customer == 3);
}

TEST_CASE("initial linking rows follow the distance order") {
  const Instance inst = load_ex3();
  const VarMap vars = build_f1_relaxation(inst, 2, 2).vars;

  CHECK(linking_rows_initial(inst, 0, vars).empty());
  CHECK(linking_rows_initial(inst, 5, vars).size() == 9);  // capped at m

  const auto rows = linking_rows_initial(inst, 1, vars);
  REQUIRE(rows.size() == 3);
  for (int i = 0; i < 3; ++i) {
    // Each customer's nearest facility is its own location (distance 0).
    CHECK(rows[i].idx == std::vector<int>({vars.x_f1(i, i), vars.y(i)}));
    CHECK(rows[i].val == std::vector<double>({1.0, -1.0}));
    CHECK(rows[i].origin_customer == i);
  }
}

TEST_CASE("linking separation emits the nearest violated facility once") {
  const Instance inst = load_ex1();
  const VarMap vars = build_f1_relaxation(inst, 2, 2).vars;
  std::vector<double> x_star(vars.num_cols(), 0.0);
  std::vector<double> y_star{1.0, 0.3, 0.3, 1.0};
  // Two violations for customer 0: the side corner (distance 1) must win
  // over the diagonal corner (distance sqrt(2)).
  x_star[vars.x_f1(0, 1)] = 0.5;
  x_star[vars.x_f1(0, 2)] = 0.9;

  Rng rng(1);
  const auto rows = separate_linking(inst, x_star, y_star, rng, vars);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].origin_customer == 0);
  CHECK(rows[0].idx == std::vector<int>({vars.x_f1(0, 1), vars.y(1)}));

  // A satisfied point yields nothing.
  Rng rng2(1);
  CHECK(separate_linking(inst, std::vector<double>(vars.num_cols(), 0.0),
                         y_star, rng2, vars)
            .empty());
}

TEST_CASE("linking separation is one row per customer, any scan order") {
  Rng rng(195422);
  const Instance inst = random_metric_instance(rng, 6);
  const VarMap vars = build_f1_relaxation(inst, 3, 2, false).vars;
  std::vector<double> x_star(vars.num_cols(), 0.0);
  std::vector<double> y_star(6, 0.2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) x_star[vars.x_f1(i, j)] = 0.5;

  Rng seed_a(7), seed_b(7), seed_c(99);
  const auto rows_a = separate_linking(inst, x_star, y_star, seed_a, vars);
  const auto rows_b = separate_linking(inst, x_star, y_star, seed_b, vars);
  const auto rows_c = separate_linking(inst, x_star, y_star, seed_c, vars);
  CHECK(rows_a.size() == 6);

  // Same seed: identical output order; any seed: identical per-customer rows.
  REQUIRE(rows_a.size() == rows_b.size());
  for (std::size_t t = 0; t < rows_a.size(); ++t) {
    CHECK(rows_a[t].origin_customer == rows_b[t].origin_customer);
    CHECK(rows_a[t].idx == rows_b[t].idx);
  }
  auto by_customer = [](std::vector<CutRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const CutRow& a, const CutRow& b) {
                return a.origin_customer < b.origin_customer;
              });
    return rows;
  };
  const auto sorted_a = by_customer(rows_a);
  const auto sorted_c = by_customer(rows_c);
  REQUIRE(sorted_a.size() == sorted_c.size());
  for (std::size_t t = 0; t < sorted_a.size(); ++t)
    CHECK(sorted_a[t].idx == sorted_c[t].idx);
}

TEST_CASE("path-graph fixture: closest-assignment rows in subset space") {
  const Instance inst = load_ex3();
  const Relaxation rel = build_f3_relaxation(inst, 2, 2, true);
  const auto rows = closest_assignment_rows(inst, 2, rel.vars);
  REQUIRE(rows.size() == 9);  // one per (customer, facility)

  // Customer 0, facility 1: only the subset {0,2} omits facility 1 and has a
  // farther member (distance 2 > 1).
  const CutRow& row01 = rows[1];
  CHECK(row01.origin_customer == 0);
  CHECK(row01.idx ==
        std::vector<int>({rel.vars.y(1), rel.vars.x_f3(0, 1)}));
  CHECK(row01.rhs == 1.0);

  // Customer 0, facility 2 is the farthest of all: bare y <= 1.
  const CutRow& row02 = rows[2];
  CHECK(row02.idx == std::vector<int>({rel.vars.y(2)}));
}

TEST_CASE("closest-assignment rows hold at optimal subset encodings") {
  Rng rng(206523);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 4 + rng.next_int(4);
    const Instance inst = (trial % 2 == 0)
                              ? random_metric_instance(rng, n)
                              : random_nonmetric_instance(rng, n, true);
    const int alpha = 1 + rng.next_int(3);
    if (alpha >= n) continue;
    const int p = alpha + rng.next_int(n - alpha);
    if (p >= n) continue;
    const auto [opt, best] = brute_force_opt(inst, p, alpha);
    const Relaxation rel = build_f3_relaxation(inst, p, alpha, false);
    CAPTURE(trial);

    // Canonical subset-space encoding of the optimum.
    std::vector<double> point(rel.vars.num_cols(), 0.0);
    for (int j : best.open) point[rel.vars.y(j)] = 1.0;
    for (int i = 0; i < n; ++i) {
      const std::vector<int> a_i = alpha_closest_set(inst, best.open, i, alpha);
      const auto& catalog = rel.vars.subset_catalog;
      const auto it = std::find(catalog.begin(), catalog.end(), a_i);
      REQUIRE(it != catalog.end());
      point[rel.vars.x_f3(i, static_cast<int>(it - catalog.begin()))] = 1.0;
    }

    for (const CutRow& row : closest_assignment_rows(inst, alpha, rel.vars)) {
      double lhs = 0.0;
      for (std::size_t t = 0; t < row.idx.size(); ++t)
        lhs += row.val[t] * point[row.idx[t]];
      CHECK(lhs <= row.rhs + 1e-9);
    }
  }
}

TEST_CASE("layering every family onto the relaxation keeps it sound") {
  Rng rng(217624);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 5 + rng.next_int(3);
    const Instance inst = (trial % 2 == 0)
                              ? random_metric_instance(rng, n)
                              : random_nonmetric_instance(rng, n, true);
    const int alpha = 1 + rng.next_int(2);
    const int p = alpha + 1 + rng.next_int(n - alpha - 1);
    if (p >= n) continue;
    const auto [opt, best] = brute_force_opt(inst, p, alpha);
    CAPTURE(trial);

    Relaxation rel = build_f1_relaxation(inst, p, alpha, true);
    const double base = [&] {
      LpSolution s = lp_solve(rel.model);
      REQUIRE(s.status == LpStatus::Optimal);
      return s.objective_value;
    }();

    SimplexSolver solver(rel.model);
    LpSolution s = solver.solve();
    REQUIRE(s.status == LpStatus::Optimal);

    // Fixings enter as bounds, every row family via append.
    for (auto [i, j] : remoteness_fixings(inst, p, alpha))
      solver.set_var_bounds(rel.vars.x_f1(i, j), 0.0, 0.0);
    for (auto [i, j] : upper_bound_fixings(inst, alpha, opt))
      solver.set_var_bounds(rel.vars.x_f1(i, j), 0.0, 0.0);

    std::vector<LpRow> extra;
    for (const CutRow& row : simple_ub_rows(inst, alpha, opt, rel.vars))
      extra.push_back(row.to_lp_row());
    for (const CutRow& row :
         general_ub_rows(inst, alpha, opt, s.primal, 50, rel.vars))
      extra.push_back(row.to_lp_row());
    Rng sep_rng(rng.fork_seed());
    std::vector<double> y_star(n);
    for (int j = 0; j < n; ++j) y_star[j] = s.primal[rel.vars.y(j)];
    for (const CutRow& row :
         separate_linking(inst, s.primal, y_star, sep_rng, rel.vars))
      extra.push_back(row.to_lp_row());
    const double lb = 0.5 * opt;
    for (int i = 0; i < n; ++i) {
      std::vector<double> x_i(n);
      for (int j = 0; j < n; ++j) x_i[j] = s.primal[rel.vars.x_f1(i, j)];
      auto cut = separate_lifted(inst, i, alpha, x_i, s.primal[rel.vars.z()],
                                 lb, opt);
      if (!cut) continue;
      LpRow row;
      row.rel = Rel::LE;
      row.rhs = 0.0;
      for (int j = 0; j < n; ++j)
        if (cut->w[j] != 0.0) {
          row.idx.push_back(rel.vars.x_f1(i, j));
          row.val.push_back(cut->w[j]);
        }
      row.idx.push_back(rel.vars.z());
      row.val.push_back(-1.0);
      extra.push_back(std::move(row));
    }
    solver.append_rows(extra);

    LpSolution strengthened = solver.solve();
    REQUIRE(strengthened.status == LpStatus::Optimal);
    // Never lower than the plain relaxation, never above the optimum.
    CHECK(strengthened.objective_value >= base - 1e-9);
    CHECK(strengthened.objective_value <= opt + 1e-6);
  }
}
