#pragma once

#include <utility>
#include <vector>

#include "paccp/formulations.hpp"
#include "paccp/instance.hpp"
#include "paccp/lp.hpp"
#include "paccp/rng.hpp"

namespace paccp {

// Inequality families layered onto the relaxations by the branch-and-cut
// driver.  Fixing/SimpleUB/GeneralUB/ClosestAssign rows are
// optimality-preserving (some optimal solution satisfies them; the UB-derived
// ones are satisfied by every optimal solution), Linking and Lifted rows are
// valid for all feasible solutions.

enum class CutFamily { Fixing, Linking, SimpleUB, GeneralUB, Lifted, ClosestAssign };

// One sparse row over the columns of the active VarMap.
struct CutRow {
  CutFamily family = CutFamily::Linking;
  std::vector<int> idx;
  std::vector<double> val;
  Rel rel = Rel::LE;
  double rhs = 0.0;
  int origin_customer = -1;  // -1 when not tied to a customer

  LpRow to_lp_row() const { return LpRow{idx, val, rel, rhs}; }
};

// Assignments that can be dropped without losing every optimum: for each
// customer the p - alpha farthest facilities (ties by larger distance, then
// smaller id; exactly one set per customer).  Empty when p == alpha.
std::vector<std::pair<int, int>> remoteness_fixings(const Instance& inst,
                                                    int p, int alpha);

// (i, j) pairs with min over A containing j of d_iA above ub, computed as
// d_ij plus the alpha-1 smallest distances to the other facilities.  Every
// optimal solution avoids these assignments.
std::vector<std::pair<int, int>> upper_bound_fixings(const Instance& inst,
                                                     int alpha, double ub);

// Rows sum_{j: d_ij > ub/beta} x_ij <= beta - 1 for beta in 2..alpha, one per
// customer and beta with a nonempty facility set.  beta = 1 is covered by
// upper_bound_fixings.
std::vector<CutRow> simple_ub_rows(const Instance& inst, int alpha, double ub,
                                   const VarMap& vars);

// Greedy separation of the general rows sum_{j in C} x_ij <= beta - 1, where
// every beta-subset of C forces the customer's assignment sum above ub.
// Facilities enter C in decreasing x* order; at most one row per customer
// (first violated beta wins), at most max_rows rows.  x_star is indexed by
// vars (the F1 layout); `eligible`, when given, masks customers per index.
std::vector<CutRow> general_ub_rows(const Instance& inst, int alpha, double ub,
                                    const std::vector<double>& x_star,
                                    int max_rows, const VarMap& vars,
                                    const std::vector<char>* eligible = nullptr);

// x_ij <= y_j for each customer's k closest facilities (distance order, ties
// by id).
std::vector<CutRow> linking_rows_initial(const Instance& inst, int k,
                                         const VarMap& vars);

// Scans customers in a seeded random order; per customer, emits the linking
// row of the nearest facility whose x*_ij exceeds y*_j by more than the
// violation tolerance.  x_star is indexed by vars, y_star by facility id.
std::vector<CutRow> separate_linking(const Instance& inst,
                                     const std::vector<double>& x_star,
                                     const std::vector<double>& y_star,
                                     Rng& rng, const VarMap& vars,
                                     const std::vector<char>* eligible = nullptr);

// Subset-space closest-assignment rows
//   y_j + sum_{A: j not in A, d_ij < max_{j' in A} d_ij'} x_iA <= 1
// for every customer and facility; vars must describe an F3-family model.
std::vector<CutRow> closest_assignment_rows(const Instance& inst, int alpha,
                                            const VarMap& vars);

}  // namespace paccp
