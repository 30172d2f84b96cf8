#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "paccp/instance.hpp"

namespace paccp {

// Lower-bound lifting machinery.  A valid lower bound LB on the optimal
// objective lets the subset-formulation z-rows be strengthened from
// coefficient d_iA to max{LB, d_iA}; the resulting LP bound L(LB) is itself a
// valid lower bound and is >= LB.  Iterating this map over the alpha-distance
// set D^alpha yields the sharp fixpoint bound LB#.

enum class LiftVariant {
  L3,   // per-element linking (x_iA <= y_j for every j in A)
  L3V,  // aggregated linking  (sum_{A containing j} x_iA <= y_j)
  L1,   // assignment-variable space, strengthened by lifted cutting planes
};

// One lifted inequality  sum_j w_j x_ij <= z  for a single customer.
// Validity: for every alpha-subset A with d_iA <= ub_used,
//   sum_{j in A} w_j <= max{lb_used, d_iA}.
// Coefficients returned by separate_lifted satisfy the stronger ub = +inf
// form, so the row stays valid when the incumbent improves.
struct LiftedCoefficients {
  int customer = -1;
  std::vector<double> w;  // size m, completed over all facilities
  double lb_used = 0.0;
  double ub_used = 0.0;
  double separation_value = 0.0;  // optimum of the separation LP
};

struct LbSharpResult {
  double value = 0.0;
  int iterations = 0;  // number of lifted LP evaluations performed
};

// LP value of the lifted subset relaxation with z-row coefficients
// max{lb, d_iA}.  variant selects the linking style (L3 or L3V; L1 throws).
// Result is >= lb whenever lb >= 0 and is a valid lower bound whenever lb is.
double lifted_lp_value(const Instance& inst, int p, int alpha, double lb,
                       LiftVariant variant);

// Facility-availability set-cover LP: minimum total facility mass needed so
// that every customer has one unit of cover among alpha-subsets A with
// d_iA <= lb.  Returns +infinity when some customer has no such subset.
// L(lb) == lb  if and only if  fasc_value(lb) <= p  (per variant).
double fasc_value(const Instance& inst, int alpha, double lb,
                  LiftVariant variant);

// Smallest member of the sorted alpha-distance set that is >= v - 1e-9.
// Second element is false when v exceeds every member (v returned unchanged).
std::pair<double, bool> next_alpha_distance(const std::vector<double>& d_sorted,
                                            double v);

// Iterated lifting bound LB# for the subset formulations: start from the
// smallest alpha-distance, evaluate the lifted LP, round the value up to the
// next member of D^alpha, repeat until L(LB) == LB.  variant must be L3 or
// L3V.  The result is a member of D^alpha and a valid lower bound.
LbSharpResult compute_lb_sharp(const Instance& inst, int p, int alpha,
                               LiftVariant variant);

// Same fixpoint computed in the assignment-variable space: each evaluation
// solves the F1 relaxation strengthened by lifted rows found with
// separate_lifted until no violated row remains.  Equals the L3V bound.
LbSharpResult compute_lb_sharp_1(const Instance& inst, int p, int alpha);

// Find a lifted inequality for customer i violated by the fractional point
// (x_star_i, z_star), or nullopt when none exists.  The separation LP works
// on the support of x_star_i (largest entries first, capped) and its rows are
// grouped by support pattern; the returned vector is completed over all
// facilities and is valid for every lower bound lb' >= lb.
std::optional<LiftedCoefficients> separate_lifted(
    const Instance& inst, int i, int alpha, const std::vector<double>& x_star_i,
    double z_star, double lb, double ub);

// Greedy completion of a partial coefficient vector given on `support` to a
// full vector in S_i(lb): off-support facilities are processed in order of
// increasing distance and each receives the largest coefficient that keeps
// every alpha-subset constraint satisfied (floored at zero).  Exact while
// C(m-1, alpha-1) <= kCompletionExactBudget; beyond that the partial vector
// is zero-extended.
std::vector<double> complete_coefficients(const Instance& inst, int i,
                                          const std::vector<int>& support,
                                          const std::vector<double>& w_support,
                                          int alpha, double lb);

}  // namespace paccp
