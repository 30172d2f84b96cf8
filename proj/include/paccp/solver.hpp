#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "paccp/core.hpp"
#include "paccp/cuts.hpp"
#include "paccp/formulations.hpp"
#include "paccp/instance.hpp"
#include "paccp/lp.hpp"
#include "paccp/rng.hpp"

// Exact branch-and-cut on the per-facility assignment relaxation.  A node's
// bound comes from a shared incremental LP strengthened by four separation
// steps (fixings when the upper bound improves, linking rows, simple/general
// upper-bound rows, lifted rows at the root); integral openings are evaluated
// in closed form and branching happens on the most fractional opening
// variable.

namespace paccp {

// Cumulative feature levels: each setting includes everything below it.
//   S1    plain model, no heuristics, no fixings, no separation
//   S1H   + start/primal heuristics and distance-based variable fixings
//   S1HS  + linking-row separation (sparse initial linking)
//   S1HSL + upper-bound rows and root-node lifted rows
enum class BncSetting { S1, S1H, S1HS, S1HSL };

struct BncConfig {
  int num_start_heur_runs = 10;
  int num_initial_cuts = 100;   // closest linking rows kept per customer
  int max_num_sep_root = 150;   // separation rounds at the root
  int max_num_sep_tree = 5;     // separation rounds per tree node
  int max_no_improvements = 5;  // tail-off rounds before separation stops
  int max_num_cuts_tree = 50;   // row budget per tree-node round
  int num_lifted_customers = 20;
  double time_limit_s = 1800.0;
  std::uint64_t seed = 0;
  BncSetting setting = BncSetting::S1HSL;
};

enum class SolveStatus { Optimal, TimeLimit, Infeasible };

struct RunReport {
  SolveStatus status = SolveStatus::TimeLimit;
  double upper_bound = std::numeric_limits<double>::infinity();
  double lower_bound = 0.0;
  double root_lb = 0.0;
  double wall_time_s = 0.0;
  Solution incumbent;       // empty open set when no solution was found
  long long nodes = 0;      // tree nodes processed beyond the root
  int cuts_linking = 0;     // separated linking rows (incl. leaf repairs)
  int cuts_ub = 0;          // simple + general upper-bound rows
  int cuts_lifted = 0;
  int fixings = 0;          // assignment variables pinned to zero
};

// Rows/fixings produced by one pass of the four separation steps at a single
// LP point.  `lifted_lb` carries the bound the root lifted step rounded up
// to (NaN when the step did not run); the caller owns pushing it into the
// model as a lower bound on the objective variable.
struct SeparationOutcome {
  std::vector<CutRow> rows;
  std::vector<std::pair<int, int>> new_fixings;
  double lifted_lb = std::numeric_limits<double>::quiet_NaN();
};

// One separation round over an Optimal LP solution.  At most one row or
// fixing per customer; step order fixings -> linking -> simple/general ->
// lifted, with the steps enabled by config.setting, `ub_improved` gating the
// two bound-driven steps, and `at_root` gating the lifted step.  Non-root
// rounds respect config.max_num_cuts_tree.  `fixed_mask` (customer-major
// n*m) records already-fixed pairs and is updated in place.  `alpha_set`,
// when given, is the sorted distinct attainable alpha-distance list used to
// round the lifted-step bound upward.
SeparationOutcome separation_round(const Instance& inst, int alpha,
                                   const LpSolution& sol, const VarMap& vars,
                                   double lb, double ub, bool ub_improved,
                                   bool at_root, const BncConfig& config,
                                   Rng& rng, std::vector<char>& fixed_mask,
                                   const std::vector<double>* alpha_set);

// Closed-form evaluation of an integral opening vector: the facilities with
// y > 0.5 are the open set, served optimally by alpha-closest assignment.
// Throws unless the vector has m entries; the open count becomes the p of the
// returned solution.
std::pair<double, Solution> evaluate_leaf(const Instance& inst,
                                          const std::vector<double>& y,
                                          int alpha);

// Most fractional opening variable (min |y_j - 0.5|, ties to the lowest id).
// Throws when every entry is integral within the integrality tolerance.
int branch_select(const std::vector<double>& y);

RunReport solve(const Instance& inst, int p, int alpha,
                const BncConfig& config);

}  // namespace paccp
