#pragma once

// Central numeric tolerances and enumeration budgets. Every magic constant in
// the solver suite lives here so that tests and production code agree on the
// exact values.

namespace paccp {

// --- LP kernel -------------------------------------------------------------
// Reduced-cost / pivot-element cutoff: entries smaller than this are treated
// as zero during pricing and ratio tests.
inline constexpr double kPivotTol = 1e-9;
// Primal feasibility tolerance on basic variable bounds and row activity.
inline constexpr double kFeasTol = 1e-6;
// Relative strong-duality gap accepted on an Optimal result.
inline constexpr double kDualityTol = 1e-6;
// Number of consecutive degenerate pivots before switching to Bland's rule.
inline constexpr int kDegeneratePivotLimit = 1000;
// Basis refactorisation interval (pivot count).
inline constexpr int kRefactorInterval = 100;
// Hard cap on simplex iterations per solve (scaled by model size at run time).
inline constexpr long kIterLimitFloor = 20000;
// Dual feasibility tolerance on reduced-cost signs; gates the warm-start
// dual-simplex repair path.
inline constexpr double kDualFeasTol = 1e-7;
// Pivot budget for one dual-simplex repair pass (scaled by row count at run
// time); on exhaustion the primal loop takes over from the partial progress.
inline constexpr long kDualIterFloor = 1000;
// Relative cost perturbation applied to nonbasic columns during the dual
// repair pass.  Breaks the massive dual-degenerate plateaus caused by the
// all-but-one-zero objective; small enough that the primal clean-up against
// the true costs stays within the certification tolerances.
inline constexpr double kDualPerturb = 1e-10;

// --- Cuts, separation, rounding -------------------------------------------
// Absolute violation required before a row is emitted by any separator.
inline constexpr double kViolationTol = 1e-6;
// Integrality tolerance on y variables.
inline constexpr double kIntegralityTol = 1e-6;

// Relative tolerance for objective-value comparisons in the search tree:
// a node whose bound reaches UB - kObjectiveRelTol*(1+|UB|) is pruned, and
// rounding a bound into the attainable-value set allows the same relative
// slack downward so LP certification noise never rounds past the optimum.
inline constexpr double kObjectiveRelTol = 1e-6;
// Slack above which a pool row counts as inactive at a node LP solve.
inline constexpr double kPoolSlackTol = 1e-4;
// Consecutive inactive node solves before a pool row is deactivated.
inline constexpr int kPoolMissLimit = 10;
// Lower-bound gain per separation round below which the round counts as a
// non-improvement (tailing-off detection).
inline constexpr double kTailOffThreshold = 1e-4;

// --- Lifting ---------------------------------------------------------------
// Dedup tolerance for members of the alpha-distance set D^alpha.
inline constexpr double kAlphaDistanceDedupTol = 1e-9;
// Relative fixpoint tolerance: |L(LB) - LB| <= kFixpointTol * (1 + LB).
inline constexpr double kFixpointTol = 1e-9;

// --- Enumeration budgets ---------------------------------------------------
// Brute-force optimum: refuse instances with more facilities than this.
inline constexpr int kBruteForceMaxM = 16;
// Subset formulations (F3 family): refuse when C(m, alpha) exceeds this
// per-customer column budget.
inline constexpr long kSubsetBudget = 50000;
// Greedy coefficient completion: exact minimum over B enumerated while
// C(m-1, alpha-1) stays within this budget; beyond it the partial vector is
// zero-extended, which is always valid (weaker cut, never an invalid one).
inline constexpr long kCompletionExactBudget = 10000;
// Lifted-inequality separation looks at no more than this many support
// facilities (the largest x* entries); keeps the pattern LP small.
inline constexpr int kLiftedSupportCap = 40;
// Full D^alpha enumeration (n * C(m, alpha) values) allowed up to this size;
// above it the lower-bound rounding step is disabled.
inline constexpr long kAlphaDistanceSetBudget = 5000000;
// F1 builder includes all n*m linking rows by default up to this size.
inline constexpr long kAllLinkingBudget = 40000;

}  // namespace paccp
