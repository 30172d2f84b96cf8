#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

// Self-contained linear-programming kernel: a bounded-variable revised
// simplex (product form of the inverse) with incremental row addition and
// warm starts.  Every relaxation, lifting LP, and separation LP in the suite
// runs through this kernel.

namespace paccp {

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

enum class Rel { LE, EQ, GE };

// One linear constraint: sparse coefficients REL rhs.
struct LpRow {
  std::vector<int> idx;
  std::vector<double> val;
  Rel rel = Rel::LE;
  double rhs = 0.0;
};

// A bounded-variable LP in row form.  Objective sense is minimize.
struct LpModel {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<LpRow> rows;

  // Appends a variable, returns its column index.
  int add_var(double lb, double ub, double obj_coeff) {
    objective.push_back(obj_coeff);
    lo.push_back(lb);
    hi.push_back(ub);
    return num_vars++;
  }
  void add_row(LpRow row);  // validates indices
};

struct LpSolution {
  LpStatus status = LpStatus::IterLimit;
  double objective_value = 0.0;
  std::vector<double> primal;  // one entry per structural variable
  // Row multipliers: with a minimize objective, a binding >= row carries a
  // non-negative dual, a binding <= row a non-positive one.
  std::vector<double> dual;
};

// Pure append of rows (spec'd convenience; the incremental path lives in
// SimplexSolver::append_rows).
LpModel add_rows(const LpModel& model, const std::vector<LpRow>& new_rows);

// Cold solve of a model.
LpSolution lp_solve(const LpModel& model);

// Plain-text export for external cross-checking.  Layout: "min c0 x0 + ...",
// one "r<k>: a x<i> ... <= rhs" line per row, then "bounds" lines
// "lo <= x<i> <= hi".
void write_lp_text(const LpModel& model, std::ostream& out);

// Revised simplex engine holding a model plus basis state across solves.
// Usage pattern in the branch-and-cut driver: mutate bounds / append rows /
// relax pool rows, then call solve() to re-optimize from the previous basis.
class SimplexSolver {
 public:
  explicit SimplexSolver(LpModel model);

  const LpModel& model() const { return model_; }

  // Bound change on a structural variable (used for branching and fixings).
  void set_var_bounds(int j, double lb, double ub);
  // Appends constraint rows; the existing basis is kept and extended with the
  // new slacks.
  void append_rows(const std::vector<LpRow>& rows);
  // Deactivates a row by freeing its slack (the row stops binding) and
  // reactivates it later; used by the cut pool.
  void relax_row(int r);
  void restore_row(int r);
  bool row_active(int r) const { return row_active_[r]; }

  // Re-optimizes, warm-starting from the current basis when one exists.
  LpSolution solve();

  // Row activity a·x of row r at the last Optimal solution.
  double row_activity(int r) const;

 private:
  struct Eta {  // one elementary transform of the product-form inverse
    int row = 0;
    double pivot = 0.0;
    std::vector<std::pair<int, double>> others;
  };
  enum class VarState : unsigned char { Basic, AtLower, AtUpper, Free };

  int ncols() const { return num_struct_ + num_rows(); }
  int num_rows() const { return static_cast<int>(model_.rows.size()); }
  double col_lo(int c) const;
  double col_hi(int c) const;
  double col_obj(int c) const { return c < num_struct_ ? model_.objective[c] : 0.0; }

  void build_columns();
  void set_default_nonbasic(int c);
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  void refactorize();
  void compute_basic_values();
  double infeasibility_sum() const;
  bool below_lo(double x, double l) const;
  bool above_hi(double x, double h) const;
  bool any_bound_violation() const;
  long run_dual_simplex(long budget);
  LpSolution run_simplex();
  LpSolution finalize(LpStatus status);

  LpModel model_;
  int num_struct_ = 0;

  // Sparse columns of the structural part (slack columns are implicit).
  std::vector<std::vector<std::pair<int, double>>> cols_;

  std::vector<char> row_active_;
  std::vector<VarState> state_;
  std::vector<double> nb_value_;  // value of each nonbasic column
  std::vector<int> basis_;        // row slot -> column
  std::vector<int> basis_pos_;    // column -> row slot or -1
  std::vector<double> xb_;        // basic values by row slot
  std::vector<Eta> etas_;
  bool factor_valid_ = false;
  bool values_valid_ = false;
  int pivots_since_refactor_ = 0;
  std::vector<double> last_primal_;  // full column values at last optimum
};

}  // namespace paccp
