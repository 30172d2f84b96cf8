#include "paccp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "paccp/tolerances.hpp"

namespace paccp {

void LpModel::add_row(LpRow row) {
  if (row.idx.size() != row.val.size())
    throw std::invalid_argument("row index/value size mismatch");
  // Canonicalize: sort by column, merge duplicates, drop zeros.
  std::map<int, double> merged;
  for (size_t t = 0; t < row.idx.size(); ++t) {
    const int j = row.idx[t];
    if (j < 0 || j >= num_vars)
      throw std::invalid_argument("row references invalid column " +
                                  std::to_string(j));
    merged[j] += row.val[t];
  }
  row.idx.clear();
  row.val.clear();
  for (auto [j, v] : merged)
    if (v != 0.0) {
      row.idx.push_back(j);
      row.val.push_back(v);
    }
  rows.push_back(std::move(row));
}

LpModel add_rows(const LpModel& model, const std::vector<LpRow>& new_rows) {
  LpModel out = model;
  for (const LpRow& row : new_rows) out.add_row(row);
  return out;
}

LpSolution lp_solve(const LpModel& model) {
  SimplexSolver solver(model);
  return solver.solve();
}

void write_lp_text(const LpModel& model, std::ostream& out) {
  out << "min";
  for (int j = 0; j < model.num_vars; ++j)
    if (model.objective[j] != 0.0)
      out << " " << (model.objective[j] >= 0 ? "+ " : "- ")
          << std::abs(model.objective[j]) << " x" << j;
  out << "\nsubject to\n";
  for (size_t r = 0; r < model.rows.size(); ++r) {
    const LpRow& row = model.rows[r];
    out << "r" << r << ":";
    for (size_t t = 0; t < row.idx.size(); ++t)
      out << " " << (row.val[t] >= 0 ? "+ " : "- ") << std::abs(row.val[t])
          << " x" << row.idx[t];
    const char* rel = row.rel == Rel::LE ? "<=" : row.rel == Rel::EQ ? "=" : ">=";
    out << " " << rel << " " << row.rhs << "\n";
  }
  out << "bounds\n";
  for (int j = 0; j < model.num_vars; ++j) {
    if (model.lo[j] == -kLpInf)
      out << "-inf";
    else
      out << model.lo[j];
    out << " <= x" << j << " <= ";
    if (model.hi[j] == kLpInf)
      out << "inf";
    else
      out << model.hi[j];
    out << "\n";
  }
  out << "end\n";
}

// ---------------------------------------------------------------------------
// SimplexSolver

SimplexSolver::SimplexSolver(LpModel model) : model_(std::move(model)) {
  num_struct_ = model_.num_vars;
  if (static_cast<int>(model_.objective.size()) != num_struct_ ||
      static_cast<int>(model_.lo.size()) != num_struct_ ||
      static_cast<int>(model_.hi.size()) != num_struct_)
    throw std::invalid_argument("model vectors inconsistent with num_vars");
  for (int j = 0; j < num_struct_; ++j)
    if (model_.lo[j] > model_.hi[j])
      throw std::invalid_argument("variable " + std::to_string(j) +
                                  " has lo > hi");
  build_columns();

  const int R = num_rows();
  row_active_.assign(R, 1);
  state_.assign(ncols(), VarState::AtLower);
  nb_value_.assign(ncols(), 0.0);
  basis_.resize(R);
  basis_pos_.assign(ncols(), -1);
  for (int j = 0; j < num_struct_; ++j) set_default_nonbasic(j);
  // Start from the all-slack basis.
  for (int r = 0; r < R; ++r) {
    const int c = num_struct_ + r;
    basis_[r] = c;
    basis_pos_[c] = r;
    state_[c] = VarState::Basic;
  }
  xb_.assign(R, 0.0);
}

void SimplexSolver::build_columns() {
  cols_.assign(num_struct_, {});
  for (int r = 0; r < num_rows(); ++r) {
    const LpRow& row = model_.rows[r];
    for (size_t t = 0; t < row.idx.size(); ++t)
      cols_[row.idx[t]].emplace_back(r, row.val[t]);
  }
}

double SimplexSolver::col_lo(int c) const {
  if (c < num_struct_) return model_.lo[c];
  const int r = c - num_struct_;
  if (!row_active_[r]) return -kLpInf;
  return model_.rows[r].rel == Rel::GE ? -kLpInf : 0.0;
}

double SimplexSolver::col_hi(int c) const {
  if (c < num_struct_) return model_.hi[c];
  const int r = c - num_struct_;
  if (!row_active_[r]) return kLpInf;
  return model_.rows[r].rel == Rel::LE ? kLpInf : 0.0;
}

void SimplexSolver::set_default_nonbasic(int c) {
  const double l = col_lo(c), h = col_hi(c);
  if (l > -kLpInf) {
    state_[c] = VarState::AtLower;
    nb_value_[c] = l;
  } else if (h < kLpInf) {
    state_[c] = VarState::AtUpper;
    nb_value_[c] = h;
  } else {
    state_[c] = VarState::Free;
    nb_value_[c] = 0.0;
  }
}

void SimplexSolver::set_var_bounds(int j, double lb, double ub) {
  if (j < 0 || j >= num_struct_)
    throw std::invalid_argument("set_var_bounds: bad column");
  if (lb > ub) throw std::invalid_argument("set_var_bounds: lo > hi");
  model_.lo[j] = lb;
  model_.hi[j] = ub;
  if (state_[j] != VarState::Basic) {
    if (state_[j] == VarState::AtUpper && ub < kLpInf)
      nb_value_[j] = ub;
    else if (state_[j] == VarState::AtLower && lb > -kLpInf)
      nb_value_[j] = lb;
    else
      set_default_nonbasic(j);
  }
  values_valid_ = false;
}

void SimplexSolver::append_rows(const std::vector<LpRow>& rows) {
  for (const LpRow& row : rows) model_.add_row(row);
  const int R = num_rows();
  const int old_R = R - static_cast<int>(rows.size());
  for (int r = old_R; r < R; ++r) {
    const LpRow& row = model_.rows[r];
    for (size_t t = 0; t < row.idx.size(); ++t)
      cols_[row.idx[t]].emplace_back(r, row.val[t]);
    row_active_.push_back(1);
    const int c = num_struct_ + r;
    // Column indices of pre-existing slacks are unchanged; the new slack
    // lands at the tail and starts basic.
    state_.push_back(VarState::Basic);
    nb_value_.push_back(0.0);
    basis_.push_back(c);
    basis_pos_.push_back(r);
    xb_.push_back(0.0);
  }
  factor_valid_ = false;
  values_valid_ = false;
}

void SimplexSolver::relax_row(int r) {
  if (!row_active_[r]) return;
  row_active_[r] = 0;
  const int c = num_struct_ + r;
  if (state_[c] != VarState::Basic) {
    state_[c] = VarState::Free;
    nb_value_[c] = 0.0;
  }
  values_valid_ = false;
}

void SimplexSolver::restore_row(int r) {
  if (row_active_[r]) return;
  row_active_[r] = 1;
  const int c = num_struct_ + r;
  if (state_[c] != VarState::Basic) set_default_nonbasic(c);
  values_valid_ = false;
}

void SimplexSolver::ftran(std::vector<double>& v) const {
  for (const Eta& e : etas_) {
    const double t = v[e.row];
    if (t == 0.0) continue;
    const double piv = t / e.pivot;
    v[e.row] = piv;
    for (const auto& [i, val] : e.others) v[i] -= val * piv;
  }
}

void SimplexSolver::btran(std::vector<double>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (const auto& [i, val] : it->others) s -= v[i] * val;
    v[it->row] = s / it->pivot;
  }
}

void SimplexSolver::refactorize() {
  const int R = num_rows();
  etas_.clear();
  std::vector<char> row_done(R, 0);
  std::vector<int> new_basis(R, -1);

  // Pass 1: basic slacks pivot trivially on their own row (identity etas,
  // skipped entirely).
  std::vector<int> structural;
  for (int r = 0; r < R; ++r) {
    const int c = basis_[r];
    if (c >= num_struct_) {
      const int own = c - num_struct_;
      if (!row_done[own]) {
        new_basis[own] = c;
        row_done[own] = 1;
        continue;
      }
    }
    structural.push_back(c);
  }

  // Pass 2: remaining basis columns, sparsest first.
  std::sort(structural.begin(), structural.end(), [&](int a, int b) {
    const size_t na = a < num_struct_ ? cols_[a].size() : 1;
    const size_t nb = b < num_struct_ ? cols_[b].size() : 1;
    return na != nb ? na < nb : a < b;
  });
  std::vector<double> work(R);
  std::vector<int> dropped;
  for (int c : structural) {
    std::fill(work.begin(), work.end(), 0.0);
    if (c < num_struct_)
      for (const auto& [r, val] : cols_[c]) work[r] = val;
    else
      work[c - num_struct_] = 1.0;
    ftran(work);
    int pivot_row = -1;
    double best = 1e-11;
    for (int r = 0; r < R; ++r)
      if (!row_done[r] && std::abs(work[r]) > best) {
        best = std::abs(work[r]);
        pivot_row = r;
      }
    if (pivot_row < 0) {  // dependent column: demote to nonbasic
      dropped.push_back(c);
      continue;
    }
    Eta e;
    e.row = pivot_row;
    e.pivot = work[pivot_row];
    for (int r = 0; r < R; ++r)
      if (r != pivot_row && work[r] != 0.0) e.others.emplace_back(r, work[r]);
    etas_.push_back(std::move(e));
    new_basis[pivot_row] = c;
    row_done[pivot_row] = 1;
  }

  // Rank repair: unpivoted rows take their own slack back; dropped columns
  // leave the basis.
  for (int c : dropped) {
    state_[c] = VarState::AtLower;  // placeholder, fixed below
    set_default_nonbasic(c);
    basis_pos_[c] = -1;
  }
  for (int r = 0; r < R; ++r) {
    if (row_done[r]) continue;
    const int c = num_struct_ + r;
    if (state_[c] != VarState::Basic) {
      // The slack was nonbasic; make it basic (identity pivot, no eta).
      state_[c] = VarState::Basic;
    } else if (basis_pos_[c] >= 0 && new_basis[basis_pos_[c]] == c) {
      // Already placed elsewhere -- cannot happen for slacks (own-row pivot
      // has priority), but keep the guard.
    }
    new_basis[r] = c;
    row_done[r] = 1;
  }
  basis_ = new_basis;
  for (int r = 0; r < R; ++r) basis_pos_[basis_[r]] = r;
  pivots_since_refactor_ = 0;
  factor_valid_ = true;
  values_valid_ = false;
}

void SimplexSolver::compute_basic_values() {
  const int R = num_rows();
  std::vector<double> work(R);
  for (int r = 0; r < R; ++r) work[r] = model_.rows[r].rhs;
  for (int c = 0; c < ncols(); ++c) {
    if (state_[c] == VarState::Basic) continue;
    const double v = nb_value_[c];
    if (v == 0.0) continue;
    if (c < num_struct_)
      for (const auto& [r, val] : cols_[c]) work[r] -= val * v;
    else
      work[c - num_struct_] -= v;
  }
  ftran(work);
  xb_ = std::move(work);
  values_valid_ = true;
}

double SimplexSolver::infeasibility_sum() const {
  double sum = 0.0;
  for (int r = 0; r < num_rows(); ++r) {
    const int c = basis_[r];
    const double x = xb_[r];
    const double l = col_lo(c), h = col_hi(c);
    if (x < l) sum += l - x;
    if (x > h) sum += x - h;
  }
  return sum;
}

// A basic variable counts as bound-violated only beyond the same relative
// tolerance the final certification uses.  Phase detection, phase-1 costs,
// and the ratio test must all share this predicate: a mismatch (e.g. summing
// raw sub-tolerance noise across thousands of rows) can enter phase 1 with
// nothing to price and misreport a feasible basis as Infeasible.
bool SimplexSolver::below_lo(double x, double l) const {
  return x < l - kFeasTol * (1.0 + std::abs(x));
}

bool SimplexSolver::above_hi(double x, double h) const {
  return x > h + kFeasTol * (1.0 + std::abs(x));
}

bool SimplexSolver::any_bound_violation() const {
  for (int r = 0; r < num_rows(); ++r) {
    const int c = basis_[r];
    if (below_lo(xb_[r], col_lo(c)) || above_hi(xb_[r], col_hi(c)))
      return true;
  }
  return false;
}

double SimplexSolver::row_activity(int r) const {
  const LpRow& row = model_.rows[r];
  double a = 0.0;
  for (size_t t = 0; t < row.idx.size(); ++t)
    a += row.val[t] * last_primal_[row.idx[t]];
  return a;
}

LpSolution SimplexSolver::solve() { return run_simplex(); }

// Best-effort primal-feasibility repair by bounded-variable dual simplex.
// Bound changes, appended rows, and pool toggles all preserve dual
// feasibility of a previously optimal basis (reduced-cost signs depend on
// the nonbasic state labels, not the bound values), so warm re-solves enter
// here with a handful of violated basics and leave primal feasible after
// roughly one pivot per violation -- far cheaper than re-running phase 1.
// Returns the number of pivots performed.  Any numerical oddity, budget
// exhaustion, or dual infeasibility simply returns early; the primal loop
// in run_simplex remains the authoritative, certified path.
long SimplexSolver::run_dual_simplex(long budget) {
  const int R = num_rows();
  const bool dbg = std::getenv("PACCP_DUALDBG") != nullptr;

  // A cold all-slack basis gains nothing from this path.
  bool warm = false;
  for (int r = 0; r < R && !warm; ++r) warm = basis_[r] < num_struct_;
  if (!warm) return 0;

  std::vector<double> y(R), d(ncols(), 0.0), rho(R), w(R), alpha(ncols(), 0.0);
  std::vector<double> pert(ncols(), 0.0);
  struct Cand {  // one eligible breakpoint of the dual ratio test
    int col;
    double ratio;
    double mag;  // |alpha|
  };
  std::vector<Cand> cands;

  // Reduced costs of the working (perturbed) objective; false if any
  // nonbasic has the wrong sign for its state.  At the entry call the
  // perturbation is still zero, so that call gates on true-cost dual
  // feasibility (if it fails, the primal loop must take over).
  const auto price_all = [&]() -> bool {
    std::fill(y.begin(), y.end(), 0.0);
    bool any = false;
    for (int r = 0; r < R; ++r) {
      const double cost = col_obj(basis_[r]) + pert[basis_[r]];
      if (cost != 0.0) {
        y[r] = cost;
        any = true;
      }
    }
    if (any) btran(y);
    for (int c = 0; c < ncols(); ++c) {
      if (state_[c] == VarState::Basic) {
        d[c] = 0.0;
        continue;
      }
      double dc = col_obj(c) + pert[c];
      if (c < num_struct_) {
        for (const auto& [r, val] : cols_[c]) dc -= val * y[r];
      } else {
        dc -= y[c - num_struct_];
      }
      d[c] = dc;
      if (col_lo(c) == col_hi(c)) continue;  // fixed: any sign is fine
      if (state_[c] == VarState::AtLower && dc < -kDualFeasTol) return false;
      if (state_[c] == VarState::AtUpper && dc > kDualFeasTol) return false;
      if (state_[c] == VarState::Free && std::abs(dc) > kDualFeasTol)
        return false;
    }
    return true;
  };
  if (!price_all()) {
    if (dbg) std::fprintf(stderr, "[dual] entry not dual feasible\n");
    return 0;
  }

  // With a one-nonzero objective almost every reduced cost is exactly zero,
  // which makes the dual ratio test massively degenerate.  Perturb each
  // at-bound column's cost by a tiny deterministic amount in the direction
  // that preserves its reduced-cost sign; all breakpoints become distinct
  // and every pivot then makes real dual progress.  The primal loop cleans
  // up the perturbation residue against the true costs afterwards.
  const auto unit_hash = [](unsigned x) {
    x ^= x >> 16;
    x *= 0x7feb352dU;
    x ^= x >> 15;
    x *= 0x846ca68bU;
    x ^= x >> 16;
    return static_cast<double>(x & 0xffffffU) / 16777216.0;  // [0, 1)
  };
  for (int c = 0; c < ncols(); ++c) {
    if (state_[c] == VarState::Basic || state_[c] == VarState::Free) continue;
    if (col_lo(c) == col_hi(c)) continue;
    const double xi = (0.5 + 0.5 * unit_hash(static_cast<unsigned>(c))) *
                      kDualPerturb * (1.0 + std::abs(col_obj(c)));
    pert[c] = state_[c] == VarState::AtLower ? xi : -xi;
    d[c] += pert[c];
  }

  long pivots = 0;
  long dbg_degen = 0, dbg_flips = 0;
  while (pivots < budget) {
    if (pivots_since_refactor_ >= kRefactorInterval) {
      refactorize();
      compute_basic_values();
      if (!price_all()) {
        if (dbg) std::fprintf(stderr, "[dual] drift after refactor, pivots=%ld\n", pivots);
        return pivots;  // drifted; hand over to primal
      }
    }

    // Leaving variable: most violated basic bound (relative tolerance, same
    // predicate as the primal loop's phase detection).
    int leave_slot = -1;
    double worst = 0.0;
    bool leave_low = true;  // departs to its lower bound
    for (int r = 0; r < R; ++r) {
      const int c = basis_[r];
      const double x = xb_[r], l = col_lo(c), h = col_hi(c);
      if (below_lo(x, l) && l - x > worst) {
        worst = l - x;
        leave_slot = r;
        leave_low = true;
      } else if (above_hi(x, h) && x - h > worst) {
        worst = x - h;
        leave_slot = r;
        leave_low = false;
      }
    }
    if (leave_slot < 0) {
      if (dbg)
        std::fprintf(stderr, "[dual] done, pivots=%ld degen=%ld flips=%ld\n",
                     pivots, dbg_degen, dbg_flips);
      return pivots;  // primal feasible: repair complete
    }

    // alpha_j = (B^-1 A_j)[leave_slot] for each candidate column j.
    std::fill(rho.begin(), rho.end(), 0.0);
    rho[leave_slot] = 1.0;
    btran(rho);

    // Bound-flipping dual ratio test.  Walk the eligible breakpoints
    // |d_j / alpha_j| in increasing order; a boxed column whose breakpoint
    // is passed flips to its opposite bound (absorbing |alpha| * range of
    // the violation with no pivot and no eta), and the entering column is
    // the breakpoint at which the residual violation first crosses zero.
    // With every structural column boxed this collapses the long degenerate
    // pivot cascades a textbook one-breakpoint test produces here.
    cands.clear();
    for (int c = 0; c < ncols(); ++c) {
      if (state_[c] == VarState::Basic) continue;
      if (col_lo(c) == col_hi(c)) continue;
      double a = 0.0;
      if (c < num_struct_) {
        for (const auto& [r, val] : cols_[c]) a += val * rho[r];
      } else {
        a = rho[c - num_struct_];
      }
      alpha[c] = a;
      if (std::abs(a) <= kPivotTol) continue;
      bool eligible;
      if (state_[c] == VarState::Free)
        eligible = true;
      else if (leave_low)
        eligible = state_[c] == VarState::AtLower ? a < 0.0 : a > 0.0;
      else
        eligible = state_[c] == VarState::AtLower ? a > 0.0 : a < 0.0;
      if (!eligible) continue;
      cands.push_back({c, std::abs(d[c]) / std::abs(a), std::abs(a)});
    }
    if (cands.empty()) {
      if (dbg) std::fprintf(stderr, "[dual] ray at pivots=%ld\n", pivots);
      return pivots;  // dual ray: let primal certify the outcome
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return a.ratio != b.ratio ? a.ratio < b.ratio : a.mag > b.mag;
    });

    int enter = -1;
    size_t flip_end = 0;  // candidates [0, flip_end) bound-flip
    double remaining = worst;
    for (size_t k = 0; k < cands.size(); ++k) {
      const int c = cands[k].col;
      const double range = col_hi(c) - col_lo(c);
      const double absorb = cands[k].mag * range;  // inf for unboxed columns
      if (absorb >= remaining - kFeasTol) {
        enter = c;
        flip_end = k;
        break;
      }
      remaining -= absorb;
    }
    if (enter < 0) {
      // Violation survives every breakpoint: dual ray beyond the last one.
      if (dbg) std::fprintf(stderr, "[dual] flip ray at pivots=%ld\n", pivots);
      return pivots;
    }

    // w = B^-1 A_enter; its leave_slot entry is the authoritative pivot.
    std::fill(w.begin(), w.end(), 0.0);
    if (enter < num_struct_)
      for (const auto& [r, val] : cols_[enter]) w[r] = val;
    else
      w[enter - num_struct_] = 1.0;
    ftran(w);
    const double pivot = w[leave_slot];
    if (std::abs(pivot) <= kPivotTol) {
      if (pivots_since_refactor_ == 0) return pivots;  // genuinely unstable
      refactorize();
      compute_basic_values();
      if (!price_all()) return pivots;
      continue;
    }

    // Apply the flips: one combined right-hand-side delta, one ftran.
    if (flip_end > 0) {
      std::fill(rho.begin(), rho.end(), 0.0);  // reuse as the rhs delta
      for (size_t k = 0; k < flip_end; ++k) {
        const int c = cands[k].col;
        const bool to_upper = state_[c] == VarState::AtLower;
        const double move =
            (to_upper ? 1.0 : -1.0) * (col_hi(c) - col_lo(c));
        state_[c] = to_upper ? VarState::AtUpper : VarState::AtLower;
        nb_value_[c] = to_upper ? col_hi(c) : col_lo(c);
        if (c < num_struct_)
          for (const auto& [r, val] : cols_[c]) rho[r] += val * move;
        else
          rho[c - num_struct_] += move;
      }
      ftran(rho);
      for (int r = 0; r < R; ++r)
        if (rho[r] != 0.0) xb_[r] -= rho[r];
    }

    // Dual step (clamped so a tolerance-level wrong sign becomes a
    // degenerate step) and reduced-cost update.
    double delta = d[enter] / pivot;
    if (leave_low ? delta > 0.0 : delta < 0.0) delta = 0.0;
    if (std::abs(delta) <= 1e-12) ++dbg_degen;
    dbg_flips += static_cast<long>(flip_end);
    if (delta != 0.0)
      for (int c = 0; c < ncols(); ++c) {
        if (state_[c] == VarState::Basic || c == enter) continue;
        if (col_lo(c) == col_hi(c)) continue;
        d[c] -= delta * alpha[c];
      }

    // Primal step: the leaving basic lands exactly on its violated bound.
    const int leave_col = basis_[leave_slot];
    const double target = leave_low ? col_lo(leave_col) : col_hi(leave_col);
    const double step = (xb_[leave_slot] - target) / pivot;
    if (step != 0.0)
      for (int r = 0; r < R; ++r)
        if (w[r] != 0.0) xb_[r] -= w[r] * step;
    state_[leave_col] = leave_low ? VarState::AtLower : VarState::AtUpper;
    nb_value_[leave_col] = target;
    basis_pos_[leave_col] = -1;
    d[leave_col] = -delta;
    basis_[leave_slot] = enter;
    basis_pos_[enter] = leave_slot;
    xb_[leave_slot] = nb_value_[enter] + step;
    state_[enter] = VarState::Basic;
    d[enter] = 0.0;

    Eta e;
    e.row = leave_slot;
    e.pivot = pivot;
    for (int r = 0; r < R; ++r)
      if (r != leave_slot && w[r] != 0.0) e.others.emplace_back(r, w[r]);
    etas_.push_back(std::move(e));
    ++pivots_since_refactor_;
    ++pivots;
  }
  if (dbg)
    std::fprintf(stderr,
                 "[dual] budget exhausted, pivots=%ld degen=%ld flips=%ld "
                 "infeas=%g\n",
                 pivots, dbg_degen, dbg_flips, infeasibility_sum());
  return pivots;
}

LpSolution SimplexSolver::run_simplex() {
  const int R = num_rows();
  const long max_iters =
      std::max<long>(kIterLimitFloor, 40L * (R + num_struct_));

  if (!factor_valid_) refactorize();
  if (!values_valid_) compute_basic_values();

  // Warm re-solves (bound changes, appended cuts) leave a dual-feasible basis
  // with a few violated basics; repair those cheaply before the primal loop.
  if (any_bound_violation() && !std::getenv("PACCP_NO_DUAL"))
    run_dual_simplex(std::max<long>(kDualIterFloor, 2L * R));

  std::vector<double> y(R), w(R), col(R);
  long iter = 0;
  int degen_run = 0;
  bool bland = false;

  while (true) {
    if (++iter > max_iters) return finalize(LpStatus::IterLimit);
    if (pivots_since_refactor_ >= kRefactorInterval) {
      refactorize();
      compute_basic_values();
    }

    const bool phase1 = any_bound_violation();

    // Pricing vector y = B^-T c_B for the current phase's costs.
    std::fill(y.begin(), y.end(), 0.0);
    bool any_cost = false;
    for (int r = 0; r < R; ++r) {
      const int c = basis_[r];
      double cost;
      if (phase1) {
        const double x = xb_[r], l = col_lo(c), h = col_hi(c);
        cost = below_lo(x, l) ? -1.0 : above_hi(x, h) ? 1.0 : 0.0;
      } else {
        cost = col_obj(c);
      }
      if (cost != 0.0) {
        y[r] = cost;
        any_cost = true;
      }
    }
    if (any_cost) btran(y);

    // Price all nonbasic columns; Dantzig by default, Bland under stalling.
    int enter = -1;
    double enter_d = 0.0;
    double best_score = kPivotTol;
    for (int c = 0; c < ncols(); ++c) {
      if (state_[c] == VarState::Basic) continue;
      const double l = col_lo(c), h = col_hi(c);
      if (l == h) continue;  // fixed, can never move
      double d = phase1 ? 0.0 : col_obj(c);
      if (any_cost) {
        if (c < num_struct_) {
          for (const auto& [r, val] : cols_[c]) d -= val * y[r];
        } else {
          d -= y[c - num_struct_];
        }
      }
      bool eligible = false;
      if (state_[c] == VarState::AtLower)
        eligible = d < -kPivotTol;
      else if (state_[c] == VarState::AtUpper)
        eligible = d > kPivotTol;
      else  // Free
        eligible = std::abs(d) > kPivotTol;
      if (!eligible) continue;
      if (bland) {
        enter = c;
        enter_d = d;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        enter = c;
        enter_d = d;
      }
    }

    if (enter < 0) {
      // Candidate terminal state; confirm on a freshly factorized basis.
      if (pivots_since_refactor_ > 0) {
        refactorize();
        compute_basic_values();
        continue;
      }
      if (phase1) return finalize(LpStatus::Infeasible);

      // Certify before reporting: primal residuals (rows and bounds) and the
      // strong-duality gap must close.  A basis that cannot be certified is
      // reported as IterLimit, never as a silent wrong answer.
      bool certified = true;
      std::vector<double> full(ncols());
      for (int c = 0; c < ncols(); ++c)
        full[c] = state_[c] == VarState::Basic ? xb_[basis_pos_[c]]
                                               : nb_value_[c];
      double obj = 0.0;
      for (int j = 0; j < num_struct_; ++j)
        obj += model_.objective[j] * full[j];
      for (int r = 0; r < R && certified; ++r) {
        const LpRow& row = model_.rows[r];
        double act = 0.0;
        for (size_t t = 0; t < row.idx.size(); ++t)
          act += row.val[t] * full[row.idx[t]];
        if (std::abs(act + full[num_struct_ + r] - row.rhs) >
            kFeasTol * (1.0 + std::abs(row.rhs)))
          certified = false;
      }
      for (int c = 0; c < ncols() && certified; ++c) {
        const double tol = kFeasTol * (1.0 + std::abs(full[c]));
        if (full[c] < col_lo(c) - tol || full[c] > col_hi(c) + tol)
          certified = false;
      }
      if (certified) {
        std::fill(y.begin(), y.end(), 0.0);
        bool any = false;
        for (int r = 0; r < R; ++r) {
          const double cost = col_obj(basis_[r]);
          if (cost != 0.0) {
            y[r] = cost;
            any = true;
          }
        }
        if (any) btran(y);
        double dual_obj = 0.0;
        for (int r = 0; r < R; ++r) dual_obj += y[r] * model_.rows[r].rhs;
        for (int c = 0; c < ncols(); ++c) {
          if (state_[c] == VarState::Basic || nb_value_[c] == 0.0) continue;
          double d = col_obj(c);
          if (c < num_struct_)
            for (const auto& [r, val] : cols_[c]) d -= val * y[r];
          else
            d -= y[c - num_struct_];
          dual_obj += d * nb_value_[c];
        }
        if (std::abs(obj - dual_obj) > kDualityTol * (1.0 + std::abs(obj)))
          certified = false;
      }
      return finalize(certified ? LpStatus::Optimal : LpStatus::IterLimit);
    }

    const int dir = (state_[enter] == VarState::AtUpper ||
                     (state_[enter] == VarState::Free && enter_d > 0))
                        ? -1
                        : 1;

    // w = B^-1 A_enter.
    std::fill(w.begin(), w.end(), 0.0);
    if (enter < num_struct_)
      for (const auto& [r, val] : cols_[enter]) w[r] = val;
    else
      w[enter - num_struct_] = 1.0;
    ftran(w);

    // Ratio test: smallest step at which a basic variable blocks (phase 1
    // lets infeasible basics run to their violated bound) or the entering
    // variable reaches its opposite bound.
    double t_limit = kLpInf;
    int leave_slot = -1;
    int leave_to_upper = 0;
    for (int r = 0; r < R; ++r) {
      if (std::abs(w[r]) <= kPivotTol) continue;
      const double delta = -dir * w[r];  // d x_B[r] / d t
      const int c = basis_[r];
      const double l = col_lo(c), h = col_hi(c), x = xb_[r];
      double t_r = kLpInf;
      int to_upper = 0;
      if (phase1 && below_lo(x, l)) {
        if (delta > 0) t_r = (l - x) / delta;
      } else if (phase1 && above_hi(x, h)) {
        if (delta < 0) {
          t_r = (x - h) / (-delta);
          to_upper = 1;
        }
      } else if (delta < 0) {
        if (l > -kLpInf) t_r = (x - l) / (-delta);
      } else {
        if (h < kLpInf) {
          t_r = (h - x) / delta;
          to_upper = 1;
        }
      }
      if (t_r == kLpInf) continue;
      if (t_r < 0) t_r = 0.0;
      bool take = false;
      if (t_r < t_limit - 1e-12) {
        take = true;
      } else if (t_r <= t_limit + 1e-12 && leave_slot >= 0) {
        // Tie-break: stability (largest pivot) or Bland (smallest column).
        take = bland ? basis_[r] < basis_[leave_slot]
                     : std::abs(w[r]) > std::abs(w[leave_slot]);
      }
      if (take) {
        t_limit = std::min(t_limit, t_r);
        leave_slot = r;
        leave_to_upper = to_upper;
      }
    }
    const double own_range = col_hi(enter) - col_lo(enter);
    const bool flip = own_range < t_limit;
    const double t = flip ? own_range : t_limit;

    if (t == kLpInf) {
      if (!phase1) {
        if (pivots_since_refactor_ > 0) {  // confirm before declaring
          refactorize();
          compute_basic_values();
          continue;
        }
        return finalize(LpStatus::Unbounded);
      }
      // Numerically impossible in phase 1; re-factorize and retry.
      refactorize();
      compute_basic_values();
      continue;
    }

    // Apply the step.
    if (t != 0.0)
      for (int r = 0; r < R; ++r)
        if (w[r] != 0.0) xb_[r] -= dir * t * w[r];
    const double enter_val = nb_value_[enter] + dir * t;

    if (flip) {
      state_[enter] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
      nb_value_[enter] = enter_val;
    } else {
      const int leave_col = basis_[leave_slot];
      state_[leave_col] =
          leave_to_upper ? VarState::AtUpper : VarState::AtLower;
      nb_value_[leave_col] =
          leave_to_upper ? col_hi(leave_col) : col_lo(leave_col);
      basis_pos_[leave_col] = -1;
      basis_[leave_slot] = enter;
      basis_pos_[enter] = leave_slot;
      state_[enter] = VarState::Basic;
      xb_[leave_slot] = enter_val;

      Eta e;
      e.row = leave_slot;
      e.pivot = w[leave_slot];
      for (int r = 0; r < R; ++r)
        if (r != leave_slot && w[r] != 0.0) e.others.emplace_back(r, w[r]);
      etas_.push_back(std::move(e));
      ++pivots_since_refactor_;
    }

    if (t > 1e-9) {
      degen_run = 0;
      bland = false;
    } else if (!flip) {
      if (++degen_run >= kDegeneratePivotLimit) bland = true;
    }
  }
}

LpSolution SimplexSolver::finalize(LpStatus status) {
  const int R = num_rows();
  LpSolution sol;
  sol.status = status;
  if (status != LpStatus::Optimal) {
    // Report best-effort primal values for diagnostics.
    last_primal_.assign(ncols(), 0.0);
    for (int c = 0; c < ncols(); ++c)
      last_primal_[c] = state_[c] == VarState::Basic ? xb_[basis_pos_[c]]
                                                     : nb_value_[c];
    sol.primal.assign(last_primal_.begin(),
                      last_primal_.begin() + num_struct_);
    sol.dual.assign(R, 0.0);
    return sol;
  }

  last_primal_.assign(ncols(), 0.0);
  for (int c = 0; c < ncols(); ++c)
    last_primal_[c] = state_[c] == VarState::Basic ? xb_[basis_pos_[c]]
                                                   : nb_value_[c];

  double obj = 0.0;
  for (int j = 0; j < num_struct_; ++j)
    obj += model_.objective[j] * last_primal_[j];

  // Duals from the true objective costs.
  std::vector<double> y(R, 0.0);
  bool any = false;
  for (int r = 0; r < R; ++r) {
    const double cost = col_obj(basis_[r]);
    if (cost != 0.0) {
      y[r] = cost;
      any = true;
    }
  }
  if (any) btran(y);

  sol.objective_value = obj;
  sol.primal.assign(last_primal_.begin(), last_primal_.begin() + num_struct_);
  sol.dual = std::move(y);
  return sol;
}

}  // namespace paccp
