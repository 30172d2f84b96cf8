#include "paccp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>

#include "paccp/heuristics.hpp"
#include "paccp/lifting.hpp"
#include "paccp/tolerances.hpp"

namespace paccp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool meets(double bound, double target) {
  return bound >= target - kObjectiveRelTol * (1.0 + std::abs(target));
}

// Smallest attainable alpha-distance >= v, allowing the same relative slack
// downward that the pruning comparison uses, so LP noise rounds to the
// member it certified rather than overshooting to the next one.  Returns
// +inf when v exceeds every attainable value.
double ceil_into(const std::vector<double>& sorted_set, double v) {
  if (sorted_set.empty()) return v;
  const double slack = kObjectiveRelTol * (1.0 + std::abs(v));
  auto it = std::lower_bound(sorted_set.begin(), sorted_set.end(), v - slack);
  return it == sorted_set.end() ? kInf : *it;
}

bool integral(double v) {
  return std::abs(v - std::round(v)) <= kIntegralityTol;
}

std::vector<double> y_slice(const LpSolution& sol, const VarMap& vars) {
  std::vector<double> y(vars.m);
  for (int j = 0; j < vars.m; ++j) y[j] = sol.primal[vars.y(j)];
  return y;
}

// Nearest-first fractional fill of alpha opening mass, used to score
// customers for the lifted step: a large d-weighted fill means even the
// closest fractionally open facilities leave the customer remote.
double nearest_fill_score(const Instance& inst, int i,
                          const std::vector<double>& y_star, int alpha) {
  std::vector<int> order(inst.m());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.d(i, a) != inst.d(i, b)) return inst.d(i, a) < inst.d(i, b);
    return a < b;
  });
  double remaining = alpha, score = 0.0;
  for (int j : order) {
    const double take = std::min(std::max(y_star[j], 0.0), remaining);
    score += inst.d(i, j) * take;
    remaining -= take;
    if (remaining <= 1e-12) break;
  }
  return score;
}

}  // namespace

SeparationOutcome separation_round(const Instance& inst, int alpha,
                                   const LpSolution& sol, const VarMap& vars,
                                   double lb, double ub, bool ub_improved,
                                   bool at_root, const BncConfig& config,
                                   Rng& rng, std::vector<char>& fixed_mask,
                                   const std::vector<double>* alpha_set) {
  if (vars.kind != FormKind::F1)
    throw std::invalid_argument("separation_round: VarMap must describe F1");
  const int n = inst.n(), m = inst.m();
  if (static_cast<int>(fixed_mask.size()) != n * m)
    throw std::invalid_argument("separation_round: bad fixed_mask size");

  SeparationOutcome out;
  std::vector<char> served(n, 0);
  int budget = at_root ? std::numeric_limits<int>::max()
                       : config.max_num_cuts_tree;
  const bool fix_on = config.setting >= BncSetting::S1H;
  const bool link_on = config.setting >= BncSetting::S1HS;
  const bool ubcut_on = config.setting == BncSetting::S1HSL;
  const bool lift_on = config.setting == BncSetting::S1HSL && at_root;
  const bool have_ub = std::isfinite(ub);

  // Step 1: pin assignments no optimal solution can use under the new bound.
  if (fix_on && have_ub && ub_improved) {
    for (auto [i, j] : upper_bound_fixings(inst, alpha, ub)) {
      if (fixed_mask[i * m + j]) continue;
      fixed_mask[i * m + j] = 1;
      out.new_fixings.emplace_back(i, j);
      served[i] = 1;
    }
  }

  // Step 2: nearest violated linking row per customer, random customer order.
  if (link_on && budget > 0) {
    std::vector<char> eligible(n);
    for (int i = 0; i < n; ++i) eligible[i] = !served[i];
    const std::vector<double> y_star = y_slice(sol, vars);
    for (CutRow& row :
         separate_linking(inst, sol.primal, y_star, rng, vars, &eligible)) {
      if (budget == 0) break;
      served[row.origin_customer] = 1;
      out.rows.push_back(std::move(row));
      --budget;
    }
  }

  // Step 3: simple rows (cheap condition) first, then general rows.
  if (ubcut_on && have_ub && ub_improved && budget > 0) {
    for (const CutRow& row : simple_ub_rows(inst, alpha, ub, vars)) {
      if (budget == 0) break;
      if (served[row.origin_customer]) continue;
      double lhs = 0.0;
      for (std::size_t t = 0; t < row.idx.size(); ++t)
        lhs += row.val[t] * sol.primal[row.idx[t]];
      if (lhs <= row.rhs + kViolationTol) continue;
      served[row.origin_customer] = 1;
      out.rows.push_back(row);
      --budget;
    }
    if (budget > 0) {
      std::vector<char> eligible(n);
      for (int i = 0; i < n; ++i) eligible[i] = !served[i];
      const int cap = at_root ? n : budget;
      for (CutRow& row :
           general_ub_rows(inst, alpha, ub, sol.primal, cap, vars, &eligible)) {
        served[row.origin_customer] = 1;
        out.rows.push_back(std::move(row));
        --budget;
      }
    }
  }

  // Step 4 (root only): push the bound into the attainable-value set, then
  // separate lifted rows for the highest-scoring still-unserved customers.
  if (lift_on && config.num_lifted_customers > 0) {
    double pushed = std::max(lb, sol.objective_value);
    if (alpha_set) pushed = ceil_into(*alpha_set, pushed);
    out.lifted_lb = pushed;
    if (!std::isfinite(pushed)) return out;  // caller prunes on +inf

    const std::vector<double> y_star = y_slice(sol, vars);
    std::vector<std::pair<double, int>> scored;
    for (int i = 0; i < n; ++i)
      if (!served[i])
        scored.emplace_back(nearest_fill_score(inst, i, y_star, alpha), i);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (static_cast<int>(scored.size()) > config.num_lifted_customers)
      scored.resize(config.num_lifted_customers);

    const double z_star = sol.primal[vars.z()];
    for (const auto& [score, i] : scored) {
      std::vector<double> x_i(m);
      for (int j = 0; j < m; ++j) x_i[j] = sol.primal[vars.x_f1(i, j)];
      const auto cut =
          separate_lifted(inst, i, alpha, x_i, z_star, pushed, ub);
      if (!cut) continue;
      CutRow row;
      row.family = CutFamily::Lifted;
      row.origin_customer = i;
      row.rel = Rel::LE;
      row.rhs = 0.0;
      for (int j = 0; j < m; ++j)
        if (cut->w[j] != 0.0) {
          row.idx.push_back(vars.x_f1(i, j));
          row.val.push_back(cut->w[j]);
        }
      row.idx.push_back(vars.z());
      row.val.push_back(-1.0);
      served[i] = 1;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

std::pair<double, Solution> evaluate_leaf(const Instance& inst,
                                          const std::vector<double>& y,
                                          int alpha) {
  if (static_cast<int>(y.size()) != inst.m())
    throw std::invalid_argument("evaluate_leaf: y must have m entries");
  std::vector<int> open;
  for (int j = 0; j < inst.m(); ++j) {
    if (std::abs(y[j] - 1.0) <= kIntegralityTol)
      open.push_back(j);
    else if (std::abs(y[j]) > kIntegralityTol)
      throw std::invalid_argument("evaluate_leaf: y is not integral");
  }
  const double value = objective(inst, open, alpha);
  return {value, Solution{std::move(open), value}};
}

int branch_select(const std::vector<double>& y) {
  int best = -1;
  double best_score = kInf;
  for (int j = 0; j < static_cast<int>(y.size()); ++j) {
    if (integral(y[j])) continue;
    const double score = std::abs(y[j] - 0.5);
    if (score < best_score) {
      best_score = score;
      best = j;
    }
  }
  if (best < 0)
    throw std::invalid_argument("branch_select: no fractional entry");
  return best;
}

namespace {

struct Node {
  std::vector<int> closed;  // facilities branched to y = 0
  std::vector<int> opened;  // facilities branched to y = 1
  double bound = -kInf;
  int depth = 0;
  long long id = 0;
};

struct WorseNode {  // priority_queue pops the best: lowest bound, then deeper
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

struct PoolEntry {
  int row = -1;
  CutFamily family = CutFamily::Linking;
  int misses = 0;
  bool active = true;
  bool retired = false;      // dropped for good (dominated lifted rows)
  double w_alpha_sum = 0.0;  // max attainable lifted LHS; 0 for other rows
};

class BncDriver {
 public:
  BncDriver(const Instance& inst, int p, int alpha, const BncConfig& config)
      : inst_(inst), p_(p), alpha_(alpha), config_(config),
        rng_(config.seed), sep_rng_(0) {}

  RunReport run() {
    start_ = std::chrono::steady_clock::now();
    validate();
    load_witness();
    const std::uint64_t heur_seed = rng_.fork_seed();
    sep_rng_ = Rng(rng_.fork_seed());
    prepare_alpha_set();
    if (config_.setting >= BncSetting::S1H) {
      offer_incumbent(run_start_portfolio(
          inst_, p_, alpha_,
          HeuristicConfig{config_.num_start_heur_runs, heur_seed}));
    }
    build_model();
    main_loop();
    finalize();
    return report_;
  }

 private:
  void validate() const {
    if (alpha_ < 1 || alpha_ > p_ || p_ >= inst_.m())
      throw std::invalid_argument("solve: need 1 <= alpha <= p < m");
    if (config_.num_start_heur_runs < 1 || config_.num_initial_cuts < 0 ||
        config_.max_num_sep_root < 0 || config_.max_num_sep_tree < 0 ||
        config_.max_no_improvements < 0 || config_.max_num_cuts_tree < 0 ||
        config_.num_lifted_customers < 0 || config_.time_limit_s < 0)
      throw std::invalid_argument("solve: negative configuration value");
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  void prepare_alpha_set() {
    try {
      dset_ = enumerate_alpha_distances(inst_, alpha_);
    } catch (const std::exception&) {
      dset_.clear();  // enumeration over budget: bound rounding disabled
    }
  }

  void offer_incumbent(const Solution& cand) {
    if (cand.value < ub_ - 1e-12) {
      incumbent_ = cand;
      ub_ = cand.value;
    }
  }

  void build_model() {
    rel_ = build_f1_relaxation(inst_, p_, alpha_, false);
    const int n = inst_.n(), m = inst_.m();
    fixed_.assign(static_cast<std::size_t>(n) * m, 0);
    std::vector<std::pair<int, int>> initial;
    if (config_.setting >= BncSetting::S1H) {
      for (auto [i, j] : remoteness_fixings(inst_, p_, alpha_))
        if (!fixed_[i * m + j]) {
          fixed_[i * m + j] = 1;
          initial.emplace_back(i, j);
        }
      if (std::isfinite(ub_))
        for (auto [i, j] : upper_bound_fixings(inst_, alpha_, ub_))
          if (!fixed_[i * m + j]) {
            fixed_[i * m + j] = 1;
            initial.emplace_back(i, j);
          }
    }
    // Linking block: everything (minus rows made redundant by fixings) when
    // linking is not separated, otherwise only the nearest rows.
    const bool link_sep = config_.setting >= BncSetting::S1HS;
    const int per_customer = link_sep ? config_.num_initial_cuts : m;
    for (const CutRow& row :
         linking_rows_initial(inst_, per_customer, rel_.vars)) {
      const int i = row.origin_customer;
      const int j = row.idx[1] - rel_.vars.y(0);
      if (!fixed_[i * m + j]) rel_.model.add_row(row.to_lp_row());
    }
    solver_.emplace(rel_.model);
    for (auto [i, j] : initial) {
      solver_->set_var_bounds(rel_.vars.x_f1(i, j), 0.0, 0.0);
      ++report_.fixings;
    }
    check_witness("build_model");
  }

  bool prunable(double bound) const {
    return std::isfinite(ub_) && meets(ceil_into(dset_, bound), ub_);
  }

  // --- temporary diagnostic: reference-solution audit ---------------------
  // PACCP_WITNESS="j1,j2,..." (0-based open set) arms a check that every
  // model mutation keeps the reference solution feasible.
  void load_witness() {
    const char* env = std::getenv("PACCP_WITNESS");
    if (!env) return;
    std::vector<int> open;
    int v = 0;
    bool in_num = false;
    for (const char* c = env;; ++c) {
      if (*c >= '0' && *c <= '9') {
        v = v * 10 + (*c - '0');
        in_num = true;
      } else {
        if (in_num) open.push_back(v);
        v = 0;
        in_num = false;
        if (!*c) break;
      }
    }
    const int n = inst_.n(), m = inst_.m();
    wit_y_.assign(m, 0.0);
    for (int j : open) wit_y_[j] = 1.0;
    wit_x_.assign(static_cast<std::size_t>(n) * m, 0.0);
    wit_z_ = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<double, int>> ds;
      for (int j : open) ds.emplace_back(inst_.d(i, j), j);
      std::sort(ds.begin(), ds.end());
      double di = 0.0;
      for (int t = 0; t < alpha_; ++t) {
        wit_x_[static_cast<std::size_t>(i) * m + ds[t].second] = 1.0;
        di += ds[t].first;
      }
      wit_z_ = std::max(wit_z_, di);
    }
    wit_on_ = true;
    std::fprintf(stderr, "[wit] armed, f=%.10g with %zu open\n", wit_z_,
                 open.size());
  }

  double wit_col(int c) const {
    const int m = inst_.m();
    const int nx = inst_.n() * m;
    if (c < nx) return wit_x_[c];       // relies on F1 layout: x block first
    if (c < nx + m) return wit_y_[c - nx];
    return wit_z_;
  }

  void check_witness(const char* where) {
    if (!wit_on_) return;
    if (z_lo_ > wit_z_ + 1e-6) {
      std::fprintf(stderr, "[wit] VIOLATION at %s: z_lo=%.10g > z*=%.10g\n",
                   where, z_lo_, wit_z_);
      std::abort();
    }
    const auto& model = solver_->model();
    const int m = inst_.m();
    for (int j = 0; j < m; ++j) {
      // branching bounds are node-local and may exclude the witness; only
      // audit global x fixings
      (void)j;
    }
    for (std::size_t t = 0; t < wit_x_.size(); ++t) {
      const int i = static_cast<int>(t) / m, j = static_cast<int>(t) % m;
      if (wit_x_[t] > 0.5 && fixed_[t]) {
        std::fprintf(stderr, "[wit] VIOLATION at %s: x(%d,%d) fixed to 0\n",
                     where, i, j);
        std::abort();
      }
    }
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
      const LpRow& row = model.rows[r];
      double act = 0.0;
      for (std::size_t t = 0; t < row.idx.size(); ++t)
        act += row.val[t] * wit_col(row.idx[t]);
      const double tol = 1e-6 * (1.0 + std::abs(row.rhs));
      const bool bad = row.rel == Rel::LE   ? act > row.rhs + tol
                       : row.rel == Rel::GE ? act < row.rhs - tol
                                            : std::abs(act - row.rhs) > tol;
      if (bad) {
        const char* fam = "model";
        int origin = -1;
        for (const PoolEntry& e : pool_)
          if (e.row == static_cast<int>(r)) {
            fam = e.family == CutFamily::Lifted    ? "lifted"
                  : e.family == CutFamily::Linking ? "linking"
                                                   : "ub";
            break;
          }
        std::fprintf(stderr,
                     "[wit] VIOLATION at %s: row %zu (%s, origin %d) act=%.10g "
                     "rel=%d rhs=%.10g\n",
                     where, r, fam, origin, act, static_cast<int>(row.rel),
                     row.rhs);
        std::fprintf(stderr, "[wit] row:");
        for (std::size_t t = 0; t < row.idx.size(); ++t)
          std::fprintf(stderr, " %+g*c%d", row.val[t], row.idx[t]);
        std::fprintf(stderr, "\n");
        std::abort();
      }
    }
  }
  // --- end temporary diagnostic -------------------------------------------

  LpSolution solve_lp() {
    while (true) {
      LpSolution s = solver_->solve();
      if (s.status == LpStatus::Infeasible) {
        // An Infeasible node prunes a whole subtree, so never trust a warm
        // basis with it: rebuild cold and re-solve.  Genuine infeasibility
        // (branching conflicts) reproduces; a false alarm from accumulated
        // warm-start noise does not.
        SimplexSolver fresh(solver_->model());
        for (const PoolEntry& e : pool_)
          if (!e.active) fresh.relax_row(e.row);
        s = fresh.solve();
        if (s.status == LpStatus::Infeasible) return s;
        solver_.emplace(std::move(fresh));
      }
      if (s.status != LpStatus::Optimal) return s;
      // Reactivate pooled-out rows the new point violates, then re-solve.
      bool restored = false;
      for (PoolEntry& e : pool_) {
        if (e.retired || e.active) continue;
        if (solver_->row_activity(e.row) >
            solver_->model().rows[e.row].rhs + kViolationTol) {
          solver_->restore_row(e.row);
          e.active = true;
          e.misses = 0;
          restored = true;
        }
      }
      if (restored) continue;
      for (PoolEntry& e : pool_) {
        if (e.retired || !e.active) continue;
        const double slack =
            solver_->model().rows[e.row].rhs - solver_->row_activity(e.row);
        if (slack > kPoolSlackTol) {
          if (++e.misses >= kPoolMissLimit) {
            solver_->relax_row(e.row);
            e.active = false;
          }
        } else {
          e.misses = 0;
        }
      }
      return s;
    }
  }

  void append_cut_rows(const std::vector<CutRow>& rows) {
    if (rows.empty()) return;
    std::vector<LpRow> lp_rows;
    lp_rows.reserve(rows.size());
    int base = static_cast<int>(solver_->model().rows.size());
    for (const CutRow& row : rows) lp_rows.push_back(row.to_lp_row());
    solver_->append_rows(lp_rows);
    for (const CutRow& row : rows) {
      PoolEntry e;
      e.row = base++;
      e.family = row.family;
      if (row.family == CutFamily::Lifted) {
        std::vector<double> w;
        for (std::size_t t = 0; t < row.idx.size(); ++t)
          if (row.idx[t] != rel_.vars.z()) w.push_back(row.val[t]);
        std::sort(w.begin(), w.end(), std::greater<>());
        for (int t = 0; t < std::min<int>(alpha_, w.size()); ++t)
          e.w_alpha_sum += w[t];
        ++report_.cuts_lifted;
      } else if (row.family == CutFamily::Linking) {
        ++report_.cuts_linking;
      } else {
        ++report_.cuts_ub;
      }
      pool_.push_back(e);
    }
  }

  // Raising the objective floor retires lifted rows it dominates.
  void push_objective_floor(double lb) {
    z_lo_ = lb;
    solver_->set_var_bounds(rel_.vars.z(), z_lo_, kLpInf);
    for (PoolEntry& e : pool_) {
      if (e.retired || e.family != CutFamily::Lifted) continue;
      if (e.w_alpha_sum <= z_lo_ + 1e-9) {
        if (e.active) solver_->relax_row(e.row);
        e.active = false;
        e.retired = true;
      }
    }
  }

  void enter_node(const Node& node) {
    for (int j = 0; j < inst_.m(); ++j)
      solver_->set_var_bounds(rel_.vars.y(j), 0.0, 1.0);
    for (int j : node.closed) solver_->set_var_bounds(rel_.vars.y(j), 0.0, 0.0);
    for (int j : node.opened) solver_->set_var_bounds(rel_.vars.y(j), 1.0, 1.0);
  }

  // Returns the violated linking rows an integral point still needs; the
  // model stays exact at leaves because these are appended until none are.
  std::vector<CutRow> lazy_linking_rows(const LpSolution& s) {
    const std::vector<double> y_star = y_slice(s, rel_.vars);
    return separate_linking(inst_, s.primal, y_star, sep_rng_, rel_.vars,
                            nullptr);
  }

  void process_node(const Node& node, bool root) {
    enter_node(node);
    LpSolution s = solve_lp();
    double node_bound = node.bound;
    const int cap = config_.setting == BncSetting::S1
                        ? 0
                        : (root ? config_.max_num_sep_root
                                : config_.max_num_sep_tree);
    int rounds = 0, stall = 0;
    std::vector<double> y;
    const auto leave = [&] {
      if (root)
        report_.root_lb =
            std::min(ceil_into(dset_, node_bound),
                     std::isfinite(ub_) ? ub_ : kInf);
    };

    while (true) {
      if (elapsed() > config_.time_limit_s) {
        time_up_ = true;
        tl_bound_ = node_bound;
        leave();
        return;
      }
      if (s.status == LpStatus::Infeasible) {  // branching conflict: dead end
        node_bound = kInf;
        leave();
        return;
      }
      if (s.status != LpStatus::Optimal)
        throw std::runtime_error("solve: LP kernel failed to converge");
      node_bound = std::max(node_bound, s.objective_value);
      if (prunable(node_bound)) {
        leave();
        return;
      }
      y = y_slice(s, rel_.vars);
      if (std::all_of(y.begin(), y.end(), integral)) {
        auto [value, leaf] = evaluate_leaf(inst_, y, alpha_);
        offer_incumbent(leaf);
        const std::vector<CutRow> lazy = lazy_linking_rows(s);
        if (lazy.empty()) {  // exact leaf: subtree is settled
          leave();
          return;
        }
        append_cut_rows(lazy);
        s = solve_lp();
        continue;
      }
      if (config_.setting >= BncSetting::S1H)
        offer_incumbent(primal_round(inst_, y, p_, alpha_));
      if (rounds >= cap || stall >= config_.max_no_improvements) break;

      const bool ub_improved =
          std::isfinite(ub_) && ub_ < last_sep_ub_ - 1e-12;
      SeparationOutcome oc = separation_round(
          inst_, alpha_, s, rel_.vars, z_lo_, ub_, ub_improved, root, config_,
          sep_rng_, fixed_, dset_.empty() ? nullptr : &dset_);
      ++rounds;
      if (ub_improved && config_.setting >= BncSetting::S1H)
        last_sep_ub_ = ub_;

      bool changed = false;
      for (auto [i, j] : oc.new_fixings) {
        solver_->set_var_bounds(rel_.vars.x_f1(i, j), 0.0, 0.0);
        ++report_.fixings;
        changed = true;
      }
      check_witness("fixings");
      if (!oc.rows.empty()) {
        append_cut_rows(oc.rows);
        changed = true;
      }
      check_witness("cut_rows");
      if (!std::isnan(oc.lifted_lb)) {
        if (!std::isfinite(oc.lifted_lb)) {  // bound left the attainable set
          node_bound = kInf;
          leave();
          return;
        }
        if (oc.lifted_lb > z_lo_ + 1e-12) {
          push_objective_floor(oc.lifted_lb);
          changed = true;
        }
      }
      check_witness("floor_push");
      if (!changed) break;

      const double before = node_bound;
      s = solve_lp();
      if (s.status == LpStatus::Optimal) {
        if (s.objective_value - before <= kTailOffThreshold)
          ++stall;
        else
          stall = 0;
      }
    }

    leave();
    const int j = branch_select(y);
    Node closed{node.closed, node.opened, node_bound, node.depth + 1,
                next_id_++};
    closed.closed.push_back(j);
    Node opened{node.closed, node.opened, node_bound, node.depth + 1,
                next_id_++};
    opened.opened.push_back(j);
    queue_.push(std::move(closed));
    queue_.push(std::move(opened));
  }

  void main_loop() {
    queue_.push(Node{});
    while (!queue_.empty()) {
      if (elapsed() > config_.time_limit_s) {
        time_up_ = true;
        break;
      }
      Node node = queue_.top();
      queue_.pop();
      if (prunable(node.bound)) continue;
      const bool root = node.id == 0;
      if (!root) ++report_.nodes;
      process_node(node, root);
      if (time_up_) break;
    }
  }

  void finalize() {
    report_.wall_time_s = elapsed();
    report_.upper_bound = ub_;
    report_.incumbent = incumbent_;
    if (time_up_) {
      report_.status = SolveStatus::TimeLimit;
      double raw = tl_bound_;
      if (!queue_.empty()) raw = std::min(raw, queue_.top().bound);
      double lb = ceil_into(dset_, raw);
      if (std::isfinite(ub_)) lb = std::min(lb, ub_);
      report_.lower_bound = std::max(lb, 0.0);
    } else if (!std::isfinite(ub_)) {
      report_.status = SolveStatus::Infeasible;
      report_.lower_bound = 0.0;
    } else {
      report_.status = SolveStatus::Optimal;
      report_.lower_bound = ub_;
    }
    report_.root_lb = std::max(0.0, std::min(report_.root_lb,
                                             report_.lower_bound));
  }

  const Instance& inst_;
  int p_, alpha_;
  BncConfig config_;
  Rng rng_, sep_rng_;
  std::chrono::steady_clock::time_point start_;

  Relaxation rel_;
  std::optional<SimplexSolver> solver_;
  std::vector<char> fixed_;
  std::vector<double> dset_;
  std::vector<PoolEntry> pool_;

  bool wit_on_ = false;  // temporary diagnostic state
  std::vector<double> wit_y_, wit_x_;
  double wit_z_ = 0.0;

  Solution incumbent_;
  double ub_ = kInf;
  double z_lo_ = 0.0;
  double last_sep_ub_ = kInf;
  double tl_bound_ = kInf;
  bool time_up_ = false;

  std::priority_queue<Node, std::vector<Node>, WorseNode> queue_;
  long long next_id_ = 1;
  RunReport report_;
};

}  // namespace

RunReport solve(const Instance& inst, int p, int alpha,
                const BncConfig& config) {
  return BncDriver(inst, p, alpha, config).run();
}

}  // namespace paccp
