#include "paccp/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "paccp/core.hpp"
#include "paccp/formulations.hpp"
#include "paccp/lp.hpp"
#include "paccp/tolerances.hpp"

namespace paccp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lift_variant(LiftVariant variant) {
  if (variant != LiftVariant::L3 && variant != LiftVariant::L3V)
    throw std::invalid_argument("lifting: variant must be L3 or L3V");
}

void check_problem(const Instance& inst, int p, int alpha) {
  if (alpha < 1 || alpha > p || p >= inst.m())
    throw std::invalid_argument("lifting: need 1 <= alpha <= p < m");
}

// d_iA counts as within reach of lb under the same tolerance used to
// deduplicate the alpha-distance set, so FASC agrees with D^alpha membership.
bool within_reach(double dist, double lb) {
  return dist <= lb + kAlphaDistanceDedupTol * (1.0 + std::abs(lb));
}

// Subset relaxation with z-row coefficients raised to max{lb, d_iA}.
Relaxation build_lifted_subset(const Instance& inst, int p, int alpha,
                               double lb, bool aggregated_linking) {
  check_problem(inst, p, alpha);
  const int n = inst.n();
  const int m = inst.m();

  Relaxation rel;
  rel.vars.kind = FormKind::F3;
  rel.vars.n = n;
  rel.vars.m = m;
  rel.vars.alpha = alpha;
  rel.vars.subset_catalog = make_subset_catalog(m, alpha);
  const int S = rel.vars.num_subsets();
  const auto& catalog = rel.vars.subset_catalog;

  LpModel& lp = rel.model;
  for (int c = 0; c < n * S + m; ++c) lp.add_var(0.0, 1.0, 0.0);
  lp.add_var(-kLpInf, kLpInf, 1.0);  // z

  {
    LpRow row;
    row.rel = Rel::EQ;
    row.rhs = static_cast<double>(p);
    for (int j = 0; j < m; ++j) {
      row.idx.push_back(rel.vars.y(j));
      row.val.push_back(1.0);
    }
    lp.add_row(std::move(row));
  }
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::EQ;
    row.rhs = 1.0;
    for (int a = 0; a < S; ++a) {
      row.idx.push_back(rel.vars.x_f3(i, a));
      row.val.push_back(1.0);
    }
    lp.add_row(std::move(row));
  }
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::LE;
    row.rhs = 0.0;
    for (int a = 0; a < S; ++a) {
      const double coeff = std::max(lb, subset_distance(inst, i, catalog[a]));
      if (coeff != 0.0) {
        row.idx.push_back(rel.vars.x_f3(i, a));
        row.val.push_back(coeff);
      }
    }
    row.idx.push_back(rel.vars.z());
    row.val.push_back(-1.0);
    lp.add_row(std::move(row));
  }
  if (aggregated_linking) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        LpRow row;
        row.rel = Rel::LE;
        row.rhs = 0.0;
        for (int a = 0; a < S; ++a)
          if (std::binary_search(catalog[a].begin(), catalog[a].end(), j)) {
            row.idx.push_back(rel.vars.x_f3(i, a));
            row.val.push_back(1.0);
          }
        row.idx.push_back(rel.vars.y(j));
        row.val.push_back(-1.0);
        lp.add_row(std::move(row));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < S; ++a)
        for (int j : catalog[a])
          lp.add_row(LpRow{{rel.vars.x_f3(i, a), rel.vars.y(j)},
                           {1.0, -1.0},
                           Rel::LE,
                           0.0});
  }
  return rel;
}

LpSolution solve_or_throw(const LpModel& model, const char* what) {
  LpSolution s = lp_solve(model);
  if (s.status != LpStatus::Optimal)
    throw std::runtime_error(std::string(what) +
                             ": LP did not reach a certified optimum");
  return s;
}

// Shared fixpoint iteration: walk lb up the alpha-distance set until the
// lifted LP value stops exceeding it.
template <typename Evaluate>
LbSharpResult iterate_to_fixpoint(const Instance& inst, int alpha,
                                  Evaluate&& evaluate) {
  const std::vector<double> dset = enumerate_alpha_distances(inst, alpha);
  if (dset.empty())
    throw std::runtime_error("lifting: empty alpha-distance set");

  LbSharpResult out;
  std::size_t cursor = 0;
  double lb = dset.front();
  while (true) {
    const double value = evaluate(lb);
    ++out.iterations;
    if (value <= lb + kFixpointTol * (1.0 + std::abs(lb))) break;
    auto it = std::lower_bound(dset.begin(), dset.end(),
                               value - kAlphaDistanceDedupTol);
    if (it == dset.end()) {
      // A valid bound never exceeds max D^alpha; tolerate roundoff by
      // stopping at the top member.
      it = std::prev(dset.end());
    }
    std::size_t idx = static_cast<std::size_t>(it - dset.begin());
    if (idx <= cursor) idx = cursor + 1;  // strict progress, <= |D| rounds
    if (idx >= dset.size()) break;
    cursor = idx;
    lb = dset[cursor];
  }
  out.value = lb;
  return out;
}

// One evaluation of the assignment-space lifted bound: cutting planes over
// the lifted rows found by separate_lifted on top of the full F1 relaxation.
double l1_value(const Instance& inst, int p, int alpha, double lb) {
  Relaxation rel = build_f1_relaxation(inst, p, alpha, true);
  rel.model.add_row(LpRow{{rel.vars.z()}, {1.0}, Rel::GE, lb});
  SimplexSolver solver(std::move(rel.model));

  const int n = inst.n();
  const int m = inst.m();
  constexpr int kMaxRounds = 500;
  for (int round = 0; round < kMaxRounds; ++round) {
    LpSolution s = solver.solve();
    if (s.status != LpStatus::Optimal)
      throw std::runtime_error("l1_value: LP did not reach a certified optimum");
    const double z_star = s.primal[rel.vars.z()];

    std::vector<LpRow> violated;
    std::vector<double> x_i(m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) x_i[j] = s.primal[rel.vars.x_f1(i, j)];
      auto cut = separate_lifted(inst, i, alpha, x_i, z_star, lb, kInf);
      if (!cut) continue;
      LpRow row;
      row.rel = Rel::LE;
      row.rhs = 0.0;
      for (int j = 0; j < m; ++j)
        if (cut->w[j] != 0.0) {
          row.idx.push_back(rel.vars.x_f1(i, j));
          row.val.push_back(cut->w[j]);
        }
      row.idx.push_back(rel.vars.z());
      row.val.push_back(-1.0);
      violated.push_back(std::move(row));
    }
    if (violated.empty()) return s.objective_value;
    solver.append_rows(violated);
  }
  throw std::runtime_error("l1_value: separation did not converge");
}

}  // namespace

double lifted_lp_value(const Instance& inst, int p, int alpha, double lb,
                       LiftVariant variant) {
  check_lift_variant(variant);
  const Relaxation rel = build_lifted_subset(inst, p, alpha, lb,
                                             variant == LiftVariant::L3V);
  return solve_or_throw(rel.model, "lifted_lp_value").objective_value;
}

double fasc_value(const Instance& inst, int alpha, double lb,
                  LiftVariant variant) {
  check_lift_variant(variant);
  const int n = inst.n();
  const int m = inst.m();
  if (alpha < 1 || alpha > m)
    throw std::invalid_argument("fasc_value: need 1 <= alpha <= m");
  const auto catalog = make_subset_catalog(m, alpha);
  const int S = static_cast<int>(catalog.size());

  std::vector<std::vector<int>> reach(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < S; ++a)
      if (within_reach(subset_distance(inst, i, catalog[a]), lb))
        reach[i].push_back(a);
    if (reach[i].empty()) return kInf;
  }

  LpModel lp;
  if (variant == LiftVariant::L3) {
    // Shared availability u_A per subset; linking u_A <= y_j for each j in A.
    for (int a = 0; a < S; ++a) lp.add_var(0.0, 1.0, 0.0);
    for (int j = 0; j < m; ++j) lp.add_var(0.0, 1.0, 1.0);
    for (int i = 0; i < n; ++i) {
      LpRow row;
      row.rel = Rel::GE;
      row.rhs = 1.0;
      for (int a : reach[i]) {
        row.idx.push_back(a);
        row.val.push_back(1.0);
      }
      lp.add_row(std::move(row));
    }
    for (int a = 0; a < S; ++a)
      for (int j : catalog[a])
        lp.add_row(LpRow{{a, S + j}, {1.0, -1.0}, Rel::LE, 0.0});
  } else {
    // Per-customer availability u_iA; aggregated linking per (i, j).
    for (int c = 0; c < n * S; ++c) lp.add_var(0.0, 1.0, 0.0);
    for (int j = 0; j < m; ++j) lp.add_var(0.0, 1.0, 1.0);
    for (int i = 0; i < n; ++i) {
      LpRow row;
      row.rel = Rel::GE;
      row.rhs = 1.0;
      for (int a : reach[i]) {
        row.idx.push_back(i * S + a);
        row.val.push_back(1.0);
      }
      lp.add_row(std::move(row));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        LpRow row;
        row.rel = Rel::LE;
        row.rhs = 0.0;
        for (int a = 0; a < S; ++a)
          if (std::binary_search(catalog[a].begin(), catalog[a].end(), j)) {
            row.idx.push_back(i * S + a);
            row.val.push_back(1.0);
          }
        row.idx.push_back(n * S + j);
        row.val.push_back(-1.0);
        lp.add_row(std::move(row));
      }
  }
  LpSolution s = lp_solve(lp);
  if (s.status == LpStatus::Infeasible) return kInf;
  if (s.status != LpStatus::Optimal)
    throw std::runtime_error("fasc_value: LP did not reach a certified optimum");
  return s.objective_value;
}

std::pair<double, bool> next_alpha_distance(const std::vector<double>& d_sorted,
                                            double v) {
  auto it = std::lower_bound(d_sorted.begin(), d_sorted.end(),
                             v - kAlphaDistanceDedupTol);
  if (it == d_sorted.end()) return {v, false};
  return {*it, true};
}

LbSharpResult compute_lb_sharp(const Instance& inst, int p, int alpha,
                               LiftVariant variant) {
  check_lift_variant(variant);
  check_problem(inst, p, alpha);
  return iterate_to_fixpoint(inst, alpha, [&](double lb) {
    return lifted_lp_value(inst, p, alpha, lb, variant);
  });
}

LbSharpResult compute_lb_sharp_1(const Instance& inst, int p, int alpha) {
  check_problem(inst, p, alpha);
  return iterate_to_fixpoint(inst, alpha, [&](double lb) {
    return l1_value(inst, p, alpha, lb);
  });
}

std::optional<LiftedCoefficients> separate_lifted(
    const Instance& inst, int i, int alpha, const std::vector<double>& x_star_i,
    double z_star, double lb, double ub) {
  const int m = inst.m();
  if (i < 0 || i >= inst.n())
    throw std::invalid_argument("separate_lifted: customer out of range");
  if (static_cast<int>(x_star_i.size()) != m)
    throw std::invalid_argument("separate_lifted: x_star_i must have size m");
  if (alpha < 1 || alpha > m)
    throw std::invalid_argument("separate_lifted: need 1 <= alpha <= m");

  // Support of x*: largest entries first when the cap bites, then by id for a
  // deterministic LP layout.
  std::vector<int> supp;
  for (int j = 0; j < m; ++j)
    if (x_star_i[j] > kPivotTol) supp.push_back(j);
  if (supp.empty()) return std::nullopt;
  if (static_cast<int>(supp.size()) > kLiftedSupportCap) {
    std::sort(supp.begin(), supp.end(), [&](int a, int b) {
      if (x_star_i[a] != x_star_i[b]) return x_star_i[a] > x_star_i[b];
      return a < b;
    });
    supp.resize(kLiftedSupportCap);
  }
  std::sort(supp.begin(), supp.end());
  const int ns = static_cast<int>(supp.size());

  std::vector<char> in_supp(m, 0);
  for (int j : supp) in_supp[j] = 1;
  std::vector<double> off_d;
  off_d.reserve(m - ns);
  for (int j = 0; j < m; ++j)
    if (!in_supp[j]) off_d.push_back(inst.d(i, j));
  std::sort(off_d.begin(), off_d.end());
  // tail[k] = sum of the k smallest off-support distances (completion cost of
  // a pattern that uses alpha - |T| facilities outside the support).
  std::vector<double> tail(static_cast<std::size_t>(alpha), kInf);
  tail[0] = 0.0;
  for (int k = 1; k < alpha; ++k)
    if (k <= static_cast<int>(off_d.size())) tail[k] = tail[k - 1] + off_d[k - 1];

  // Constraints of the separation problem grouped by support pattern
  // T = A ∩ supp: the tightest right-hand side over all completions of T.
  struct Pattern {
    std::vector<int> members;  // support positions
    double rhs = 0.0;
  };
  std::vector<Pattern> patterns;
  const int max_size = std::min(alpha, ns);
  for (int k = 1; k <= max_size; ++k) {
    if (alpha - k > static_cast<int>(off_d.size())) continue;
    for_each_subset(ns, k, [&](const std::vector<int>& pos) {
      double d_t = 0.0;
      for (int t : pos) d_t += inst.d(i, supp[t]);
      patterns.push_back(
          Pattern{pos, std::max(lb, d_t + tail[static_cast<std::size_t>(
                                                  alpha - k)])});
    });
  }
  if (patterns.empty()) return std::nullopt;

  // Solve the dual of  max Σ x*_j w_j  s.t.  Σ_{j∈T} w_j ≤ rhs_T, w ≥ 0:
  // one column per pattern keeps the basis at support size.  The optimal w
  // are the multipliers of the coverage rows.
  LpModel lp;
  for (const Pattern& t : patterns) lp.add_var(0.0, kLpInf, t.rhs);
  std::vector<LpRow> cover(ns);
  for (int a = 0; a < static_cast<int>(patterns.size()); ++a)
    for (int t : patterns[a].members) {
      cover[t].idx.push_back(a);
      cover[t].val.push_back(1.0);
    }
  for (int t = 0; t < ns; ++t) {
    cover[t].rel = Rel::GE;
    cover[t].rhs = x_star_i[supp[t]];
    lp.add_row(std::move(cover[t]));
  }
  const LpSolution s = solve_or_throw(lp, "separate_lifted");
  if (s.objective_value <= z_star + kViolationTol) return std::nullopt;

  std::vector<double> w_supp(ns);
  for (int t = 0; t < ns; ++t) w_supp[t] = std::max(0.0, s.dual[t]);

  LiftedCoefficients out;
  out.customer = i;
  out.lb_used = lb;
  out.ub_used = ub;
  out.separation_value = s.objective_value;
  out.w = complete_coefficients(inst, i, supp, w_supp, alpha, lb);
  return out;
}

std::vector<double> complete_coefficients(const Instance& inst, int i,
                                          const std::vector<int>& support,
                                          const std::vector<double>& w_support,
                                          int alpha, double lb) {
  const int m = inst.m();
  if (i < 0 || i >= inst.n())
    throw std::invalid_argument("complete_coefficients: customer out of range");
  if (support.size() != w_support.size())
    throw std::invalid_argument(
        "complete_coefficients: support and w_support sizes differ");
  if (alpha < 1 || alpha > m)
    throw std::invalid_argument("complete_coefficients: need 1 <= alpha <= m");

  std::vector<double> w(m, 0.0);
  std::vector<char> in_supp(m, 0);
  for (std::size_t t = 0; t < support.size(); ++t) {
    const int j = support[t];
    if (j < 0 || j >= m)
      throw std::invalid_argument(
          "complete_coefficients: facility out of range");
    if (in_supp[j])
      throw std::invalid_argument("complete_coefficients: duplicate facility");
    in_supp[j] = 1;
    w[j] = w_support[t];
  }

  std::vector<int> off;
  off.reserve(m - support.size());
  for (int j = 0; j < m; ++j)
    if (!in_supp[j]) off.push_back(j);
  if (off.empty()) return w;
  if (binomial(m - 1, alpha - 1) > kCompletionExactBudget) return w;

  std::sort(off.begin(), off.end(), [&](int a, int b) {
    if (inst.d(i, a) != inst.d(i, b)) return inst.d(i, a) < inst.d(i, b);
    return a < b;
  });

  std::vector<int> others;
  others.reserve(m - 1);
  for (int j_l : off) {
    others.clear();
    for (int j = 0; j < m; ++j)
      if (j != j_l) others.push_back(j);
    const double d_l = inst.d(i, j_l);
    double best = kInf;
    for_each_subset(m - 1, alpha - 1, [&](const std::vector<int>& pos) {
      double d_b = 0.0;
      double w_b = 0.0;
      for (int t : pos) {
        d_b += inst.d(i, others[t]);
        w_b += w[others[t]];
      }
      best = std::min(best, std::max(lb, d_b + d_l) - w_b);
    });
    w[j_l] = std::max(0.0, best);
  }
  return w;
}

}  // namespace paccp
