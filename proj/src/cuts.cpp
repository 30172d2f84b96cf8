#include "paccp/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "paccp/core.hpp"
#include "paccp/tolerances.hpp"

namespace paccp {

namespace {

// Strict exceedance d > bound with a relative safety margin, so borderline
// floating-point equality never produces a wrong fixing.
bool exceeds(double d, double bound) {
  return d > bound + kAlphaDistanceDedupTol * (1.0 + std::abs(bound));
}

// Facilities of one customer ordered by (distance asc, id asc).
std::vector<int> by_distance(const Instance& inst, int i) {
  std::vector<int> order(inst.m());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.d(i, a) != inst.d(i, b)) return inst.d(i, a) < inst.d(i, b);
    return a < b;
  });
  return order;
}

void check_f1(const VarMap& vars) {
  if (vars.kind != FormKind::F1)
    throw std::invalid_argument("cuts: VarMap must describe an F1 model");
}

}  // namespace

std::vector<std::pair<int, int>> remoteness_fixings(const Instance& inst,
                                                    int p, int alpha) {
  if (alpha < 1 || alpha > p)
    throw std::invalid_argument("remoteness_fixings: need 1 <= alpha <= p");
  std::vector<std::pair<int, int>> out;
  const int k = p - alpha;
  if (k <= 0) return out;
  for (int i = 0; i < inst.n(); ++i) {
    std::vector<int> order(inst.m());
    std::iota(order.begin(), order.end(), 0);
    // One canonical farthest set per customer: distance desc, then id asc.
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (inst.d(i, a) != inst.d(i, b)) return inst.d(i, a) > inst.d(i, b);
      return a < b;
    });
    for (int t = 0; t < k && t < inst.m(); ++t) out.emplace_back(i, order[t]);
  }
  return out;
}

std::vector<std::pair<int, int>> upper_bound_fixings(const Instance& inst,
                                                     int alpha, double ub) {
  if (alpha < 1 || alpha > inst.m())
    throw std::invalid_argument("upper_bound_fixings: need 1 <= alpha <= m");
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < inst.n(); ++i) {
    const std::vector<int> order = by_distance(inst, i);
    // Prefix sums of the alpha closest, so the minimum assignment sum through
    // facility j is d_ij plus the alpha-1 closest others.
    double prefix_small = 0.0;  // sum of the alpha-1 closest
    for (int t = 0; t + 1 < alpha; ++t) prefix_small += inst.d(i, order[t]);
    const double alpha_th = inst.d(i, order[alpha - 1]);
    std::vector<char> among_small(inst.m(), 0);
    for (int t = 0; t + 1 < alpha; ++t) among_small[order[t]] = 1;
    for (int j = 0; j < inst.m(); ++j) {
      // If j already sits among the alpha-1 closest, the alpha-th closest
      // fills the remaining slot instead.
      const double min_sum = among_small[j] ? prefix_small + alpha_th
                                            : prefix_small + inst.d(i, j);
      if (exceeds(min_sum, ub)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<CutRow> simple_ub_rows(const Instance& inst, int alpha, double ub,
                                   const VarMap& vars) {
  check_f1(vars);
  std::vector<CutRow> out;
  for (int i = 0; i < inst.n(); ++i)
    for (int beta = 2; beta <= alpha; ++beta) {
      CutRow row;
      row.family = CutFamily::SimpleUB;
      row.rel = Rel::LE;
      row.rhs = beta - 1.0;
      row.origin_customer = i;
      for (int j = 0; j < inst.m(); ++j)
        if (exceeds(inst.d(i, j), ub / beta)) {
          row.idx.push_back(vars.x_f1(i, j));
          row.val.push_back(1.0);
        }
      if (!row.idx.empty()) out.push_back(std::move(row));
    }
  return out;
}

std::vector<CutRow> general_ub_rows(const Instance& inst, int alpha, double ub,
                                    const std::vector<double>& x_star,
                                    int max_rows, const VarMap& vars,
                                    const std::vector<char>* eligible) {
  check_f1(vars);
  std::vector<CutRow> out;
  if (max_rows <= 0) return out;
  const int m = inst.m();

  for (int i = 0; i < inst.n(); ++i) {
    if (eligible && !(*eligible)[i]) continue;
    // Candidates in decreasing x* order (ties by id): the likely-violated
    // facilities seed the clique growth.
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double xa = x_star[vars.x_f1(i, a)];
      const double xb = x_star[vars.x_f1(i, b)];
      if (xa != xb) return xa > xb;
      return a < b;
    });
    const std::vector<int> near = by_distance(inst, i);

    for (int beta = 2; beta <= alpha; ++beta) {
      std::vector<int> clique;
      for (int j : order) {
        // Accept j when every beta-subset B of clique ∪ {j} through j keeps
        // the cheapest completing assignment above ub: d_iB plus the
        // alpha - beta nearest facilities outside B.
        bool ok = true;
        for_each_subset(
            static_cast<int>(clique.size()), beta - 1,
            [&](const std::vector<int>& pos) {
              if (!ok) return;
              double d_b = inst.d(i, j);
              for (int t : pos) d_b += inst.d(i, clique[t]);
              int picked = 0;
              for (int t = 0; t < m && picked < alpha - beta; ++t) {
                const int cand = near[t];
                if (cand == j) continue;
                bool in_b = false;
                for (int u : pos)
                  if (clique[u] == cand) in_b = true;
                if (in_b) continue;
                d_b += inst.d(i, cand);
                ++picked;
              }
              if (!exceeds(d_b, ub)) ok = false;
            });
        if (ok) clique.push_back(j);
      }
      double lhs = 0.0;
      for (int j : clique) lhs += x_star[vars.x_f1(i, j)];
      if (lhs > beta - 1.0 + kViolationTol) {
        CutRow row;
        row.family = CutFamily::GeneralUB;
        row.rel = Rel::LE;
        row.rhs = beta - 1.0;
        row.origin_customer = i;
        std::sort(clique.begin(), clique.end());
        for (int j : clique) {
          row.idx.push_back(vars.x_f1(i, j));
          row.val.push_back(1.0);
        }
        out.push_back(std::move(row));
        break;  // one row per customer
      }
    }
    if (static_cast<int>(out.size()) >= max_rows) break;
  }
  return out;
}

std::vector<CutRow> linking_rows_initial(const Instance& inst, int k,
                                         const VarMap& vars) {
  check_f1(vars);
  std::vector<CutRow> out;
  if (k <= 0) return out;
  for (int i = 0; i < inst.n(); ++i) {
    const std::vector<int> order = by_distance(inst, i);
    for (int t = 0; t < k && t < inst.m(); ++t) {
      const int j = order[t];
      out.push_back(CutRow{CutFamily::Linking,
                           {vars.x_f1(i, j), vars.y(j)},
                           {1.0, -1.0},
                           Rel::LE,
                           0.0,
                           i});
    }
  }
  return out;
}

std::vector<CutRow> separate_linking(const Instance& inst,
                                     const std::vector<double>& x_star,
                                     const std::vector<double>& y_star,
                                     Rng& rng, const VarMap& vars,
                                     const std::vector<char>* eligible) {
  check_f1(vars);
  std::vector<CutRow> out;
  std::vector<int> customers(inst.n());
  std::iota(customers.begin(), customers.end(), 0);
  for (int t = inst.n() - 1; t > 0; --t)
    std::swap(customers[t], customers[rng.next_int(t + 1)]);

  for (int i : customers) {
    if (eligible && !(*eligible)[i]) continue;
    for (int j : by_distance(inst, i)) {
      if (x_star[vars.x_f1(i, j)] - y_star[j] > kViolationTol) {
        out.push_back(CutRow{CutFamily::Linking,
                             {vars.x_f1(i, j), vars.y(j)},
                             {1.0, -1.0},
                             Rel::LE,
                             0.0,
                             i});
        break;  // one row per customer, nearest violated facility
      }
    }
  }
  return out;
}

std::vector<CutRow> closest_assignment_rows(const Instance& inst, int alpha,
                                            const VarMap& vars) {
  if (vars.kind != FormKind::F3)
    throw std::invalid_argument(
        "closest_assignment_rows: VarMap must describe an F3-family model");
  if (vars.alpha != alpha)
    throw std::invalid_argument("closest_assignment_rows: alpha mismatch");
  const int S = vars.num_subsets();
  std::vector<CutRow> out;
  out.reserve(static_cast<std::size_t>(inst.n()) * inst.m());
  for (int i = 0; i < inst.n(); ++i) {
    // Farthest member distance of each subset.
    std::vector<double> d_max(S, 0.0);
    for (int a = 0; a < S; ++a)
      for (int j : vars.subset_catalog[a])
        d_max[a] = std::max(d_max[a], inst.d(i, j));
    for (int j = 0; j < inst.m(); ++j) {
      CutRow row;
      row.family = CutFamily::ClosestAssign;
      row.rel = Rel::LE;
      row.rhs = 1.0;
      row.origin_customer = i;
      row.idx.push_back(vars.y(j));
      row.val.push_back(1.0);
      for (int a = 0; a < S; ++a) {
        const auto& subset = vars.subset_catalog[a];
        if (std::binary_search(subset.begin(), subset.end(), j)) continue;
        if (inst.d(i, j) < d_max[a]) {
          row.idx.push_back(vars.x_f3(i, a));
          row.val.push_back(1.0);
        }
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace paccp
