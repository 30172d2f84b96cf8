#include "paccp/formulations.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "paccp/core.hpp"
#include "paccp/tolerances.hpp"

namespace paccp {

namespace {

void check_pre(const Instance& inst, int p, int alpha) {
  if (!(1 <= alpha && alpha <= p && p < inst.m()))
    throw std::invalid_argument(
        "formulation requires 1 <= alpha <= p < m (alpha=" +
        std::to_string(alpha) + ", p=" + std::to_string(p) +
        ", m=" + std::to_string(inst.m()) + ")");
}

// Shared skeleton: [0,1] boxes on x and y, free z, objective = z.
LpModel boxed_model(int num_x, int m) {
  LpModel model;
  for (int c = 0; c < num_x; ++c) model.add_var(0.0, 1.0, 0.0);
  for (int j = 0; j < m; ++j) model.add_var(0.0, 1.0, 0.0);
  model.add_var(-kLpInf, kLpInf, 1.0);
  return model;
}

LpRow open_count_row(const VarMap& vars, int p) {
  LpRow row;
  row.rel = Rel::EQ;
  row.rhs = p;
  for (int j = 0; j < vars.m; ++j) {
    row.idx.push_back(vars.y(j));
    row.val.push_back(1.0);
  }
  return row;
}

}  // namespace

std::vector<std::vector<int>> make_subset_catalog(int m, int alpha) {
  if (binomial(m, alpha) > kSubsetBudget)
    throw std::runtime_error("subset catalog budget exceeded: C(" +
                             std::to_string(m) + "," + std::to_string(alpha) +
                             ") > " + std::to_string(kSubsetBudget));
  std::vector<std::vector<int>> catalog;
  catalog.reserve(static_cast<size_t>(binomial(m, alpha)));
  for_each_subset(m, alpha,
                  [&](const std::vector<int>& idx) { catalog.push_back(idx); });
  return catalog;
}

Relaxation build_f1_relaxation(const Instance& inst, int p, int alpha,
                               std::optional<bool> include_all_linking) {
  check_pre(inst, p, alpha);
  const int n = inst.n(), m = inst.m();
  const bool all_linking =
      include_all_linking.value_or(static_cast<long long>(n) * m <=
                                   kAllLinkingBudget);

  Relaxation rel;
  rel.vars = {FormKind::F1, n, m, alpha, {}};
  rel.model = boxed_model(n * m, m);
  const VarMap& v = rel.vars;

  rel.model.add_row(open_count_row(v, p));
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::EQ;
    row.rhs = alpha;
    for (int j = 0; j < m; ++j) {
      row.idx.push_back(v.x_f1(i, j));
      row.val.push_back(1.0);
    }
    rel.model.add_row(row);
  }
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::LE;
    row.rhs = 0.0;
    for (int j = 0; j < m; ++j)
      if (inst.d(i, j) != 0.0) {
        row.idx.push_back(v.x_f1(i, j));
        row.val.push_back(inst.d(i, j));
      }
    row.idx.push_back(v.z());
    row.val.push_back(-1.0);
    rel.model.add_row(row);
  }
  if (all_linking)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        rel.model.add_row(
            {{v.x_f1(i, j), v.y(j)}, {1.0, -1.0}, Rel::LE, 0.0});
  return rel;
}

Relaxation build_f2_relaxation(const Instance& inst, int p, int alpha) {
  check_pre(inst, p, alpha);
  const int n = inst.n(), m = inst.m();

  Relaxation rel;
  rel.vars = {FormKind::F2, n, m, alpha, {}};
  rel.model = boxed_model(alpha * n * m, m);
  const VarMap& v = rel.vars;

  rel.model.add_row(open_count_row(v, p));
  for (int beta = 1; beta <= alpha; ++beta)
    for (int i = 0; i < n; ++i) {
      LpRow row;
      row.rel = Rel::EQ;
      row.rhs = 1.0;
      for (int j = 0; j < m; ++j) {
        row.idx.push_back(v.x_f2(beta, i, j));
        row.val.push_back(1.0);
      }
      rel.model.add_row(row);
    }
  // Layer distances are nondecreasing in beta.
  for (int i = 0; i < n; ++i)
    for (int beta = 1; beta < alpha; ++beta) {
      LpRow row;
      row.rel = Rel::LE;
      row.rhs = 0.0;
      for (int j = 0; j < m; ++j) {
        const double d = inst.d(i, j);
        if (d == 0.0) continue;
        row.idx.push_back(v.x_f2(beta, i, j));
        row.val.push_back(d);
        row.idx.push_back(v.x_f2(beta + 1, i, j));
        row.val.push_back(-d);
      }
      rel.model.add_row(row);
    }
  // Aggregated linking: a facility serves at most one layer, and only open.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      LpRow row;
      row.rel = Rel::LE;
      row.rhs = 0.0;
      for (int beta = 1; beta <= alpha; ++beta) {
        row.idx.push_back(v.x_f2(beta, i, j));
        row.val.push_back(1.0);
      }
      row.idx.push_back(v.y(j));
      row.val.push_back(-1.0);
      rel.model.add_row(row);
    }
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::LE;
    row.rhs = 0.0;
    for (int j = 0; j < m; ++j) {
      const double d = inst.d(i, j);
      if (d == 0.0) continue;
      for (int beta = 1; beta <= alpha; ++beta) {
        row.idx.push_back(v.x_f2(beta, i, j));
        row.val.push_back(d);
      }
    }
    row.idx.push_back(v.z());
    row.val.push_back(-1.0);
    rel.model.add_row(row);
  }
  return rel;
}

Relaxation build_f3_relaxation(const Instance& inst, int p, int alpha,
                               bool with_valid) {
  check_pre(inst, p, alpha);
  const int n = inst.n(), m = inst.m();

  Relaxation rel;
  rel.vars = {FormKind::F3, n, m, alpha, make_subset_catalog(m, alpha)};
  const int S = rel.vars.num_subsets();
  rel.model = boxed_model(n * S, m);
  const VarMap& v = rel.vars;

  rel.model.add_row(open_count_row(v, p));
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::EQ;
    row.rhs = 1.0;
    for (int a = 0; a < S; ++a) {
      row.idx.push_back(v.x_f3(i, a));
      row.val.push_back(1.0);
    }
    rel.model.add_row(row);
  }
  if (with_valid) {
    // F3-V: sum of subset picks through j stays under y_j.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        LpRow row;
        row.rel = Rel::LE;
        row.rhs = 0.0;
        for (int a = 0; a < S; ++a) {
          const std::vector<int>& A = v.subset_catalog[a];
          if (std::find(A.begin(), A.end(), j) == A.end()) continue;
          row.idx.push_back(v.x_f3(i, a));
          row.val.push_back(1.0);
        }
        row.idx.push_back(v.y(j));
        row.val.push_back(-1.0);
        rel.model.add_row(row);
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < S; ++a)
        for (int j : v.subset_catalog[a])
          rel.model.add_row(
              {{v.x_f3(i, a), v.y(j)}, {1.0, -1.0}, Rel::LE, 0.0});
  }
  for (int i = 0; i < n; ++i) {
    LpRow row;
    row.rel = Rel::LE;
    row.rhs = 0.0;
    for (int a = 0; a < S; ++a) {
      const double d = subset_distance(inst, i, v.subset_catalog[a]);
      if (d == 0.0) continue;
      row.idx.push_back(v.x_f3(i, a));
      row.val.push_back(d);
    }
    row.idx.push_back(v.z());
    row.val.push_back(-1.0);
    rel.model.add_row(row);
  }
  return rel;
}

}  // namespace paccp
