#pragma once

#include <optional>
#include <vector>

#include "paccp/instance.hpp"
#include "paccp/lp.hpp"

// LP relaxations of the three pαCCP formulations.
//
//   F1   — per-facility assignment:  x_ij picks the α serving facilities.
//   F2   — layered assignment:       x^β_ij picks the β-th closest facility.
//   F3   — subset assignment:        x_iA picks a whole α-subset A ⊆ J.
//          The "valid" variant (F3-V) aggregates the linking rows.
//
// All builders minimize z with x, y boxed into [0,1] and z free.  The column
// and row layouts below are fixed contracts; the branch-and-cut driver
// addresses F1 rows by these positions.

namespace paccp {

enum class FormKind { F1, F2, F3 };

// Column layout (ncols listed last):
//   F1: x(i,j) = i·m + j            y(j) = n·m + j         z = n·m + m
//   F2: x(β,i,j) = ((β−1)n + i)m + j, β ∈ 1..α
//                                    y(j) = α·n·m + j      z = α·n·m + m
//   F3: x(i,a) = i·S + a, a = subset id (lexicographic catalog, |·| = S)
//                                    y(j) = n·S + j        z = n·S + m
struct VarMap {
  FormKind kind = FormKind::F1;
  int n = 0, m = 0, alpha = 1;
  std::vector<std::vector<int>> subset_catalog;  // F3 family only

  int num_subsets() const { return static_cast<int>(subset_catalog.size()); }
  int x_f1(int i, int j) const { return i * m + j; }
  int x_f2(int beta, int i, int j) const {
    return ((beta - 1) * n + i) * m + j;
  }
  int x_f3(int i, int a) const { return i * num_subsets() + a; }
  int y(int j) const {
    const int base = kind == FormKind::F1   ? n * m
                     : kind == FormKind::F2 ? alpha * n * m
                                            : n * num_subsets();
    return base + j;
  }
  int z() const { return y(0) + m; }
  int num_cols() const { return z() + 1; }
};

struct Relaxation {
  LpModel model;
  VarMap vars;
};

// All α-subsets of {0..m-1} in lexicographic order.  Throws when C(m, α)
// exceeds the enumeration budget.
std::vector<std::vector<int>> make_subset_catalog(int m, int alpha);

// Row layout for F1 (relied on by the solver):
//   row 0                 Σ_j y_j = p
//   rows 1 .. n           Σ_j x_ij = α               (customer i at 1+i)
//   rows n+1 .. 2n        Σ_j d_ij x_ij − z ≤ 0      (customer i at n+1+i)
//   rows 2n+1 ...         x_ij − y_j ≤ 0 when include_all_linking (i-major)
// include_all_linking defaults to true when n·m fits the all-linking budget;
// pass an explicit value to override (false = separation mode, no linking).
Relaxation build_f1_relaxation(
    const Instance& inst, int p, int alpha,
    std::optional<bool> include_all_linking = std::nullopt);

Relaxation build_f2_relaxation(const Instance& inst, int p, int alpha);

// with_valid=false: per-element linking x_iA ≤ y_j for each j ∈ A (F3).
// with_valid=true:  aggregated linking Σ_{A∋j} x_iA ≤ y_j (F3-V).
Relaxation build_f3_relaxation(const Instance& inst, int p, int alpha,
                               bool with_valid);

}  // namespace paccp
