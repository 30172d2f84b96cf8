#pragma once

// Independent reference for small LPs whose variables all have finite bounds.
// The feasible set is then a polytope, so when it is nonempty the minimum is
// attained at a vertex, and every vertex is the intersection of num_vars
// linearly independent active constraints drawn from rows-as-equalities and
// variable bounds.  This enumerates all such candidate points by brute force
// and keeps the best feasible one -- a completely different algorithm from
// the simplex kernel it is used to cross-check.

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "paccp/lp.hpp"

namespace paccp_test {

namespace detail {

// Solves M x = b (n <= 8) by Gaussian elimination with partial pivoting.
// Returns false when the system is numerically singular.
inline bool dense_solve(std::vector<std::vector<double>> M,
                        std::vector<double> b, std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(M[i][k]) > std::abs(M[piv][k])) piv = i;
    if (std::abs(M[piv][k]) < 1e-9) return false;
    std::swap(M[k], M[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < n; ++i) {
      const double f = M[i][k] / M[k][k];
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) M[i][j] -= f * M[k][j];
      b[i] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= M[i][j] * x[j];
    x[i] = s / M[i][i];
  }
  return true;
}

inline bool point_feasible(const paccp::LpModel& m,
                           const std::vector<double>& x) {
  constexpr double kTol = 1e-7;
  for (int j = 0; j < m.num_vars; ++j) {
    const double tol = kTol * (1.0 + std::abs(x[j]));
    if (x[j] < m.lo[j] - tol || x[j] > m.hi[j] + tol) return false;
  }
  for (const paccp::LpRow& row : m.rows) {
    double a = 0.0;
    for (size_t t = 0; t < row.idx.size(); ++t)
      a += row.val[t] * x[row.idx[t]];
    const double tol = kTol * (1.0 + std::abs(row.rhs));
    if (row.rel == paccp::Rel::LE && a > row.rhs + tol) return false;
    if (row.rel == paccp::Rel::GE && a < row.rhs - tol) return false;
    if (row.rel == paccp::Rel::EQ && std::abs(a - row.rhs) > tol)
      return false;
  }
  return true;
}

}  // namespace detail

// Minimum objective over the feasible polytope, or nullopt when infeasible.
inline std::optional<double> vertex_enum_min(const paccp::LpModel& m) {
  const int n = m.num_vars;
  const int R = static_cast<int>(m.rows.size());
  if (n > 8 || R > 12)
    throw std::invalid_argument("vertex oracle limited to tiny LPs");
  for (int j = 0; j < n; ++j)
    if (m.lo[j] == -paccp::kLpInf || m.hi[j] == paccp::kLpInf)
      throw std::invalid_argument("vertex oracle requires finite boxes");

  std::optional<double> best;
  std::vector<double> x;
  // Choose which rows are active (as equalities)...
  for (int row_mask = 0; row_mask < (1 << R); ++row_mask) {
    const int k = __builtin_popcount(static_cast<unsigned>(row_mask));
    if (k > n) continue;
    const int nfix = n - k;
    // ...which variables are pinned to a bound...
    for (int var_mask = 0; var_mask < (1 << n); ++var_mask) {
      if (__builtin_popcount(static_cast<unsigned>(var_mask)) != nfix)
        continue;
      // ...and, for each pinned variable, which bound.
      for (int side_mask = 0; side_mask < (1 << nfix); ++side_mask) {
        std::vector<std::vector<double>> M;
        std::vector<double> b;
        for (int r = 0; r < R; ++r)
          if (row_mask & (1 << r)) {
            std::vector<double> a(n, 0.0);
            const paccp::LpRow& row = m.rows[r];
            for (size_t t = 0; t < row.idx.size(); ++t)
              a[row.idx[t]] = row.val[t];
            M.push_back(std::move(a));
            b.push_back(row.rhs);
          }
        int fixed_seen = 0;
        for (int j = 0; j < n; ++j)
          if (var_mask & (1 << j)) {
            std::vector<double> a(n, 0.0);
            a[j] = 1.0;
            M.push_back(std::move(a));
            b.push_back((side_mask & (1 << fixed_seen)) ? m.hi[j] : m.lo[j]);
            ++fixed_seen;
          }
        if (!detail::dense_solve(std::move(M), std::move(b), x)) continue;
        if (!detail::point_feasible(m, x)) continue;
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += m.objective[j] * x[j];
        if (!best || obj < *best) best = obj;
      }
    }
  }
  return best;
}

}  // namespace paccp_test
