#include "paccp/core.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "paccp/tolerances.hpp"

namespace paccp {

namespace {

void check_alpha_args(const std::vector<int>& P, int alpha) {
  if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  if (static_cast<int>(P.size()) < alpha)
    throw std::invalid_argument("need |P| >= alpha (" +
                                std::to_string(P.size()) + " < " +
                                std::to_string(alpha) + ")");
}

}  // namespace

double subset_distance(const Instance& inst, int i,
                       const std::vector<int>& subset) {
  double sum = 0.0;
  for (int j : subset) sum += inst.d(i, j);
  return sum;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int t = 1; t <= k; ++t) {
    // Saturate well below overflow; budget checks only need "too big".
    if (r > (1LL << 56) / n) return 1LL << 56;
    r = r * (n - k + t) / t;
  }
  return r;
}

double alpha_distance(const Instance& inst, const std::vector<int>& P, int i,
                      int alpha) {
  check_alpha_args(P, alpha);
  // Collect distances to P and sum the alpha smallest.
  std::vector<double> dist;
  dist.reserve(P.size());
  for (int j : P) dist.push_back(inst.d(i, j));
  std::nth_element(dist.begin(), dist.begin() + (alpha - 1), dist.end());
  double sum = 0.0;
  for (int t = 0; t < alpha; ++t) sum += dist[t];
  return sum;
}

double objective(const Instance& inst, const std::vector<int>& P, int alpha) {
  check_alpha_args(P, alpha);
  double worst = 0.0;
  for (int i = 0; i < inst.n(); ++i)
    worst = std::max(worst, alpha_distance(inst, P, i, alpha));
  return worst;
}

std::vector<int> alpha_closest_set(const Instance& inst,
                                   const std::vector<int>& P, int i,
                                   int alpha) {
  check_alpha_args(P, alpha);
  std::vector<std::pair<double, int>> order;
  order.reserve(P.size());
  for (int j : P) order.emplace_back(inst.d(i, j), j);
  std::sort(order.begin(), order.end());  // distance, then lowest id
  std::vector<int> out;
  out.reserve(alpha);
  for (int t = 0; t < alpha; ++t) out.push_back(order[t].second);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> enumerate_alpha_distances(const Instance& inst,
                                              int alpha) {
  const int m = inst.m();
  if (alpha < 1 || alpha > m)
    throw std::invalid_argument("alpha out of range for D^alpha");
  const long long per_customer = binomial(m, alpha);
  if (per_customer > kSubsetBudget)
    throw std::runtime_error(
        "D^alpha enumeration budget exceeded: C(m, alpha) = " +
        std::to_string(per_customer) + "; use a smaller alpha or a restricted "
        "mode");
  const long long total = per_customer * inst.n();
  if (total > kAlphaDistanceSetBudget)
    throw std::runtime_error("D^alpha enumeration budget exceeded: " +
                             std::to_string(total) + " values");

  std::vector<double> values;
  values.reserve(static_cast<size_t>(total));
  for (int i = 0; i < inst.n(); ++i) {
    for_each_subset(m, alpha, [&](const std::vector<int>& A) {
      double sum = 0.0;
      for (int j : A) sum += inst.d(i, j);
      values.push_back(sum);
    });
  }
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values)
    if (out.empty() || v - out.back() > kAlphaDistanceDedupTol)
      out.push_back(v);
  return out;
}

std::pair<double, Solution> brute_force_opt(const Instance& inst, int p,
                                            int alpha, int max_m) {
  const int m = inst.m();
  if (m > max_m)
    throw std::runtime_error("brute-force budget exceeded: m = " +
                             std::to_string(m) + " > " + std::to_string(max_m));
  if (p < alpha || p > m)
    throw std::invalid_argument("need alpha <= p <= m");

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_P;
  // Lexicographic enumeration plus strict improvement yields the
  // lexicographically smallest optimum.
  for_each_subset(m, p, [&](const std::vector<int>& P) {
    const double v = objective(inst, P, alpha);
    if (v < best) {
      best = v;
      best_P = P;
    }
  });
  return {best, Solution{best_P, best}};
}

double variant_value(const Instance& inst, const std::vector<int>& P,
                     const VariantKind& kind) {
  switch (kind.tag) {
    case VariantKind::PCP:
      return objective(inst, P, 1);
    case VariantKind::PACCP:
      return objective(inst, P, kind.alpha);
    case VariantKind::ANPCP: {
      // max over customers outside P of the alpha-th smallest distance to P:
      // min over alpha-subsets A of max_{j in A} d_ij collapses to the
      // alpha-th order statistic.
      check_alpha_args(P, kind.alpha);
      if (!inst.same_locations())
        throw std::invalid_argument("ANPCP requires I = J");
      std::vector<char> in_P(inst.m(), 0);
      for (int j : P) in_P[j] = 1;
      double worst = 0.0;
      std::vector<double> dist;
      for (int i = 0; i < inst.n(); ++i) {
        if (in_P[i]) continue;
        dist.clear();
        for (int j : P) dist.push_back(inst.d(i, j));
        std::nth_element(dist.begin(), dist.begin() + (kind.alpha - 1),
                         dist.end());
        worst = std::max(worst, dist[kind.alpha - 1]);
      }
      return worst;
    }
    case VariantKind::PNCP: {
      if (!inst.same_locations())
        throw std::invalid_argument("PNCP requires I = J");
      if (P.size() < 2)
        throw std::invalid_argument("PNCP requires |P| >= 2");
      double worst = 0.0;
      for (int i = 0; i < inst.n(); ++i) {
        // Closest open facility, ties by lowest id (P is sorted).
        int jprime = P[0];
        for (int j : P)
          if (inst.d(i, j) < inst.d(i, jprime)) jprime = j;
        double backup = std::numeric_limits<double>::infinity();
        for (int k : P)
          if (k != jprime) backup = std::min(backup, inst.d(jprime, k));
        worst = std::max(worst, inst.d(i, jprime) + backup);
      }
      return worst;
    }
  }
  throw std::logic_error("unreachable variant tag");
}

double brute_force_variant_opt(const Instance& inst, int p,
                               const VariantKind& kind, int max_m) {
  const int m = inst.m();
  if (m > max_m)
    throw std::runtime_error("brute-force budget exceeded: m = " +
                             std::to_string(m) + " > " + std::to_string(max_m));
  if (p < 1 || p > m) throw std::invalid_argument("need 1 <= p <= m");
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(m, p, [&](const std::vector<int>& P) {
    best = std::min(best, variant_value(inst, P, kind));
  });
  return best;
}

}  // namespace paccp
