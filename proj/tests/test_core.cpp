#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "paccp/core.hpp"
#include "paccp/instance.hpp"
#include "paccp/rng.hpp"
#include "support/gen.hpp"
#include "support/paths.hpp"

using namespace paccp;

namespace {

Instance load_ex1() {
  return build_euclidean_instance(parse_tsplib(read_file(data_path("ex1.tsp"))));
}
Instance load_ex2() {
  return build_euclidean_instance(parse_tsplib(read_file(data_path("ex2.tsp"))));
}
Instance load_ex3() {
  return build_graph_instance(parse_pmed(read_file(data_path("ex3.pmed"))));
}

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

TEST_CASE("alpha_distance basics") {
  Instance ex3 = load_ex3();
  CHECK(alpha_distance(ex3, {0, 1}, 2, 2) == 3.0);  // 2 + 1
  Instance ex1 = load_ex1();
  CHECK(alpha_distance(ex1, {1, 2, 3}, 0, 2) == 2.0);  // 1 + 1 beats sqrt2
  CHECK(alpha_distance(ex1, {0, 1, 2, 3}, 2, 1) == 0.0);  // self-distance

  CHECK_THROWS_AS((void)alpha_distance(ex1, {1}, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)alpha_distance(ex1, {1, 2}, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("objective evaluates the worst customer") {
  Instance ex1 = load_ex1();
  CHECK(objective(ex1, {1, 2, 3}, 2) == 2.0);
  Instance ex3 = load_ex3();
  CHECK(objective(ex3, {0, 2}, 2) == 2.0);
  // alpha = 1 with all facilities open: every customer is collocated.
  CHECK(objective(ex1, {0, 1, 2, 3}, 1) == 0.0);
}

TEST_CASE("alpha_closest_set picks lowest ids on ties") {
  Instance ex1 = load_ex1();
  CHECK(alpha_closest_set(ex1, {1, 2, 3}, 0, 2) == std::vector<int>{1, 3});
  Instance ex3 = load_ex3();
  CHECK(alpha_closest_set(ex3, {0, 2}, 1, 2) == std::vector<int>{0, 2});

  // All-equal distances: the lowest-id subset wins.
  Instance flat("flat", 3, 3,
                {0, 5, 5, 5, 0, 5, 5, 5, 0}, false);
  CHECK(alpha_closest_set(flat, {0, 1, 2}, 0, 2) == std::vector<int>{0, 1});
  Instance allfive("allfive", 2, 4, std::vector<double>(8, 5.0), false);
  CHECK(alpha_closest_set(allfive, {0, 1, 2, 3}, 1, 3) ==
        std::vector<int>{0, 1, 2});
}

TEST_CASE("enumerate_alpha_distances") {
  Instance ex3 = load_ex3();
  CHECK(enumerate_alpha_distances(ex3, 2) == std::vector<double>{1, 2, 3});

  // alpha = 1 reduces to sorted unique entries of d.
  CHECK(enumerate_alpha_distances(ex3, 1) == std::vector<double>{0, 1, 2});

  // Single subset when n=1, m=2.
  Instance tiny("tiny", 1, 2, {3, 4}, false);
  CHECK(enumerate_alpha_distances(tiny, 2) == std::vector<double>{7});

  // Dedup under tolerance: two values 1e-12 apart collapse.
  Instance close("close", 1, 2, {1.0, 1.0 + 1e-12}, false);
  CHECK(enumerate_alpha_distances(close, 1).size() == 1);
}

TEST_CASE("brute_force_opt on the fixtures") {
  Instance ex1 = load_ex1();
  auto [v1, s1] = brute_force_opt(ex1, 3, 2);
  CHECK(v1 == 2.0);
  CHECK(objective(ex1, s1.open, 2) == v1);

  Instance ex3 = load_ex3();
  auto [v3, s3] = brute_force_opt(ex3, 2, 2);
  CHECK(v3 == 2.0);
  CHECK(s3.open == std::vector<int>{0, 2});

  // p = m forces P = J.
  auto [vm, sm] = brute_force_opt(ex3, 3, 2);
  CHECK(vm == objective(ex3, {0, 1, 2}, 2));
  CHECK(sm.open == std::vector<int>{0, 1, 2});

  Instance big("big", 17, 17,
               std::vector<double>(17 * 17, 1.0), false);
  CHECK_THROWS_WITH((void)brute_force_opt(big, 2, 1),
                    doctest::Contains("budget"));
}

TEST_CASE("variant_value reproduces the worked example values") {
  Instance ex1 = load_ex1();
  const std::vector<int> P1 = {1, 2, 3};  // paper's {2,3,4}
  CHECK(variant_value(ex1, P1, VariantKind::anpcp(3)) ==
        doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(variant_value(ex1, P1, VariantKind::pncp()) == 2.0);
  CHECK(variant_value(ex1, P1, VariantKind::paccp(2)) == 2.0);

  Instance ex2 = load_ex2();
  CHECK(variant_value(ex2, {0, 1, 3, 5}, VariantKind::anpcp(3)) == 4.0);
  CHECK(variant_value(ex2, {1, 2, 3, 4}, VariantKind::pncp()) == 2.0);
  CHECK(variant_value(ex2, {0, 2, 3, 5}, VariantKind::paccp(2)) == 2.0);
}

TEST_CASE("brute_force_variant_opt: optimal variant values of the fixtures") {
  Instance ex1 = load_ex1();
  CHECK(brute_force_variant_opt(ex1, 3, VariantKind::anpcp(3)) ==
        doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(brute_force_variant_opt(ex1, 3, VariantKind::pncp()) == 2.0);
  CHECK(brute_force_variant_opt(ex1, 3, VariantKind::paccp(2)) == 2.0);

  Instance ex2 = load_ex2();
  CHECK(brute_force_variant_opt(ex2, 4, VariantKind::anpcp(3)) == 4.0);
  CHECK(brute_force_variant_opt(ex2, 4, VariantKind::pncp()) == 2.0);
  CHECK(brute_force_variant_opt(ex2, 4, VariantKind::paccp(2)) == 2.0);

  Instance ex3 = load_ex3();
  CHECK(brute_force_variant_opt(ex3, 2, VariantKind::pcp()) == 1.0);
}

TEST_CASE("alpha_distance is monotone in P") {
  Rng rng(42);
  for (int round = 0; round < 10; ++round) {
    Instance inst = random_nonmetric_instance(rng, 7, round % 2 == 0);
    const std::vector<int> small = {1, 3, 5};
    const std::vector<int> large = {0, 1, 3, 5, 6};
    for (int alpha = 1; alpha <= 3; ++alpha)
      for (int i = 0; i < inst.n(); ++i)
        CHECK(alpha_distance(inst, large, i, alpha) <=
              alpha_distance(inst, small, i, alpha));
  }
}

TEST_CASE("Theorem-1 inequalities hold on random metric instances") {
  Rng rng(4242);
  for (int round = 0; round < 8; ++round) {
    Instance inst = round % 2 == 0 ? random_metric_instance(rng, 8)
                                   : random_integer_metric_instance(rng, 8);
    const int p = 3 + rng.next_int(3);  // 3..5
    const double pcp = brute_force_variant_opt(inst, p, VariantKind::pcp());
    const double pncp = brute_force_variant_opt(inst, p, VariantKind::pncp());
    CHECK(pcp <= pncp + 1e-9);
    std::vector<double> anpcp(p + 1), paccp(p + 1);
    for (int a = 1; a <= p; ++a) {
      anpcp[a] = brute_force_variant_opt(inst, p, VariantKind::anpcp(a));
      paccp[a] = brute_force_variant_opt(inst, p, VariantKind::paccp(a));
      CHECK(pcp <= anpcp[a] + 1e-9);
      CHECK(anpcp[a] <= paccp[a] + 1e-9);
      if (a >= 2) {
        CHECK(anpcp[a - 1] <= anpcp[a] + 1e-9);
        CHECK(paccp[a - 1] <= paccp[a] + 1e-9);
      }
    }
    CHECK(anpcp[2] <= pncp + 1e-9);
  }
}
