#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spreadkit/core/objectives.hpp"
#include "spreadkit/gen/generators.hpp"
#include "spreadkit/mve/branch_moments.hpp"
#include "spreadkit/mve/lift.hpp"
#include "spreadkit/mve/rounding.hpp"
#include "spreadkit/mve/tree_mve2.hpp"
#include "spreadkit/spread/abs_oracle.hpp"

using namespace spreadkit;

namespace {

WeightedGraph<Rational> path(std::size_t n) { return gen::make_graph(n, gen::path_edges(n), gen::uniform_pi(n)); }

WeightedGraph<Rational> random_tree(std::size_t n, std::mt19937_64& rng) {
  return gen::make_graph(n, gen::random_tree_edges(n, rng), gen::random_pi(n, rng));
}

// Branch data at v straight from BFS: label each vertex by the neighbour of v it is reached through.
struct DirectBranch {
  Rational mass, moment, second;
};
std::map<int, DirectBranch> direct_branches(const WeightedGraph<Rational>& g, int v) {
  auto d = g.distances_from({v});
  std::map<int, DirectBranch> out;
  for (int w : g.neighbors(v)) {
    std::vector<int> seen(g.size(), 0), stack{w};
    seen[v] = seen[w] = 1;
    DirectBranch b{0, 0, 0};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      b.mass += g.pi(u);
      b.moment += g.pi(u) * d[u];
      b.second += g.pi(u) * d[u] * d[u];
      for (int x : g.neighbors(u))
        if (!seen[x]) {
          seen[x] = 1;
          stack.push_back(x);
        }
    }
    out[w] = b;
  }
  return out;
}

Embedding<double> cube_lift() {
  Embedding<double> x(8, 3);
  for (int v = 0; v < 8; ++v)
    for (int c = 0; c < 3; ++c) x(v, c) = (v >> c & 1) ? 0.5 : -0.5;
  return x;
}

}  // namespace

TEST(BranchMoments, Examples) {
  auto claw = branch_moments(TreeGraph<Rational>(gen::claw()));
  ASSERT_EQ(claw.at[0].size(), 3u);
  for (const auto& b : claw.at[0]) {
    EXPECT_EQ(b.mass, Rational(1, 3));
    EXPECT_EQ(b.moment, Rational(1, 3));
  }
  auto p3 = branch_moments(TreeGraph<Rational>(path(3)));
  for (const auto& b : p3.at[1]) {
    EXPECT_EQ(b.mass, Rational(1, 3));
    EXPECT_EQ(b.moment, Rational(1, 3));
  }
  ASSERT_EQ(p3.at[0].size(), 1u);
  EXPECT_EQ(p3.at[0][0].mass, Rational(2, 3));
  EXPECT_EQ(p3.at[0][0].moment, 1);
}

TEST(TreeMve2, Examples) {
  auto claw = tree_mve2_value(TreeGraph<Rational>(gen::claw()));
  EXPECT_EQ(claw.value, 1);
  EXPECT_EQ(claw.diagnostics.at("case"), "vertex");
  EXPECT_EQ(claw.diagnostics.at("u"), "0");
  EXPECT_EQ(claw.value / abs_oracle(gen::claw()).value, Rational(9, 8));

  auto p3 = tree_mve2_value(TreeGraph<Rational>(path(3)));
  EXPECT_EQ(p3.value, Rational(2, 3));
  EXPECT_EQ(p3.value, abs_oracle(path(3)).value);

  auto k2 = tree_mve2_value(TreeGraph<Rational>(path(2)));
  EXPECT_EQ(k2.value, Rational(1, 4));
  EXPECT_EQ(k2.diagnostics.at("case"), "edge");
  EXPECT_EQ(k2.diagnostics.at("alpha"), "1/2");
  EXPECT_THROW(tree_mve2_value(TreeGraph<Rational>(gen::make_graph(1, {}, {Rational(1)}))), Error);
}

TEST(TreeMve2Embed, Examples) {
  auto y = tree_mve2_embed(TreeGraph<Rational>(gen::claw()));
  EXPECT_NEAR(y(0, 0), 0, 1e-12);
  EXPECT_NEAR(y(0, 1), 0, 1e-12);
  for (int a = 1; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) EXPECT_NEAR(y.squared_distance(a, b), 3, 1e-12);  // 120 degrees apart
  EXPECT_NEAR(variance(y, gen::claw().converted<double>()), 1, 1e-12);

  auto p = tree_mve2_embed(TreeGraph<Rational>(path(3)));
  EXPECT_NEAR(p.squared_distance(0, 2), 4, 1e-12);

  auto s = StarGraph<Rational>::from_masses({Rational(0), Rational(1, 2), Rational(1, 4), Rational(1, 4)},
                                            GraphOptions{true});
  auto sy = tree_mve2_embed(TreeGraph<Rational>(s.graph()));
  auto mu = barycenter(sy, s.graph().converted<double>());
  EXPECT_LE(std::hypot(mu[0], mu[1]), 1e-9);
}

TEST(Lift, Examples) {
  auto k2 = lift_solve(path(2).converted<double>());
  EXPECT_NEAR(k2.objective, 0.25, 1e-6);
  EXPECT_NEAR(k2.x.squared_distance(0, 1), 1, 1e-6);

  auto claw = lift_solve(gen::claw().converted<double>());
  EXPECT_GE(claw.objective, 1 - 1e-3);
  EXPECT_TRUE(check_lift(claw, gen::claw().converted<double>()).ok());

  auto c4 = gen::make_graph(4, gen::cycle_edges(4), gen::uniform_pi(4)).converted<double>();
  auto l = lift_solve(c4);
  Embedding<double> square(4, 2, {0, 0, 1, 0, 1, 1, 0, 1});
  EXPECT_GE(l.objective, variance(square, c4) - 1e-6);
  EXPECT_LE(l.objective, l.dual_bound + 1e-12);
  EXPECT_NEAR(l.dual_bound, 0.5, 1e-4);
}

TEST(Lift, Errors) {
  auto g = path(3).converted<double>();
  EXPECT_THROW(lift_solve(g, 0), Error);
  EXPECT_THROW(lift_solve(g, 1e-6, 0), Error);
}

TEST(Rounding, TauValue) {
  EXPECT_NEAR(rounding_tau(4, 16), 4 + 2 * std::sqrt(12 * std::log(16.0)) + 6 * std::log(16.0), 1e-12);
  EXPECT_NEAR(rounding_tau(4, 16), 32.17, 0.01);
}

TEST(Rounding, ConstantLiftGivesZeroVariance) {
  auto g = path(4).converted<double>();
  Embedding<double> x(4, 3, std::vector<double>(12, 0.7));
  auto r = gaussian_round(x, g, 2, 9);
  EXPECT_EQ(variance(r.y, g), 0);
  EXPECT_TRUE(r.report.lipschitz_ok);
}

TEST(Rounding, Deterministic) {
  auto g = gen::claw().converted<double>();
  auto lift = lift_solve(g);
  auto a = gaussian_round(lift.x, g, 2, 77), b = gaussian_round(lift.x, g, 2, 77);
  EXPECT_EQ(a.y.data(), b.y.data());
  EXPECT_NE(a.y.data(), gaussian_round(lift.x, g, 2, 78).y.data());
}

TEST(Rounding, ClawMonteCarloExpectation) {
  auto g = gen::claw().converted<double>();
  auto lift = lift_solve(g);
  const int k = 2, T = 10000;
  double tau = rounding_tau(k, 4);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      double s = 0, s2 = 0;
      for (int t = 0; t < T; ++t) {
        double d = gaussian_round(lift.x, g, k, t).y.squared_distance(u, v) * tau / k;
        s += d;
        s2 += d * d;
      }
      double mean = s / T, se = std::sqrt((s2 / T - mean * mean) / T);
      EXPECT_LE(std::abs(mean - lift.x.squared_distance(u, v)), 3 * se) << u << "," << v;
    }
}

TEST(Pca, Examples) {
  auto g = gen::claw().converted<double>();
  auto lift = lift_solve(g);
  auto y = pca_round(lift.x, g, 2);
  EXPECT_NEAR(variance(y, g), lift.objective, 1e-9);

  auto q3 = gen::make_graph(8, gen::hypercube_edges(3), gen::uniform_pi(8)).converted<double>();
  auto x = cube_lift();
  EXPECT_NEAR(variance(pca_round(x, q3, 1), q3) / variance(x, q3), 1.0 / 3, 1e-12);
  EXPECT_NEAR(variance(pca_round(x, q3, 3), q3), variance(x, q3), 1e-12);
  EXPECT_TRUE(lipschitz_check(pca_round(x, q3, 2), q3, 1e-12).ok);
}

TEST(Properties, BranchMomentsMatchDirect) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + t % 14;
    auto g = random_tree(n, rng);
    auto bm = branch_moments(TreeGraph<Rational>(g, static_cast<int>(t % n)));
    for (std::size_t v = 0; v < n; ++v) {
      auto direct = direct_branches(g, static_cast<int>(v));
      ASSERT_EQ(direct.size(), bm.at[v].size());
      Rational mass = 0;
      for (const auto& b : bm.at[v]) {
        EXPECT_EQ(b.mass, direct[b.via].mass);
        EXPECT_EQ(b.moment, direct[b.via].moment);
        EXPECT_EQ(b.second, direct[b.via].second);
        EXPECT_GE(b.moment, 0);
        mass += b.mass;
      }
      EXPECT_EQ(mass, 1 - g.pi(static_cast<int>(v)));
    }
  }
}

TEST(Properties, TreeMve2CaseAndEmbedding) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 150; ++t) {
    std::size_t n = 2 + t % 14;
    auto g = random_tree(n, rng);
    TreeGraph<Rational> tree(g);
    auto r = tree_mve2_value(tree);
    EXPECT_EQ(r.diagnostics.at("feasible_cases"), "1");
    if (n <= 12) {
      EXPECT_GE(r.value, abs_oracle(g).value);
    }
    auto y = tree_mve2_embed(tree);
    auto gd = g.converted<double>();
    EXPECT_TRUE(lipschitz_check(y, gd, 1e-9).ok);
    for (auto e : g.edges()) EXPECT_NEAR(y.squared_distance(e.u, e.v), 1, 1e-9);
    EXPECT_NEAR(variance(y, gd), to_double(r.value), 1e-9);
    auto mu = barycenter(y, gd);
    EXPECT_LE(std::hypot(mu[0], mu[1]), 1e-9);
  }
}

TEST(Properties, LiftMatchesTreeValue) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 2 + t % 9;
    auto g = random_tree(n, rng);
    double truth = to_double(tree_mve2_value(TreeGraph<Rational>(g)).value);
    auto gd = g.converted<double>();
    auto lift = lift_solve(gd);
    EXPECT_TRUE(check_lift(lift, gd).ok());
    EXPECT_NEAR(lift.objective, truth, 1e-3);
    EXPECT_GE(lift.dual_bound, truth - 1e-9);
  }
}

TEST(Properties, LiftDualGapOnGeneralGraphs) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 3 + t % 6;
    auto g = gen::make_graph(n, gen::random_connected_edges(n, 1 + t % 4, rng), gen::random_pi(n, rng));
    auto gd = g.converted<double>();
    auto lift = lift_solve(gd);
    EXPECT_TRUE(check_lift(lift, gd).ok());
    EXPECT_TRUE(lift.converged);
    EXPECT_LE(lift.dual_bound - lift.objective, 1e-4 * lift.dual_bound);
    EXPECT_GE(lift.objective, to_double(abs_oracle(g).value) - 1e-9);
  }
}

TEST(Properties, RoundingConcentration) {
  std::mt19937_64 rng(35);
  auto g = random_tree(10, rng).converted<double>();
  auto lift = lift_solve(g);
  for (int k : {1, 3, 10}) {
    const int T = 4000;
    int lip_fail = 0, retained = 0;
    for (int s = 0; s < T; ++s) {
      auto r = gaussian_round(lift.x, g, k, s);
      lip_fail += !r.report.lipschitz_ok;
      retained += r.report.variance_retained;
    }
    EXPECT_LE(lip_fail, 2.0 / 10 * T) << k;
    EXPECT_GE(retained, T / 24.0) << k;
  }
}
