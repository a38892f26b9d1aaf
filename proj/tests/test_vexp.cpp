#include <gtest/gtest.h>

#include <random>

#include "spreadkit/core/objectives.hpp"
#include "spreadkit/gen/generators.hpp"
#include "spreadkit/lambda/oracle.hpp"
#include "spreadkit/lambda/star.hpp"
#include "spreadkit/vexp/vertex_expansion.hpp"

using namespace spreadkit;

namespace {

WeightedGraph<Rational> uniform(std::size_t n, std::vector<Edge> edges) {
  return gen::make_graph(n, std::move(edges), gen::uniform_pi(n));
}

StarGraph<Rational> star(std::vector<Rational> pi) { return StarGraph<Rational>::from_masses(std::move(pi)); }

VertexSet complement(const VertexSet& s, std::size_t n) {
  VertexSet out;
  for (std::size_t v = 0; v < n; ++v)
    if (!std::binary_search(s.begin(), s.end(), static_cast<int>(v))) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

TEST(VexpBruteforce, Examples) {
  auto p3 = vexp_bruteforce(uniform(3, gen::path_edges(3)));
  EXPECT_EQ(p3.value, 2);
  EXPECT_EQ(p3.vertex_set(), (VertexSet{0}));
  auto s4 = vexp_bruteforce(uniform(4, gen::star_edges(4)));
  EXPECT_EQ(s4.value, Rational(3, 2));
  EXPECT_EQ(s4.vertex_set().size(), 2u);
  EXPECT_EQ(vexp_bruteforce(uniform(2, {{0, 1}})).value, 2);
  EXPECT_THROW(vexp_bruteforce(uniform(5, gen::path_edges(5)), 4), Error);
  EXPECT_NEAR(vexp_bruteforce(uniform(4, gen::star_edges(4)).converted<double>()).value, 1.5, 1e-12);
}

TEST(VexpTreeUniform, Examples) {
  EXPECT_EQ(vexp_tree_uniform(TreeGraph<Rational>(uniform(3, gen::path_edges(3)))).value, 2);
  EXPECT_EQ(vexp_tree_uniform(TreeGraph<Rational>(uniform(4, gen::star_edges(4)))).value, Rational(3, 2));
  auto p5 = vexp_tree_uniform(TreeGraph<Rational>(uniform(5, gen::path_edges(5))));
  EXPECT_EQ(p5.value, 1);
  EXPECT_EQ(p5.value, vexp_bruteforce(uniform(5, gen::path_edges(5))).value);
  auto skew = star({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
  EXPECT_THROW(vexp_tree_uniform(TreeGraph<Rational>(skew.graph())), Error);
}

TEST(VexpStarWeighted, Examples) {
  EXPECT_EQ(vexp_star_weighted(star(gen::uniform_pi(4))).value, Rational(3, 2));
  auto g = star({Rational(1, 2), Rational(1, 8), Rational(1, 8), Rational(1, 4)});
  EXPECT_EQ(vexp_star_weighted(g).value, vexp_bruteforce(g.graph()).value);
  EXPECT_EQ(vexp_star_weighted(g).value, 2);
  EXPECT_EQ(vexp_star_weighted(star(gen::uniform_pi(3))).value, 2);
}

TEST(Properties, TreeDpMatchesBruteForceOnAllSmallTrees) {
  int trees = 0;
  for (std::size_t n = 2; n <= 10; ++n)
    for (const auto& edges : gen::all_free_trees(n)) {
      auto g = uniform(n, edges);
      auto dp = vexp_tree_uniform(TreeGraph<Rational>(g));
      auto bf = vexp_bruteforce(g);
      EXPECT_EQ(dp.value, bf.value) << n;
      EXPECT_EQ(expansion_of_set(dp.vertex_set(), g), dp.value);
      ++trees;
    }
  EXPECT_EQ(trees, 200);  // plus the single-vertex tree, which has no proper cut
}

TEST(Properties, TreeDpMatchesBruteForceOnRandomTrees) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + t % 14;
    auto g = uniform(n, gen::random_tree_edges(n, rng));
    auto dp = vexp_tree_uniform(TreeGraph<Rational>(g, static_cast<int>(t % n)));
    EXPECT_EQ(dp.value, vexp_bruteforce(g).value);
    EXPECT_EQ(expansion_of_set(dp.vertex_set(), g), dp.value);
  }
}

TEST(Properties, WitnessAndComplement) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + t % 9;
    auto g = gen::make_graph(n, gen::random_connected_edges(n, t % 4, rng), gen::random_pi(n, rng));
    auto r = vexp_bruteforce(g);
    EXPECT_EQ(expansion_of_set(r.vertex_set(), g), r.value);
    EXPECT_EQ(expansion_of_set(complement(r.vertex_set(), n), g), r.value);
  }
}

TEST(Properties, StarWeightedMatchesBruteForce) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 150; ++t) {
    std::size_t n = 2 + t % 13;
    auto s = StarGraph<Rational>::from_masses(gen::random_pi(n, rng, 20));
    auto r = vexp_star_weighted(s);
    EXPECT_EQ(r.value, vexp_bruteforce(s.graph()).value);
    EXPECT_EQ(expansion_of_set(r.vertex_set(), s.graph()), r.value);
  }
}

TEST(Properties, CheegerSandwichOnStars) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 2 + t % 7;
    auto s = StarGraph<Rational>::from_masses(gen::random_pi(n, rng, 9));
    auto lam = oracle_small(s.graph());
    double phi = to_double(vexp_bruteforce(s.graph()).value);
    EXPECT_TRUE(cheeger_sandwich(lam.lo, phi)) << lam.lo << " " << phi;
    EXPECT_TRUE(cheeger_sandwich(lam.hi, phi)) << lam.hi << " " << phi;
  }
}

TEST(Properties, CheegerSandwichOnSmallGraphs) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 2 + t % 5;
    auto g = gen::make_graph(n, gen::random_connected_edges(n, t % 3, rng), gen::random_pi(n, rng));
    auto lam = oracle_small(g);
    double phi = to_double(vexp_bruteforce(g).value);
    EXPECT_TRUE(cheeger_sandwich(lam.hi, phi)) << lam.hi << " " << phi;
  }
}
