#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spreadkit/spreadkit.hpp"

namespace spreadkit::selftest {

struct Mutation {
  bool tau = false;        // drop the log terms from the rounding scale
  bool fptas_grid = false;  // coarsen the star FPTAS grid by 1e5
};

struct Suite {
  std::string name;
  std::function<bool(const Mutation&)> run;
};

inline bool core_suite(const Mutation&) {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 2 + t % 6;
    auto g = gen::make_graph(n, gen::random_connected_edges(n, t % 3, rng), gen::random_pi(n, rng));
    std::vector<Rational> x(n);
    for (auto& v : x) v = Rational(static_cast<long>(std::lround(nd(rng) * 8)), 8);
    auto y = Embedding<Rational>::line(x);
    std::vector<Rational> shifted(n);
    for (std::size_t v = 0; v < n; ++v) shifted[v] = 3 * x[v] + Rational(5, 7);
    if (variance(Embedding<Rational>::line(shifted), g) != 9 * variance(y, g)) return false;
    Rational pairwise = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) pairwise += g.pi(u) * g.pi(v) * (x[u] - x[v]) * (x[u] - x[v]);
    if (pairwise != 2 * variance(y, g)) return false;
  }
  return true;
}

inline bool lambda_suite(const Mutation&) {
  std::mt19937_64 rng(102);
  for (int t = 0; t < 12; ++t) {
    std::size_t n = 3 + t % 4;
    auto s = StarGraph<Rational>::from_masses(gen::random_pi(n, rng, 6));
    auto r = oracle_small(s.graph());
    double lb = to_double(star_lower_bound(s));
    if (r.hi - r.lo > 1e-7 || r.lo < lb - 1e-9) return false;
    if (star_is_tight(s) != (std::abs(r.hi - lb) <= 1e-9)) return false;
    if (std::abs(star_closed_form(s).value - r.hi) > 1e-9) return false;
  }
  return true;
}

inline bool approximation_suite(const Mutation& m) {
  std::mt19937_64 rng(103);
  StarFptasOptions opts;
  if (m.fptas_grid) opts.grid_scale = 1e5;
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 3 + t % 5;
    auto s = StarGraph<Rational>::from_masses(gen::random_pi(n, rng));
    double min_pi = 1;
    for (std::size_t v = 0; v < n; ++v) min_pi = std::min(min_pi, to_double(s.graph().pi(v)));
    const double eps = std::min(0.05, 0.9 * min_pi);
    auto r = oracle_small(s.graph());
    double f = star_fptas(s, eps, opts).value;
    if (f < r.lo - 1e-9 || f > (1 + eps) * r.hi + 1e-9) return false;
  }
  return true;
}

inline bool spread_suite(const Mutation&) {
  std::mt19937_64 rng(104);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 2 + t % 8;
    auto g = gen::make_graph(n, gen::random_tree_edges(n, rng), gen::random_pi(n, rng));
    auto exact = abs_oracle(g);
    for (auto e : g.edges())
      if (exact.witness.squared_distance(e.u, e.v) != 1) return false;
    if (abs_oracle(g, AbsOracleOptions{14, true}).value != exact.value) return false;
    auto f = tree_spread_fptas(TreeGraph<Rational>(g), 1e-3);
    if (f.value > exact.value || to_double(f.value) * 1.001 < to_double(exact.value) * (1 - 1e-12)) return false;
    auto s = StarGraph<Rational>::from_masses(gen::random_pi(n, rng));
    if (star_spread_exact(s).value != abs_oracle(s.graph()).value) return false;
  }
  return true;
}

inline bool mve_suite(const Mutation&) {
  std::mt19937_64 rng(105);
  for (int t = 0; t < 15; ++t) {
    std::size_t n = 2 + t % 8;
    auto g = gen::make_graph(n, gen::random_tree_edges(n, rng), gen::random_pi(n, rng));
    TreeGraph<Rational> tree(g);
    auto r = tree_mve2_value(tree);
    if (r.diagnostics.at("feasible_cases") != "1") return false;
    auto gd = g.converted<double>();
    auto y = tree_mve2_embed(tree);
    if (!lipschitz_check(y, gd, 1e-9).ok) return false;
    if (std::abs(variance(y, gd) - to_double(r.value)) > 1e-9) return false;
    auto lift = lift_solve(gd);
    if (!check_lift(lift, gd).ok() || std::abs(lift.objective - to_double(r.value)) > 1e-3) return false;
  }
  return true;
}

inline bool rounding_suite(const Mutation& m) {
  std::mt19937_64 rng(106);
  const std::size_t n = 12;
  auto g = gen::make_graph(n, gen::random_tree_edges(n, rng), gen::random_pi(n, rng)).converted<double>();
  auto lift = lift_solve(g);
  for (int k : {1, 2, 4}) {
    RoundingOptions opts;
    if (m.tau) opts.tau = static_cast<double>(k);
    const int T = 2000;
    int lip_fail = 0, kept = 0;
    for (int s = 0; s < T; ++s) {
      auto r = gaussian_round(lift.x, g, k, s, opts);
      lip_fail += !r.report.lipschitz_ok;
      kept += r.report.variance_retained;
    }
    if (lip_fail > 2.0 / n * T || kept < T / 24.0) return false;
  }
  return true;
}

inline bool vexp_suite(const Mutation&) {
  for (std::size_t n = 2; n <= 8; ++n)
    for (const auto& edges : gen::all_free_trees(n)) {
      auto g = gen::make_graph(n, edges, gen::uniform_pi(n));
      if (vexp_tree_uniform(TreeGraph<Rational>(g)).value != vexp_bruteforce(g).value) return false;
    }
  std::mt19937_64 rng(107);
  for (int t = 0; t < 20; ++t) {
    auto s = StarGraph<Rational>::from_masses(gen::random_pi(2 + t % 8, rng));
    if (vexp_star_weighted(s).value != vexp_bruteforce(s.graph()).value) return false;
  }
  return true;
}

inline bool reductions_suite(const Mutation&) {
  std::mt19937_64 rng(108);
  std::uniform_int_distribution<std::int64_t> val(1, 12);
  for (int t = 0; t < 60; ++t) {
    std::vector<std::int64_t> p(1 + t % 7);
    for (auto& x : p) x = val(rng);
    PartitionInstance in(p);
    bool truth = partition_bruteforce(in);
    if (decide_partition(in, 2).yes != truth) return false;
    if (!truth && !lambda_gap_holds(in, 2)) return false;
    if (!spread_gap_check(in, Rational(1, 2)).agrees()) return false;
  }
  return true;
}

inline std::vector<Suite> suites() {
  return {{"core", core_suite},     {"lambda-infinity", lambda_suite}, {"approximation", approximation_suite},
          {"spread", spread_suite}, {"mve", mve_suite},                {"rounding", rounding_suite},
          {"vexp", vexp_suite},     {"reductions", reductions_suite}};
}

}  // namespace spreadkit::selftest
