#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/rational.hpp"

namespace spreadkit::gen {

/// pi_v = w_v / sum w with w_v uniform in [1, max_weight].
template <class Rng>
std::vector<Rational> random_pi(std::size_t n, Rng& rng, int max_weight = 12) {
  std::uniform_int_distribution<int> pick(1, max_weight);
  std::vector<long> w(n);
  long total = 0;
  for (auto& x : w) total += (x = pick(rng));
  std::vector<Rational> pi;
  for (long x : w) pi.emplace_back(x, total);
  return pi;
}

inline std::vector<Rational> uniform_pi(std::size_t n) { return std::vector<Rational>(n, Rational(1, n)); }

/// Random labelled tree: vertex v > 0 attaches to a uniform earlier vertex, then labels are shuffled.
template <class Rng>
std::vector<Edge> random_tree_edges(std::size_t n, Rng& rng) {
  std::vector<int> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<int>(i);
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    int a = label[v], b = label[pick(rng)];
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return edges;
}

/// Random tree plus `extra` additional distinct edges (fewer if the graph fills up).
template <class Rng>
std::vector<Edge> random_connected_edges(std::size_t n, std::size_t extra, Rng& rng) {
  auto edges = random_tree_edges(n, rng);
  std::set<Edge> have(edges.begin(), edges.end());
  std::size_t max_edges = n * (n - 1) / 2;
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  while (extra > 0 && have.size() < max_edges) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    Edge e{std::min(a, b), std::max(a, b)};
    if (have.insert(e).second) {
      edges.push_back(e);
      --extra;
    }
  }
  return edges;
}

inline std::vector<Edge> path_edges(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({static_cast<int>(i), static_cast<int>(i + 1)});
  return e;
}

inline std::vector<Edge> star_edges(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.push_back({0, static_cast<int>(i)});
  return e;
}

inline std::vector<Edge> cycle_edges(std::size_t n) {
  auto e = path_edges(n);
  if (n >= 3) e.push_back({0, static_cast<int>(n - 1)});
  return e;
}

inline std::vector<Edge> complete_edges(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.push_back({static_cast<int>(i), static_cast<int>(j)});
  return e;
}

/// d-dimensional hypercube on 2^d vertices.
inline std::vector<Edge> hypercube_edges(int d) {
  std::vector<Edge> e;
  for (int v = 0; v < (1 << d); ++v)
    for (int b = 0; b < d; ++b)
      if (int w = v ^ (1 << b); v < w) e.push_back({v, w});
  return e;
}

template <class Scalar = Rational>
WeightedGraph<Scalar> make_graph(std::size_t n, std::vector<Edge> edges, std::vector<Rational> pi,
                                 GraphOptions opts = {}) {
  WeightedGraph<Rational> g(n, std::move(edges), std::move(pi), opts);
  if constexpr (is_exact_v<Scalar>) {
    return g;
  } else {
    return g.template converted<Scalar>();
  }
}

/// Claw: center 0 with mass 0 and three leaves of mass 1/3.
inline WeightedGraph<Rational> claw() {
  return WeightedGraph<Rational>(4, star_edges(4), {Rational(0), Rational(1, 3), Rational(1, 3), Rational(1, 3)},
                                 GraphOptions{true});
}

namespace detail {
inline std::string rooted_code(int v, int parent, const std::vector<std::vector<int>>& adj) {
  std::vector<std::string> kids;
  for (int w : adj[v])
    if (w != parent) kids.push_back(rooted_code(w, v, adj));
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (auto& k : kids) s += k;
  return s + ")";
}

inline std::vector<int> centers(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  if (n <= 2) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  std::vector<int> deg(n);
  std::vector<int> layer;
  for (int v = 0; v < n; ++v)
    if ((deg[v] = static_cast<int>(adj[v].size())) <= 1) layer.push_back(v);
  int left = n;
  while (left > 2) {
    left -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer)
      for (int w : adj[v])
        if (--deg[w] == 1) next.push_back(w);
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}
}  // namespace detail

/// Canonical string of an unrooted tree (AHU encoding rooted at the center).
inline std::string tree_canonical_form(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::string best;
  for (int c : detail::centers(adj)) {
    auto code = detail::rooted_code(c, -1, adj);
    if (best.empty() || code < best) best = code;
  }
  return best;
}

/// Every rooted unlabelled tree on n vertices, as level sequences (root at level 1).
inline std::vector<std::vector<int>> rooted_level_sequences(std::size_t n) {
  require(n >= 1, "need at least one vertex");
  std::vector<std::vector<int>> out;
  std::vector<int> L(n);
  for (std::size_t i = 0; i < n; ++i) L[i] = static_cast<int>(i) + 1;
  while (true) {
    out.push_back(L);
    int p = -1;
    for (int i = static_cast<int>(n) - 1; i >= 0; --i)
      if (L[i] > 2) {
        p = i;
        break;
      }
    if (p < 0) break;
    int q = p - 1;
    while (L[q] != L[p] - 1) --q;
    for (std::size_t i = p; i < n; ++i) L[i] = L[i - (p - q)];
  }
  return out;
}

inline std::vector<Edge> level_sequence_edges(const std::vector<int>& L) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < L.size(); ++i) {
    std::size_t j = i;
    while (L[--j] != L[i] - 1) {
    }
    edges.push_back({static_cast<int>(j), static_cast<int>(i)});
  }
  return edges;
}

/// All unlabelled (free) trees on n vertices, one edge list each.
inline std::vector<std::vector<Edge>> all_free_trees(std::size_t n) {
  std::set<std::string> seen;
  std::vector<std::vector<Edge>> out;
  for (const auto& L : rooted_level_sequences(n)) {
    auto edges = level_sequence_edges(L);
    if (seen.insert(tree_canonical_form(n, edges)).second) out.push_back(std::move(edges));
  }
  return out;
}

}  // namespace spreadkit::gen
