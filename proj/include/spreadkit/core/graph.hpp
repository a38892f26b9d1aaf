#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spreadkit/core/error.hpp"
#include "spreadkit/core/rational.hpp"

namespace spreadkit {

/// Undirected edge with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using VertexSet = std::vector<int>;  // sorted, duplicate-free

struct GraphOptions {
  /// Accept pi_v == 0. Zero-mass vertices still carry Lipschitz constraints.
  bool allow_zero_mass = false;
};

/// Connected simple graph with unit-length edges and a probability mass pi on vertices.
template <class Scalar>
class WeightedGraph {
 public:
  using scalar_type = Scalar;

  WeightedGraph() = default;

  WeightedGraph(std::size_t n, std::vector<Edge> edges, std::vector<Scalar> pi, GraphOptions opts = {})
      : n_(n), edges_(std::move(edges)), pi_(std::move(pi)), adj_(n), allow_zero_mass_(opts.allow_zero_mass) {
    if (n_ == 0) fail(ErrorKind::invalid_input, "graph needs at least one vertex");
    if (pi_.size() != n_) fail(ErrorKind::invalid_input, "pi must have one entry per vertex");
    std::set<Edge> seen;
    for (auto& e : edges_) {
      if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n_ || static_cast<std::size_t>(e.v) >= n_)
        fail(ErrorKind::invalid_input, "edge endpoint out of range");
      if (e.u == e.v) fail(ErrorKind::invalid_input, "self-loop at vertex " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
      if (!seen.insert(e).second)
        fail(ErrorKind::invalid_input,
             "duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    std::sort(edges_.begin(), edges_.end());

    Scalar total = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      if (pi_[v] < 0 || (pi_[v] == 0 && !allow_zero_mass_))
        fail(ErrorKind::invalid_input, "pi_v must be positive (vertex " + std::to_string(v) + ")");
      total += pi_[v];
    }
    if constexpr (is_exact_v<Scalar>) {
      if (total != 1) fail(ErrorKind::invalid_input, "pi must sum to 1 (sum is " + to_string(total) + ")");
    } else {
      if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::invalid_input, "pi must sum to 1 within 1e-12");
    }
    if (!connected()) fail(ErrorKind::invalid_input, "graph is disconnected");
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  std::size_t degree(int v) const { return adj_[v].size(); }
  const std::vector<Scalar>& pi() const noexcept { return pi_; }
  const Scalar& pi(int v) const { return pi_[v]; }
  bool allows_zero_mass() const noexcept { return allow_zero_mass_; }

  bool has_edge(int u, int v) const { return std::binary_search(adj_[u].begin(), adj_[u].end(), v); }
  bool is_tree() const noexcept { return edges_.size() + 1 == n_; }

  Scalar mass(const VertexSet& s) const {
    Scalar m = 0;
    for (int v : s) m += pi_[v];
    return m;
  }

  template <class To>
  WeightedGraph<To> converted() const {
    std::vector<To> p;
    p.reserve(n_);
    for (const auto& x : pi_) p.push_back(scalar_cast<To>(x));
    if constexpr (!is_exact_v<To>) {
      // rounding can move the sum off 1 by a few ulps
      double total = std::accumulate(p.begin(), p.end(), 0.0);
      for (auto& x : p) x /= total;
    }
    return WeightedGraph<To>(n_, edges_, std::move(p), GraphOptions{allow_zero_mass_});
  }

  /// Breadth-first hop distances from a set of sources; -1 when unreachable.
  std::vector<int> distances_from(const VertexSet& sources) const {
    std::vector<int> dist(n_, -1);
    std::vector<int> queue;
    for (int s : sources) {
      dist[s] = 0;
      queue.push_back(s);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int w : adj_[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
    }
    return dist;
  }

 private:
  bool connected() const {
    auto d = distances_from({0});
    return std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; });
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Scalar> pi_;
  std::vector<std::vector<int>> adj_;
  bool allow_zero_mass_ = false;
};

/// A tree rooted at `root`, with parent pointers and a pre-order listing.
template <class Scalar>
class TreeGraph {
 public:
  explicit TreeGraph(WeightedGraph<Scalar> g, int root = 0) : g_(std::move(g)), root_(root) {
    if (!g_.is_tree()) fail(ErrorKind::invalid_input, "graph is not a tree");
    if (root < 0 || static_cast<std::size_t>(root) >= g_.size()) fail(ErrorKind::precondition, "root out of range");
    parent_.assign(g_.size(), -1);
    order_.reserve(g_.size());
    order_.push_back(root);
    std::vector<bool> seen(g_.size(), false);
    seen[root] = true;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      int v = order_[i];
      for (int w : g_.neighbors(v))
        if (!seen[w]) {
          seen[w] = true;
          parent_[w] = v;
          order_.push_back(w);
        }
    }
  }

  const WeightedGraph<Scalar>& graph() const noexcept { return g_; }
  std::size_t size() const noexcept { return g_.size(); }
  int root() const noexcept { return root_; }
  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& parents() const noexcept { return parent_; }
  /// Breadth-first order from the root; every parent precedes its children.
  const std::vector<int>& preorder() const noexcept { return order_; }

  std::vector<int> children(int v) const {
    std::vector<int> out;
    for (int w : g_.neighbors(v))
      if (w != parent_[v]) out.push_back(w);
    return out;
  }

 private:
  WeightedGraph<Scalar> g_;
  int root_;
  std::vector<int> parent_;
  std::vector<int> order_;
};

/// Star with center 0 and leaves 1..n-1.
template <class Scalar>
class StarGraph {
 public:
  explicit StarGraph(WeightedGraph<Scalar> g) : g_(std::move(g)) {
    if (g_.size() < 2) fail(ErrorKind::invalid_input, "a star needs at least one leaf");
    if (g_.degree(0) + 1 != g_.size() || !g_.is_tree())
      fail(ErrorKind::invalid_input, "edges must be exactly {0,i} for every leaf i");
  }

  /// Builds the star from the center mass followed by leaf masses.
  static StarGraph from_masses(std::vector<Scalar> pi, GraphOptions opts = {}) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < pi.size(); ++i) edges.push_back({0, static_cast<int>(i)});
    const std::size_t n = pi.size();
    return StarGraph(WeightedGraph<Scalar>(n, std::move(edges), std::move(pi), opts));
  }

  const WeightedGraph<Scalar>& graph() const noexcept { return g_; }
  std::size_t size() const noexcept { return g_.size(); }
  std::size_t leaf_count() const noexcept { return g_.size() - 1; }
  const Scalar& center_mass() const { return g_.pi(0); }
  const Scalar& leaf_mass(int i) const { return g_.pi(i); }

  template <class To>
  StarGraph<To> converted() const {
    return StarGraph<To>(g_.template converted<To>());
  }

 private:
  WeightedGraph<Scalar> g_;
};

}  // namespace spreadkit
