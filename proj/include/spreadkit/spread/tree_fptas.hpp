#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/objectives.hpp"

namespace spreadkit {

struct SignChoice {
  std::vector<int> signs;  // +1 / -1 per moment
  double value = 0;        // |sum_b s_b m_b| for these signs
};

/// Signs minimising |sum s_b m_b| up to an additive eps_abs. Moments are scaled by 2 m / eps_abs and
/// floored; a sparse DP keeps one sign pattern per reachable scaled sum, and the pattern with the
/// smallest true |sum| is returned.
inline SignChoice knapsack_min_abs(const std::vector<double>& moments, double eps_abs) {
  if (!(eps_abs > 0)) fail(ErrorKind::precondition, "eps_abs must be positive");
  SignChoice out;
  const std::size_t m = moments.size();
  if (m == 0) return out;
  const double Q = 2.0 * static_cast<double>(m) / eps_abs;
  std::vector<std::int64_t> r(m);
  for (std::size_t b = 0; b < m; ++b) {
    if (!(moments[b] >= 0)) fail(ErrorKind::precondition, "moments must be non-negative");
    double scaled = std::floor(moments[b] * Q);
    if (scaled > 4e18 / static_cast<double>(m)) fail(ErrorKind::budget_exceeded, "knapsack scale too fine");
    r[b] = static_cast<std::int64_t>(scaled);
  }

  struct State {
    std::int64_t key;
    double sum;
    int prev;
    bool plus;
  };
  // the first moment is fixed positive; a global flip does not change |sum|
  std::vector<std::vector<State>> layers{{State{r[0], moments[0], -1, true}}};
  for (std::size_t b = 1; b < m; ++b) {
    const auto& prev = layers.back();
    std::vector<State> next;
    next.reserve(prev.size() * 2);
    for (std::size_t k = 0; k < prev.size(); ++k) {
      next.push_back({prev[k].key + r[b], prev[k].sum + moments[b], static_cast<int>(k), true});
      next.push_back({prev[k].key - r[b], prev[k].sum - moments[b], static_cast<int>(k), false});
    }
    std::stable_sort(next.begin(), next.end(), [](const State& x, const State& y) { return x.key < y.key; });
    next.erase(std::unique(next.begin(), next.end(), [](const State& x, const State& y) { return x.key == y.key; }),
               next.end());
    layers.push_back(std::move(next));
  }
  const auto& last = layers.back();
  std::size_t pick = 0;
  for (std::size_t k = 1; k < last.size(); ++k)
    if (std::abs(last[k].sum) < std::abs(last[pick].sum)) pick = k;
  out.value = std::abs(last[pick].sum);
  out.signs.assign(m, 1);
  int idx = static_cast<int>(pick);
  for (std::size_t b = m; b-- > 1;) {
    out.signs[b] = layers[b][idx].plus ? 1 : -1;
    idx = layers[b][idx].prev;
  }
  return out;
}

namespace detail {

struct RootView {
  std::vector<int> dist;
  std::vector<int> branch;  // index into the root's neighbour list, -1 for the root
  std::vector<double> moment;
  double second = 0;
  double moment_total = 0;
};

template <class Scalar>
RootView root_view(const WeightedGraph<Scalar>& g, int v) {
  RootView rv;
  rv.dist = g.distances_from({v});
  rv.branch.assign(g.size(), -1);
  const auto& nb = g.neighbors(v);
  rv.moment.assign(nb.size(), 0.0);
  for (std::size_t b = 0; b < nb.size(); ++b) {
    std::vector<int> stack{nb[b]};
    rv.branch[nb[b]] = static_cast<int>(b);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(u))
        if (w != v && rv.branch[w] < 0) {
          rv.branch[w] = static_cast<int>(b);
          stack.push_back(w);
        }
    }
  }
  for (std::size_t u = 0; u < g.size(); ++u) {
    double p = to_double(g.pi(u)), d = rv.dist[u];
    rv.second += p * d * d;
    if (rv.branch[u] >= 0) rv.moment[rv.branch[u]] += p * d;
  }
  for (double x : rv.moment) rv.moment_total += x;
  return rv;
}

inline double greedy_abs(std::vector<double> m) {
  std::sort(m.begin(), m.end(), std::greater<>());
  double s = 0;
  for (double x : m) s = s > 0 ? s - x : s + x;
  return std::abs(s);
}

}  // namespace detail

/// (1+eps)-approximate spread constant of a tree. For every root v the valuation is +-d(v, u) with one
/// sign per branch at v, so only |E y| = |sum_b s_b m_b| needs minimising. The reported value is the
/// exact variance of the returned valuation and never exceeds the spread constant.
template <class Scalar>
SolveReport<Scalar> tree_spread_fptas(const TreeGraph<Scalar>& t, double eps) {
  if (!(eps > 0)) fail(ErrorKind::precondition, "eps must be positive");
  const auto& g = t.graph();
  const std::size_t n = g.size();
  SolveReport<Scalar> r;
  r.status = make_approx(eps);
  r.witness = Embedding<Scalar>(n, 1);
  r.value = Scalar(0);
  if (n == 1) return r;

  std::vector<detail::RootView> views;
  double lower = 0;
  for (std::size_t v = 0; v < n; ++v) {
    views.push_back(detail::root_view(g, static_cast<int>(v)));
    double s = detail::greedy_abs(views.back().moment);
    lower = std::max(lower, views.back().second - s * s);
  }
  if (!(lower > 0)) return r;  // all mass on one vertex

  const double eps1 = eps / (1 + eps);
  bool have = false;
  int best_root = -1;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& rv = views[v];
    std::vector<int> signs(rv.moment.size(), 1);
    if (rv.moment_total > 0) {
      double eps_abs = std::min(eps1 * lower / (4 * rv.moment_total), std::sqrt(eps1 * lower / 4));
      signs = knapsack_min_abs(rv.moment, eps_abs).signs;
    }
    Embedding<Scalar> y(n, 1);
    for (std::size_t u = 0; u < n; ++u)
      y[u] = rv.branch[u] < 0 ? Scalar(0) : Scalar(signs[rv.branch[u]] * rv.dist[u]);
    Scalar value = variance(y, g);
    if (!have || value > r.value) {
      have = true;
      r.value = value;
      r.witness = std::move(y);
      best_root = static_cast<int>(v);
    }
  }
  r.diagnostics["root"] = std::to_string(best_root);
  r.diagnostics["lower_bound"] = std::to_string(lower);
  return r;
}

}  // namespace spreadkit
