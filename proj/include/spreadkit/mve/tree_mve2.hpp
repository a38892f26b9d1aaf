#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/rational.hpp"
#include "spreadkit/mve/branch_moments.hpp"

namespace spreadkit {

/// Where the barycenter of an optimal planar embedding sits: on vertex u, or on edge (u, v) at
/// distance alpha from u.
template <class Scalar>
struct Mve2Case {
  bool on_edge = false;
  int u = -1;
  int v = -1;
  Scalar alpha{};
  Scalar value{};
  int feasible = 0;  // number of feasible cases seen; 1 for every tree with positive masses
};

template <class Scalar>
Mve2Case<Scalar> tree_mve2_case(const TreeGraph<Scalar>& t, const BranchMoments<Scalar>& bm) {
  const auto& g = t.graph();
  const std::size_t n = g.size();
  Mve2Case<Scalar> out;
  auto take = [&](Mve2Case<Scalar> c) {
    if (out.feasible++ == 0) {
      c.feasible = 0;
      out = c;
      out.feasible = 1;
    }
  };

  for (std::size_t v = 0; v < n; ++v) {
    Scalar mx(0);
    for (const auto& b : bm.at[v]) mx = std::max(mx, b.moment);
    if (2 * mx <= bm.moment_total[v]) {
      Mve2Case<Scalar> c;
      c.u = static_cast<int>(v);
      c.value = bm.second_total[v];
      take(c);
    }
  }
  for (const auto& e : g.edges()) {
    // side 1 holds u, side 2 holds v; moments about their own endpoint
    const auto& b2 = bm.branch(e.u, e.v);
    const auto& b1 = bm.branch(e.v, e.u);
    Scalar p1 = b1.mass, p2 = b2.mass;
    Scalar m1 = b1.moment - b1.mass, m2 = b2.moment - b2.mass;
    Scalar q1 = b1.second - 2 * b1.moment + b1.mass, q2 = b2.second - 2 * b2.moment + b2.mass;
    if (p1 + p2 == 0) continue;
    Scalar alpha = (p2 + m2 - m1) / (p1 + p2);
    if (!(alpha > 0 && alpha < 1)) continue;
    Mve2Case<Scalar> c;
    c.on_edge = true;
    c.u = e.u;
    c.v = e.v;
    c.alpha = alpha;
    Scalar beta = 1 - alpha;
    c.value = q1 + 2 * alpha * m1 + alpha * alpha * p1 + q2 + 2 * beta * m2 + beta * beta * p2;
    take(c);
  }
  if (out.feasible == 0) fail(ErrorKind::non_convergence, "no feasible barycenter case");
  return out;
}

/// Two-dimensional maximum variance of a tree. Either the barycenter sits on a vertex whose branch
/// moments can cancel (2 max <= sum), or inside an edge with every branch on one line.
template <class Scalar>
SolveReport<Scalar> tree_mve2_value(const TreeGraph<Scalar>& t) {
  if (t.size() < 2) fail(ErrorKind::precondition, "tree needs at least two vertices");
  auto c = tree_mve2_case(t, branch_moments(t));
  SolveReport<Scalar> r;
  r.value = c.value;
  r.diagnostics["case"] = c.on_edge ? "edge" : "vertex";
  r.diagnostics["u"] = std::to_string(c.u);
  if (c.on_edge) {
    r.diagnostics["v"] = std::to_string(c.v);
    if constexpr (is_exact_v<Scalar>) {
      r.diagnostics["alpha"] = to_string(c.alpha);
    } else {
      r.diagnostics["alpha"] = std::to_string(c.alpha);
    }
  }
  r.diagnostics["feasible_cases"] = std::to_string(c.feasible);
  return r;
}

namespace detail {

// Greedy split into three groups, heaviest item first into the lightest group. If 2 max <= sum
// the largest group is at most the sum of the other two.
inline std::vector<int> three_groups(const std::vector<double>& m, std::array<double, 3>& sums) {
  std::vector<int> idx(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return m[a] > m[b]; });
  std::vector<int> group(m.size(), 0);
  sums = {0, 0, 0};
  for (int i : idx) {
    int g = static_cast<int>(std::min_element(sums.begin(), sums.end()) - sums.begin());
    group[i] = g;
    sums[g] += m[i];
  }
  return group;
}

}  // namespace detail

/// A planar embedding attaining tree_mve2_value, every edge at length exactly 1.
template <class Scalar>
Embedding<double> tree_mve2_embed(const TreeGraph<Scalar>& t) {
  const auto& g = t.graph();
  const std::size_t n = g.size();
  if (n < 2) fail(ErrorKind::precondition, "tree needs at least two vertices");
  auto bm = branch_moments(t);
  auto c = tree_mve2_case(t, bm);
  Embedding<double> y(n, 2);

  if (c.on_edge) {
    const double a = to_double(c.alpha);
    auto du = g.distances_from({c.u}), dv = g.distances_from({c.v});
    for (std::size_t w = 0; w < n; ++w)
      y(w, 0) = du[w] < dv[w] ? -(a + du[w]) : (1 - a) + dv[w];
    return y;
  }

  const int v = c.u;
  const auto& br = bm.at[v];
  std::vector<double> m(br.size());
  for (std::size_t i = 0; i < br.size(); ++i) m[i] = to_double(br[i].moment);
  std::array<double, 3> s{};
  auto group = detail::three_groups(m, s);
  std::array<int, 3> rank{0, 1, 2};
  std::sort(rank.begin(), rank.end(), [&](int x, int z) { return s[x] > s[z]; });
  const double A = s[rank[0]], B = s[rank[1]], C = s[rank[2]];
  if (A > B + C + 1e-12 * (A + 1)) fail(ErrorKind::precondition, "branch moments cannot cancel");

  // A e_A + B e_B + C e_C = 0 with e_A = (1, 0)
  std::array<std::array<double, 2>, 3> dir{};
  dir[rank[0]] = {1, 0};
  dir[rank[1]] = {-1, 0};
  dir[rank[2]] = {-1, 0};
  if (A > 0) {
    double bx = (C * C - B * B - A * A) / (2 * A);
    double by = std::sqrt(std::max(0.0, B * B - bx * bx));
    if (B > 0) dir[rank[1]] = {bx / B, by / B};
    if (C > 0) dir[rank[2]] = {(-A - bx) / C, -by / C};
  }

  auto dist = g.distances_from({v});
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < br.size(); ++i) {
    std::vector<int> stack{br[i].via};
    owner[br[i].via] = static_cast<int>(i);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(u))
        if (w != v && owner[w] < 0) {
          owner[w] = static_cast<int>(i);
          stack.push_back(w);
        }
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (owner[u] < 0) continue;
    const auto& d = dir[group[owner[u]]];
    y(u, 0) = dist[u] * d[0];
    y(u, 1) = dist[u] * d[1];
  }
  return y;
}

}  // namespace spreadkit
