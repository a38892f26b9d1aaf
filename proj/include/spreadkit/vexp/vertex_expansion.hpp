#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/rational.hpp"
#include "spreadkit/core/subset_sum.hpp"

namespace spreadkit {

namespace detail {

inline VertexSet mask_to_set(std::uint32_t mask, std::size_t n) {
  VertexSet s;
  for (std::size_t v = 0; v < n; ++v)
    if (mask >> v & 1) s.push_back(static_cast<int>(v));
  return s;
}

template <class Scalar>
void set_expansion_diagnostics(SolveReport<Scalar>& r) {
  std::string s;
  for (int v : r.vertex_set()) s += (s.empty() ? "" : ",") + std::to_string(v);
  r.diagnostics["set"] = s;
}

}  // namespace detail

/// Exact vertex expansion by scanning every proper subset S; the boundary is N(S) u N(V \ S).
/// Ties go to the lexicographically smallest S.
template <class Scalar>
SolveReport<Scalar> vexp_bruteforce(const WeightedGraph<Scalar>& g, std::size_t max_n = 20) {
  const std::size_t n = g.size();
  if (n > max_n || n > 30) fail(ErrorKind::budget_exceeded, "graph exceeds the brute-force size limit");
  if (n < 2) fail(ErrorKind::precondition, "vertex expansion needs at least two vertices");

  using Mass = std::conditional_t<is_exact_v<Scalar>, Int128, double>;
  std::vector<Mass> w(n);
  Mass W = 1;
  if constexpr (is_exact_v<Scalar>) {
    auto im = integer_masses(g.pi());
    for (std::size_t v = 0; v < n; ++v) w[v] = im.weight[v];
    W = im.total;
  } else {
    for (std::size_t v = 0; v < n; ++v) w[v] = g.pi(v);
    W = 0;
    for (auto x : w) W += x;
  }
  std::vector<std::uint32_t> nb(n, 0);
  for (auto e : g.edges()) {
    nb[e.u] |= 1u << e.v;
    nb[e.v] |= 1u << e.u;
  }

  const std::uint32_t full = (n == 32) ? ~0u : (1u << n) - 1;
  bool have = false;
  Mass best_num = 0, best_den = 1;
  VertexSet best_set;
  for (std::uint32_t S = 1; S < full; ++S) {
    Mass in = 0, bd = 0;
    for (std::size_t v = 0; v < n; ++v) {
      bool inside = S >> v & 1;
      if (inside) in += w[v];
      if (inside ? (nb[v] & ~S) : (nb[v] & S)) bd += w[v];
    }
    Mass den = std::min(in, W - in);
    if (!(den > 0)) continue;
    // bd / den against best_num / best_den
    if (have) {
      Mass lhs = bd * best_den, rhs = best_num * den;
      if (lhs > rhs) continue;
      if (lhs == rhs) {
        auto cand = detail::mask_to_set(S, n);
        if (!(cand < best_set)) continue;
        best_set = std::move(cand);
        best_num = bd;
        best_den = den;
        continue;
      }
    }
    have = true;
    best_num = bd;
    best_den = den;
    best_set = detail::mask_to_set(S, n);
  }
  if (!have) fail(ErrorKind::degenerate, "no cut with positive mass on both sides");

  SolveReport<Scalar> r;
  if constexpr (is_exact_v<Scalar>) {
    r.value = make_rational(best_num, best_den);
  } else {
    r.value = best_num / best_den;
  }
  r.witness = best_set;
  detail::set_expansion_diagnostics(r);
  return r;
}

/// Exact vertex expansion of a tree with uniform pi. Bottom-up over
/// dp[v][label of v][label of parent] = reachable (vertices in S, boundary vertices) in the subtree.
template <class Scalar>
SolveReport<Scalar> vexp_tree_uniform(const TreeGraph<Scalar>& t) {
  const auto& g = t.graph();
  const int n = static_cast<int>(g.size());
  if (n < 2) fail(ErrorKind::precondition, "vertex expansion needs at least two vertices");
  for (int v = 1; v < n; ++v) {
    bool same;
    if constexpr (is_exact_v<Scalar>) {
      same = g.pi(v) == g.pi(0);
    } else {
      same = std::abs(g.pi(v) - g.pi(0)) <= 1e-12;
    }
    if (!same) fail(ErrorKind::precondition, "tree DP requires uniform pi");
  }

  const int N = n + 1;
  // flat [count][boundary] table
  using Table = std::vector<char>;
  auto cell = [N](int c, int b) { return static_cast<std::size_t>(c) * N + b; };

  // acc[v][lv][lp][j] = state after merging the first j children, third axis is "some child differs"
  struct Acc {
    std::vector<std::array<Table, 2>> steps;
  };
  std::vector<std::array<std::array<Acc, 2>, 2>> acc(n);
  std::vector<std::array<std::array<Table, 2>, 2>> dp(n);
  std::vector<std::vector<int>> kids(n);
  std::vector<int> size(n, 1);

  const auto& order = t.preorder();
  for (int i = n - 1; i >= 0; --i) {
    int v = order[i];
    kids[v] = t.children(v);
    for (int c : kids[v]) size[v] += size[c];
    for (int lv = 0; lv < 2; ++lv) {
      std::array<Table, 2> cur{Table(N * N, 0), Table(N * N, 0)};
      cur[0][cell(0, 0)] = 1;
      std::vector<std::array<Table, 2>> steps{cur};
      int span = 0;
      for (int c : kids[v]) {
        std::array<Table, 2> nxt{Table(N * N, 0), Table(N * N, 0)};
        for (int diff = 0; diff < 2; ++diff)
          for (int a = 0; a <= span; ++a)
            for (int b = 0; b <= span; ++b) {
              if (!cur[diff][cell(a, b)]) continue;
              for (int lc = 0; lc < 2; ++lc) {
                const Table& child = dp[c][lc][lv];
                int nd = diff | (lc != lv);
                for (int ca = 0; ca <= size[c]; ++ca)
                  for (int cb = 0; cb <= size[c]; ++cb)
                    if (child[cell(ca, cb)]) nxt[nd][cell(a + ca, b + cb)] = 1;
              }
            }
        span += size[c];
        cur = std::move(nxt);
        steps.push_back(cur);
      }
      for (int lp = 0; lp < 2; ++lp) {
        // the root has no parent; give it its own label
        if (t.parent(v) < 0 && lp != lv) continue;
        Table out(N * N, 0);
        for (int diff = 0; diff < 2; ++diff)
          for (int a = 0; a <= span; ++a)
            for (int b = 0; b <= span; ++b)
              if (cur[diff][cell(a, b)]) {
                int on = (diff || lv != lp) ? 1 : 0;
                out[cell(a + lv, b + on)] = 1;
              }
        dp[v][lv][lp] = std::move(out);
      }
      acc[v][lv][0].steps = steps;
    }
  }

  const int root = t.root();
  bool have = false;
  int best_b = 0, best_den = 1, best_a = 0, best_l = 0;
  for (int l = 0; l < 2; ++l) {
    const Table& tab = dp[root][l][l];
    for (int a = 1; a < n; ++a)
      for (int b = 0; b <= n; ++b)
        if (tab[cell(a, b)]) {
          int den = std::min(a, n - a);
          if (!have || b * best_den < best_b * den) {
            have = true;
            best_b = b;
            best_den = den;
            best_a = a;
            best_l = l;
          }
        }
  }

  // walk the tables back down to recover one set realising (best_a, best_b)
  std::vector<int> label(n, -1);
  struct Goal {
    int v, lv, lp, a, b;
  };
  std::vector<Goal> todo{{root, best_l, best_l, best_a, best_b}};
  while (!todo.empty()) {
    Goal q = todo.back();
    todo.pop_back();
    label[q.v] = q.lv;
    const auto& steps = acc[q.v][q.lv][0].steps;
    int a = q.a - q.lv, b = -1, diff = -1;
    for (int d = 0; d < 2 && diff < 0; ++d) {
      int on = (d || q.lv != q.lp) ? 1 : 0;
      int bb = q.b - on;
      if (bb >= 0 && a >= 0 && steps.back()[d][cell(a, bb)]) {
        diff = d;
        b = bb;
      }
    }
    if (diff < 0) fail(ErrorKind::non_convergence, "tree DP reconstruction failed");
    for (std::size_t j = kids[q.v].size(); j-- > 0;) {
      int c = kids[q.v][j];
      const auto& prev = steps[j];
      bool found = false;
      for (int lc = 0; lc < 2 && !found; ++lc) {
        const Table& child = dp[c][lc][q.lv];
        int cd = lc != q.lv;
        for (int pd = 0; pd < 2 && !found; ++pd) {
          if ((pd | cd) != diff) continue;
          for (int ca = 0; ca <= std::min(a, size[c]) && !found; ++ca)
            for (int cb = 0; cb <= std::min(b, size[c]) && !found; ++cb)
              if (child[cell(ca, cb)] && prev[pd][cell(a - ca, b - cb)]) {
                found = true;
                todo.push_back({c, lc, q.lv, ca, cb});
                a -= ca;
                b -= cb;
                diff = pd;
              }
        }
      }
      if (!found) fail(ErrorKind::non_convergence, "tree DP reconstruction failed");
    }
  }

  SolveReport<Scalar> r;
  r.value = Scalar(best_b) / Scalar(best_den);
  VertexSet s;
  for (int v = 0; v < n; ++v)
    if (label[v] == 1) s.push_back(v);
  r.witness = s;
  detail::set_expansion_diagnostics(r);
  return r;
}

/// Exact vertex expansion of a weighted star. By symmetry S can avoid the center; then the boundary
/// is S plus the center, so only the leaf mass s = pi(S) matters and every reachable s is tried.
inline SolveReport<Rational> vexp_star_weighted(const StarGraph<Rational>& st) {
  auto im = integer_masses(st.graph().pi());
  const Int128 W = im.total, w0 = im.weight[0];
  SubsetSums ss(std::vector<std::int64_t>(im.weight.begin() + 1, im.weight.end()));
  bool have = false;
  Int128 best_num = 0, best_den = 1;
  std::int64_t best_s = 0;
  for (std::int64_t s = 1; s <= ss.total(); ++s) {
    if (!ss.reachable(s)) continue;
    Int128 num = s + w0, den = std::min<Int128>(s, W - s);
    if (den <= 0) continue;
    if (!have || num * best_den < best_num * den) {
      have = true;
      best_num = num;
      best_den = den;
      best_s = s;
    }
  }
  if (!have) fail(ErrorKind::degenerate, "no cut with positive mass on both sides");
  SolveReport<Rational> r;
  r.value = make_rational(best_num, best_den);
  auto chosen = ss.subset_for(best_s);
  VertexSet s;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    if (chosen[i]) s.push_back(static_cast<int>(i + 1));
  r.witness = s;
  detail::set_expansion_diagnostics(r);
  return r;
}

}  // namespace spreadkit
