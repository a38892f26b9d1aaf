#pragma once

#include <vector>

#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"

namespace spreadkit {

/// The component of T - v that contains the neighbour `via`, seen from v.
template <class Scalar>
struct Branch {
  int via = -1;
  Scalar mass{};    // pi of the branch
  Scalar moment{};  // sum pi_u d(v, u)
  Scalar second{};  // sum pi_u d(v, u)^2
};

template <class Scalar>
struct BranchMoments {
  std::vector<std::vector<Branch<Scalar>>> at;  // at[v] follows g.neighbors(v)
  std::vector<Scalar> moment_total;             // sum over branches at v
  std::vector<Scalar> second_total;             // sum pi_u d(v, u)^2 over all u
  Scalar total_mass{};

  const Branch<Scalar>& branch(int v, int via) const {
    for (const auto& b : at[v])
      if (b.via == via) return b;
    fail(ErrorKind::precondition, "no such branch");
  }
};

/// Mass and first/second moments of every branch at every vertex: one post-order pass for child
/// branches, one pre-order pass for the parent-side branch.
template <class Scalar>
BranchMoments<Scalar> branch_moments(const TreeGraph<Scalar>& t) {
  const auto& g = t.graph();
  const std::size_t n = g.size();
  const auto& order = t.preorder();

  // subtree sums about the subtree root
  std::vector<Scalar> sm(n, Scalar(0)), s1(n, Scalar(0)), s2(n, Scalar(0));
  for (std::size_t i = n; i-- > 0;) {
    int v = order[i];
    sm[v] += g.pi(v);
    int p = t.parent(v);
    if (p >= 0) {
      sm[p] += sm[v];
      s1[p] += s1[v] + sm[v];
      s2[p] += s2[v] + 2 * s1[v] + sm[v];
    }
  }

  BranchMoments<Scalar> bm;
  bm.total_mass = sm[t.root()];
  bm.at.assign(n, {});
  bm.moment_total.assign(n, Scalar(0));
  bm.second_total.assign(n, Scalar(0));
  // up*[v]: the parent-side branch at v, about v
  std::vector<Scalar> um(n, Scalar(0)), u1(n, Scalar(0)), u2(n, Scalar(0));
  for (int v : order) {
    int p = t.parent(v);
    bm.moment_total[v] = s1[v] + u1[v];
    bm.second_total[v] = s2[v] + u2[v];
    for (int w : g.neighbors(v)) {
      Branch<Scalar> b;
      b.via = w;
      if (w == p) {
        b.mass = um[v];
        b.moment = u1[v];
        b.second = u2[v];
      } else {
        b.mass = sm[w];
        b.moment = s1[w] + sm[w];
        b.second = s2[w] + 2 * s1[w] + sm[w];
        // everything outside subtree(w), re-centred one step further away
        Scalar om = bm.total_mass - sm[w];
        Scalar o1 = bm.moment_total[v] - b.moment;
        Scalar o2 = bm.second_total[v] - b.second;
        um[w] = om;
        u1[w] = o1 + om;
        u2[w] = o2 + 2 * o1 + om;
      }
      bm.at[v].push_back(b);
    }
  }
  return bm;
}

}  // namespace spreadkit
