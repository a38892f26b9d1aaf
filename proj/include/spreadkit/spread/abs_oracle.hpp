#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/rational.hpp"

namespace spreadkit {

struct AbsOracleOptions {
  std::size_t max_n = 14;
  /// Restrict the zero set U to single vertices.
  bool singletons_only = false;
};

template <class Scalar>
struct AbsOracleResult {
  Scalar value{};
  Embedding<Scalar> witness;
  VertexSet zero_set;

  SolveReport<Scalar> report() const {
    SolveReport<Scalar> r;
    r.value = value;
    r.witness = witness;
    std::string u;
    for (int v : zero_set) u += (u.empty() ? "" : ",") + std::to_string(v);
    r.diagnostics["zero_set"] = u;
    return r;
  }
};

/// Exact spread constant: every nonempty zero set U, every sign per component of V \ U, and the
/// valuation y_v = s(C) d(U, v). Rational input is evaluated in scaled 128-bit integers.
template <class Scalar>
AbsOracleResult<Scalar> abs_oracle(const WeightedGraph<Scalar>& g, AbsOracleOptions opts = {}) {
  const std::size_t n = g.size();
  if (n > opts.max_n || n > 30) fail(ErrorKind::budget_exceeded, "graph exceeds the ABS oracle size limit");

  // Score comparable across candidates: W^2 Var in exact mode, Var otherwise.
  using Score = std::conditional_t<is_exact_v<Scalar>, Int128, double>;
  std::vector<Score> w(n);
  Score W = 1;
  if constexpr (is_exact_v<Scalar>) {
    auto im = integer_masses(g.pi());
    for (std::size_t v = 0; v < n; ++v) w[v] = im.weight[v];
    W = im.total;
  } else {
    for (std::size_t v = 0; v < n; ++v) w[v] = g.pi(v);
  }

  AbsOracleResult<Scalar> best;
  Score best_score = -1;
  std::vector<int> best_dist, best_comp;
  std::vector<int> best_sign;

  std::vector<int> comp(n);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (opts.singletons_only && (mask & (mask - 1))) continue;
    VertexSet U;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1) U.push_back(static_cast<int>(v));
    auto dist = g.distances_from(U);

    // components of V \ U
    std::fill(comp.begin(), comp.end(), -1);
    int ncomp = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if ((mask >> s & 1) || comp[s] >= 0) continue;
      std::vector<int> stack{static_cast<int>(s)};
      comp[s] = ncomp;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : g.neighbors(v))
          if (!(mask >> u & 1) && comp[u] < 0) {
            comp[u] = ncomp;
            stack.push_back(u);
          }
      }
      ++ncomp;
    }
    Score second = 0;
    std::vector<Score> m(ncomp, Score(0));
    for (std::size_t v = 0; v < n; ++v) {
      Score d = dist[v];
      second += w[v] * d * d;
      if (comp[v] >= 0) m[comp[v]] += w[v] * d;
    }
    // Gray code over signs of components 1..ncomp-1; component 0 stays positive
    std::vector<int> sign(ncomp, 1);
    Score first = 0;
    for (auto x : m) first += x;
    const std::uint64_t patterns = ncomp == 0 ? 1 : std::uint64_t(1) << (ncomp - 1);
    for (std::uint64_t t = 0; t < patterns; ++t) {
      if (t > 0) {
        int bit = __builtin_ctzll(t) + 1;
        sign[bit] = -sign[bit];
        first += 2 * sign[bit] * m[bit];
      }
      Score score = W * second - first * first;
      if (score > best_score) {
        best_score = score;
        best.zero_set = U;
        best_dist = dist;
        best_comp = comp;
        best_sign = sign;
      }
    }
  }

  best.witness = Embedding<Scalar>(n, 1);
  for (std::size_t v = 0; v < n; ++v)
    best.witness[v] = best_comp[v] < 0 ? Scalar(0) : Scalar(best_dist[v] * best_sign[best_comp[v]]);
  if constexpr (is_exact_v<Scalar>) {
    best.value = make_rational(best_score, W * W);
  } else {
    best.value = best_score;
  }
  return best;
}

}  // namespace spreadkit
