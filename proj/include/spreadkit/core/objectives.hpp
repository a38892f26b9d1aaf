#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"

namespace spreadkit {

namespace detail {
template <class Scalar>
void check_dims(const Embedding<Scalar>& y, const WeightedGraph<Scalar>& g) {
  if (y.size() != g.size()) fail(ErrorKind::precondition, "embedding and graph sizes differ");
}
}  // namespace detail

/// Var_pi(y) as the pairwise sum  sum_{v<w} pi_v pi_w |y_v - y_w|^2.
template <class Scalar>
Scalar variance(const Embedding<Scalar>& y, const WeightedGraph<Scalar>& g) {
  detail::check_dims(y, g);
  Scalar total = 0;
  for (std::size_t v = 0; v < y.size(); ++v)
    for (std::size_t w = v + 1; w < y.size(); ++w) total += g.pi(v) * g.pi(w) * y.squared_distance(v, w);
  return total;
}

/// pi-weighted barycenter of an embedding.
template <class Scalar>
std::vector<Scalar> barycenter(const Embedding<Scalar>& y, const WeightedGraph<Scalar>& g) {
  detail::check_dims(y, g);
  std::vector<Scalar> mu(y.dim(), Scalar(0));
  for (std::size_t v = 0; v < y.size(); ++v)
    for (std::size_t c = 0; c < y.dim(); ++c) mu[c] += g.pi(v) * y(v, c);
  return mu;
}

/// Var_pi(y) as E|y - mu|^2 with mu the barycenter.
template <class Scalar>
Scalar variance_about_barycenter(const Embedding<Scalar>& y, const WeightedGraph<Scalar>& g) {
  auto mu = barycenter(y, g);
  Scalar total = 0;
  for (std::size_t v = 0; v < y.size(); ++v)
    for (std::size_t c = 0; c < y.dim(); ++c) {
      Scalar d = y(v, c) - mu[c];
      total += g.pi(v) * d * d;
    }
  return total;
}

struct LipschitzReport {
  bool ok = true;
  Edge worst{};
  double worst_stretch = 0;  // largest edge length |y_u - y_v|
};

template <class Scalar>
LipschitzReport lipschitz_check(const Embedding<Scalar>& y, const WeightedGraph<Scalar>& g, double tol) {
  detail::check_dims(y, g);
  require(tol >= 0, "lipschitz tolerance must be non-negative");
  LipschitzReport r;
  bool first = true;
  for (const auto& e : g.edges()) {
    double len = std::sqrt(to_double(y.squared_distance(e.u, e.v)));
    if (first || len > r.worst_stretch) {
      r.worst_stretch = len;
      r.worst = e;
      first = false;
    }
  }
  r.ok = r.worst_stretch <= 1.0 + tol;
  return r;
}

/// Numerator of the lambda_inf quotient: E_{v~pi} max_{u in N(v)} |x_u - x_v|^2.
template <class Scalar>
Scalar max_neighbor_energy(const Embedding<Scalar>& x, const WeightedGraph<Scalar>& g) {
  detail::check_dims(x, g);
  Scalar total = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    Scalar best = 0;
    for (int u : g.neighbors(static_cast<int>(v))) best = std::max(best, x.squared_distance(u, v));
    total += g.pi(v) * best;
  }
  return total;
}

/// E_{v~pi} max_{u in N(v)} |x_u - x_v|^2 / Var_pi(x).
template <class Scalar>
Scalar lambda_objective(const Embedding<Scalar>& x, const WeightedGraph<Scalar>& g) {
  Scalar var = variance(x, g);
  if constexpr (is_exact_v<Scalar>) {
    if (var == 0) fail(ErrorKind::degenerate, "degenerate valuation");
  } else {
    if (!(var > 0)) fail(ErrorKind::degenerate, "degenerate valuation");
  }
  return max_neighbor_energy(x, g) / var;
}

/// Right-hand side of the block decomposition of a variance difference:
///   sum_{i<j} pi(A_i) pi(A_j) (|mu_y(A_i) - mu_y(A_j)|^2 - |mu_y2(A_i) - mu_y2(A_j)|^2)
/// where block[v] names the part containing v. y and y2 must be isometric inside each block.
template <class Scalar>
Scalar variance_delta(const Embedding<Scalar>& y, const Embedding<Scalar>& y2, const std::vector<int>& block,
                      const WeightedGraph<Scalar>& g, double isometry_tol = 1e-9) {
  detail::check_dims(y, g);
  detail::check_dims(y2, g);
  require(y.dim() == y2.dim(), "embeddings must share a dimension");
  require(block.size() == g.size(), "block labels must cover every vertex");
  int parts = 0;
  for (int b : block) {
    require(b >= 0, "block labels must be non-negative");
    parts = std::max(parts, b + 1);
  }
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::size_t v = u + 1; v < g.size(); ++v) {
      if (block[u] != block[v]) continue;
      double a = std::sqrt(to_double(y.squared_distance(u, v)));
      double b = std::sqrt(to_double(y2.squared_distance(u, v)));
      if (std::abs(a - b) > isometry_tol)
        fail(ErrorKind::precondition, "valuations are not isometric inside block " + std::to_string(block[u]));
    }
  const std::size_t k = y.dim();
  std::vector<Scalar> mass(parts, Scalar(0));
  std::vector<std::vector<Scalar>> m1(parts, std::vector<Scalar>(k, Scalar(0)));
  std::vector<std::vector<Scalar>> m2(parts, std::vector<Scalar>(k, Scalar(0)));
  for (std::size_t v = 0; v < g.size(); ++v) {
    mass[block[v]] += g.pi(v);
    for (std::size_t c = 0; c < k; ++c) {
      m1[block[v]][c] += g.pi(v) * y(v, c);
      m2[block[v]][c] += g.pi(v) * y2(v, c);
    }
  }
  Scalar total = 0;
  for (int i = 0; i < parts; ++i)
    for (int j = i + 1; j < parts; ++j) {
      if (mass[i] == 0 || mass[j] == 0) continue;
      Scalar d1 = 0, d2 = 0;
      for (std::size_t c = 0; c < k; ++c) {
        Scalar a = m1[i][c] / mass[i] - m1[j][c] / mass[j];
        Scalar b = m2[i][c] / mass[i] - m2[j][c] / mass[j];
        d1 += a * a;
        d2 += b * b;
      }
      total += mass[i] * mass[j] * (d1 - d2);
    }
  return total;
}

namespace detail {
template <class Scalar>
std::vector<bool> membership(const VertexSet& s, const WeightedGraph<Scalar>& g) {
  std::vector<bool> in(g.size(), false);
  for (int v : s) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.size()) fail(ErrorKind::precondition, "vertex out of range");
    in[v] = true;
  }
  std::size_t count = std::count(in.begin(), in.end(), true);
  if (count == 0 || count == g.size()) fail(ErrorKind::precondition, "S must be a nonempty proper subset of V");
  return in;
}
}  // namespace detail

/// N(S) u N(V\S): every vertex with a neighbour on the other side.
template <class Scalar>
VertexSet vertex_boundary(const VertexSet& s, const WeightedGraph<Scalar>& g) {
  auto in = detail::membership(s, g);
  VertexSet out;
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (int u : g.neighbors(static_cast<int>(v)))
      if (in[u] != in[v]) {
        out.push_back(static_cast<int>(v));
        break;
      }
  }
  return out;
}

/// pi(N(S) u N(V\S)) / min(pi(S), pi(V\S)).
template <class Scalar>
Scalar expansion_of_set(const VertexSet& s, const WeightedGraph<Scalar>& g) {
  auto in = detail::membership(s, g);
  Scalar inside = 0, outside = 0;
  for (std::size_t v = 0; v < g.size(); ++v) (in[v] ? inside : outside) += g.pi(v);
  Scalar denom = std::min(inside, outside);
  if (denom == 0) fail(ErrorKind::degenerate, "one side of the cut carries no mass");
  return g.mass(vertex_boundary(s, g)) / denom;
}

}  // namespace spreadkit
