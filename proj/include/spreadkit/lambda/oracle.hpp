#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/objectives.hpp"

namespace spreadkit {

struct LambdaInterval {
  double lo = 0;
  double hi = 0;
  Embedding<double> witness;  // attains hi
  std::size_t flats = 0;
  std::size_t solves = 0;

  SolveReport<double> report() const {
    auto r = make_interval_report(lo, hi);
    r.witness = witness;
    r.diagnostics["flats"] = std::to_string(flats);
    r.diagnostics["eigensolves"] = std::to_string(solves);
    return r;
  }
};

struct OracleOptions {
  std::size_t max_n = 10;
  double max_assignments = 1e6;  // product of degrees
  std::size_t max_flats = 400000;
  std::size_t max_solves = 20000000;
};

namespace detail {

using IntRow = std::vector<std::int64_t>;

inline void normalize_row(IntRow& r) {
  std::int64_t g = 0;
  for (auto x : r) g = std::gcd(g, x < 0 ? -x : x);
  if (g > 1)
    for (auto& x : r) x /= g;
  for (auto x : r)
    if (x != 0) {
      if (x < 0)
        for (auto& y : r) y = -y;
      break;
    }
}

// r <- alpha * r - beta * s, computed in 128 bits and checked back into 64.
inline void combine(IntRow& r, std::int64_t alpha, const IntRow& s, std::int64_t beta) {
  for (std::size_t k = 0; k < r.size(); ++k) {
    __int128 v = static_cast<__int128>(alpha) * r[k] - static_cast<__int128>(beta) * s[k];
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
      fail(ErrorKind::budget_exceeded, "flat elimination overflowed 64-bit integers");
    r[k] = static_cast<std::int64_t>(v);
  }
}

/// Constraint space of a flat in canonical reduced echelon form: rows are primitive integer vectors
/// with a positive pivot and zeros in every other row's pivot column.
class Flat {
 public:
  explicit Flat(std::size_t n) : n_(n) {}

  std::size_t rank() const { return rows_.size(); }
  const std::vector<IntRow>& rows() const { return rows_; }

  IntRow reduce(IntRow h) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      std::int64_t hp = h[piv_[k]];
      if (hp == 0) continue;
      combine(h, rows_[k][piv_[k]], rows_[k], hp);
      normalize_row(h);
    }
    return h;
  }

  bool contains(const IntRow& h) const {
    auto r = reduce(h);
    return std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x == 0; });
  }

  /// h must already be reduced and nonzero.
  Flat with(IntRow h) const {
    Flat out = *this;
    normalize_row(h);
    std::size_t p = 0;
    while (h[p] == 0) ++p;
    for (auto& r : out.rows_) {
      if (r[p] == 0) continue;
      combine(r, h[p], h, r[p]);
      normalize_row(r);
    }
    out.rows_.push_back(std::move(h));
    out.piv_.push_back(p);
    // keep rows ordered by pivot so equal flats produce equal keys
    std::vector<std::size_t> idx(out.rows_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return out.piv_[a] < out.piv_[b]; });
    std::vector<IntRow> rows;
    std::vector<std::size_t> piv;
    for (auto i : idx) {
      rows.push_back(std::move(out.rows_[i]));
      piv.push_back(out.piv_[i]);
    }
    out.rows_ = std::move(rows);
    out.piv_ = std::move(piv);
    return out;
  }

  IntRow key() const {
    IntRow k;
    k.reserve(rows_.size() * n_);
    for (const auto& r : rows_) k.insert(k.end(), r.begin(), r.end());
    return k;
  }

 private:
  std::size_t n_;
  std::vector<IntRow> rows_;
  std::vector<std::size_t> piv_;
};

struct RowHash {
  std::size_t operator()(const IntRow& r) const noexcept {
    std::size_t h = r.size();
    for (auto x : r) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace detail

/// Exhaustive lambda_inf for small graphs with strictly positive pi.
///
/// Every flat of the arrangement {x_a = x_b}, {x_a + x_b = 2 x_v} (a, b neighbours of v) is visited.
/// On a flat, neighbours of v fall into classes with identical |x_u - x_v|; for every choice f of one
/// class per vertex the quotient sum_v pi_v (x_f(v) - x_v)^2 / Var(x) restricted to the flat is a
/// generalized symmetric eigenproblem. A bottom eigenvector whose true numerator matches the chosen
/// quadratic certifies its eigenvalue; lo is the least such eigenvalue and hi the least true quotient
/// among all eigenvectors examined.
template <class Scalar>
LambdaInterval oracle_small(const WeightedGraph<Scalar>& g_in, OracleOptions opts = {}) {
  const std::size_t n = g_in.size();
  if (n > opts.max_n) fail(ErrorKind::budget_exceeded, "graph exceeds the oracle size limit");
  if (n < 2) fail(ErrorKind::degenerate, "a single vertex has no non-degenerate valuation");
  for (std::size_t v = 0; v < n; ++v)
    if (!(g_in.pi(v) > 0)) fail(ErrorKind::precondition, "oracle requires pi_v > 0 for every vertex");
  double product = 1;
  for (std::size_t v = 0; v < n; ++v) product *= static_cast<double>(g_in.degree(static_cast<int>(v)));
  if (product > opts.max_assignments) fail(ErrorKind::budget_exceeded, "furthest-neighbour assignments exceed budget");

  const auto g = g_in.template converted<double>();
  Eigen::VectorXd pi(n);
  for (std::size_t v = 0; v < n; ++v) pi[v] = g.pi(v);
  const Eigen::MatrixXd C = Eigen::MatrixXd(pi.asDiagonal()) - pi * pi.transpose();

  // hyperplanes, deduplicated; for every (v, a, b) remember the two indices
  std::vector<detail::IntRow> planes;
  struct PairPlanes {
    int v, a, b;
    std::size_t eq, sym;
  };
  std::vector<PairPlanes> pairs;
  auto add_plane = [&](detail::IntRow h) {
    detail::normalize_row(h);
    auto it = std::find(planes.begin(), planes.end(), h);
    if (it != planes.end()) return static_cast<std::size_t>(it - planes.begin());
    planes.push_back(std::move(h));
    return planes.size() - 1;
  };
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nb = g.neighbors(static_cast<int>(v));
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        detail::IntRow eq(n, 0), sym(n, 0);
        eq[nb[i]] = 1;
        eq[nb[j]] = -1;
        sym[nb[i]] = 1;
        sym[nb[j]] = 1;
        sym[v] = -2;
        pairs.push_back({static_cast<int>(v), nb[i], nb[j], add_plane(eq), add_plane(sym)});
      }
  }

  LambdaInterval out;
  out.lo = std::numeric_limits<double>::infinity();
  out.hi = std::numeric_limits<double>::infinity();

  auto process = [&](const detail::Flat& flat) {
    const std::size_t r = flat.rank();
    Eigen::MatrixXd M(r + 1, n);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c = 0; c < n; ++c) M(i, c) = static_cast<double>(flat.rows()[i][c]);
    M.row(r) = pi.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    Eigen::MatrixXd K = lu.kernel();
    const Eigen::Index k = K.cols();
    if (k == 0 || static_cast<std::size_t>(lu.rank()) != r + 1) return;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
    const Eigen::MatrixXd B = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    const Eigen::MatrixXd Cr = B.transpose() * C * B;

    // neighbour classes at each vertex on this flat
    std::vector<std::vector<int>> classes(n);
    {
      std::vector<std::vector<int>> rep(n);
      for (std::size_t v = 0; v < n; ++v) {
        const auto& nb = g.neighbors(static_cast<int>(v));
        rep[v].assign(nb.size(), -1);
      }
      for (const auto& pp : pairs) {
        if (!(flat.contains(planes[pp.eq]) || flat.contains(planes[pp.sym]))) continue;
        const auto& nb = g.neighbors(pp.v);
        auto ia = std::lower_bound(nb.begin(), nb.end(), pp.a) - nb.begin();
        auto ib = std::lower_bound(nb.begin(), nb.end(), pp.b) - nb.begin();
        // a < b in neighbour order: b joins a's class
        if (rep[pp.v][ib] < 0) rep[pp.v][ib] = static_cast<int>(ia);
      }
      for (std::size_t v = 0; v < n; ++v) {
        const auto& nb = g.neighbors(static_cast<int>(v));
        for (std::size_t i = 0; i < nb.size(); ++i)
          if (rep[v][i] < 0) classes[v].push_back(nb[i]);
      }
    }

    std::vector<std::size_t> choice(n, 0);
    while (true) {
      if (++out.solves > opts.max_solves) fail(ErrorKind::budget_exceeded, "oracle eigensolve budget exceeded");
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t v = 0; v < n; ++v) {
        int u = classes[v][choice[v]];
        L(v, v) += pi[v];
        L(u, u) += pi[v];
        L(u, v) -= pi[v];
        L(v, u) -= pi[v];
      }
      const Eigen::MatrixXd Lr = B.transpose() * L * B;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Lr, Cr);
      if (es.info() == Eigen::Success) {
        const double mu0 = es.eigenvalues()[0];
        for (Eigen::Index j = 0; j < k; ++j) {
          const double mu = es.eigenvalues()[j];
          if (mu > mu0 + 1e-9 * std::max(1.0, std::abs(mu0))) break;
          Eigen::VectorXd z = B * es.eigenvectors().col(j);
          const double var = z.dot(C * z);
          if (!(var > 0)) continue;
          Embedding<double> x(n, 1, std::vector<double>(z.data(), z.data() + n));
          const double num = max_neighbor_energy(x, g);
          const double q = z.dot(L * z);
          const double obj = num / var;
          if (obj < out.hi) {
            out.hi = obj;
            out.witness = std::move(x);
          }
          if (num - q <= 1e-9 * num) out.lo = std::min(out.lo, mu);
        }
      }
      std::size_t v = 0;
      while (v < n && ++choice[v] == classes[v].size()) choice[v++] = 0;
      if (v == n) break;
    }
  };

  std::unordered_set<detail::IntRow, detail::RowHash> seen;
  std::vector<detail::Flat> frontier{detail::Flat(n)};
  seen.insert(frontier[0].key());
  while (!frontier.empty()) {
    std::vector<detail::Flat> next;
    for (const auto& flat : frontier) {
      ++out.flats;
      process(flat);
      if (flat.rank() + 2 >= n) continue;  // children would only contain constants
      for (const auto& h : planes) {
        auto red = flat.reduce(h);
        if (std::all_of(red.begin(), red.end(), [](std::int64_t x) { return x == 0; })) continue;
        auto child = flat.with(std::move(red));
        if (seen.insert(child.key()).second) {
          if (seen.size() > opts.max_flats) fail(ErrorKind::budget_exceeded, "oracle flat budget exceeded");
          next.push_back(std::move(child));
        }
      }
    }
    frontier = std::move(next);
  }

  if (!std::isfinite(out.lo) || !std::isfinite(out.hi))
    fail(ErrorKind::non_convergence, "oracle found no certified region");
  out.lo = std::min(out.lo, out.hi);
  return out;
}

}  // namespace spreadkit
