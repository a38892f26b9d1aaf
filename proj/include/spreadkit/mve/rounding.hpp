#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/objectives.hpp"

namespace spreadkit {

/// k + 2 sqrt(3 k ln n) + 6 ln n
inline double rounding_tau(int k, std::size_t n) {
  const double ln = std::log(static_cast<double>(n));
  return k + 2 * std::sqrt(3.0 * k * ln) + 6 * ln;
}

struct RoundingReport {
  int k = 0;
  double tau = 0;
  double variance_ratio = 0;  // Var(y) / Var(x)
  int lipschitz_violations = 0;
  bool lipschitz_ok = false;
  bool variance_retained = false;  // Var(y) >= k / (2 tau) Var(x)
};

struct RoundingOptions {
  std::optional<double> tau;  // replaces the scale above when set
};

struct Rounded {
  Embedding<double> y;
  RoundingReport report;
};

namespace detail {

inline Eigen::MatrixXd to_matrix(const Embedding<double>& x) {
  Eigen::MatrixXd m(x.size(), x.dim());
  for (std::size_t v = 0; v < x.size(); ++v)
    for (std::size_t c = 0; c < x.dim(); ++c) m(v, c) = x(v, c);
  return m;
}

inline Embedding<double> from_matrix(const Eigen::MatrixXd& m) {
  Embedding<double> y(m.rows(), m.cols());
  for (Eigen::Index v = 0; v < m.rows(); ++v)
    for (Eigen::Index c = 0; c < m.cols(); ++c) y(v, c) = m(v, c);
  return y;
}

inline int count_long_edges(const Embedding<double>& y, const WeightedGraph<double>& g, double tol = 1e-12) {
  int bad = 0;
  for (auto e : g.edges())
    if (y.squared_distance(e.u, e.v) > 1 + tol) ++bad;
  return bad;
}

}  // namespace detail

/// Projects the lift through a k x n standard Gaussian matrix and divides by sqrt(tau).
/// The output is kept as is; the report says whether it is Lipschitz and how much variance survived.
inline Rounded gaussian_round(const Embedding<double>& x, const WeightedGraph<double>& g, int k, std::uint64_t seed,
                              RoundingOptions opts = {}) {
  if (k < 1) fail(ErrorKind::precondition, "k must be at least 1");
  require(x.size() == g.size(), "lift and graph sizes differ");
  const std::size_t n = x.size();
  Rounded out;
  auto& rep = out.report;
  rep.k = k;
  rep.tau = opts.tau ? *opts.tau : rounding_tau(k, n);
  if (!(rep.tau > 0)) fail(ErrorKind::precondition, "tau must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd G(x.dim(), k);
  for (int i = 0; i < k; ++i)
    for (std::size_t c = 0; c < x.dim(); ++c) G(c, i) = nd(rng);
  out.y = detail::from_matrix(detail::to_matrix(x) * G / std::sqrt(rep.tau));

  const double vx = variance(x, g), vy = variance(out.y, g);
  rep.variance_ratio = vx > 0 ? vy / vx : 0;
  rep.lipschitz_violations = detail::count_long_edges(out.y, g);
  rep.lipschitz_ok = rep.lipschitz_violations == 0;
  rep.variance_retained = vy >= k / (2 * rep.tau) * vx;
  return out;
}

/// Projection of the pi-centred lift onto its top-k principal directions, shrunk by the worst edge
/// length if any edge exceeds 1.
inline Embedding<double> pca_round(const Embedding<double>& x, const WeightedGraph<double>& g, int k) {
  if (k < 1) fail(ErrorKind::precondition, "k must be at least 1");
  require(x.size() == g.size(), "lift and graph sizes differ");
  const std::size_t n = x.size();
  Eigen::MatrixXd X = detail::to_matrix(x);
  Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(x.dim());
  for (std::size_t v = 0; v < n; ++v) mu += g.pi(v) * X.row(v);
  X.rowwise() -= mu;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(x.dim(), x.dim());
  for (std::size_t v = 0; v < n; ++v) C += g.pi(v) * X.row(v).transpose() * X.row(v);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  const Eigen::Index kk = std::min<Eigen::Index>(k, C.rows());
  Eigen::MatrixXd P = es.eigenvectors().rightCols(kk);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, k);
  Y.leftCols(kk) = X * P;
  auto y = detail::from_matrix(Y);
  double worst = 0;
  for (auto e : g.edges()) worst = std::max(worst, y.squared_distance(e.u, e.v));
  if (worst > 1) y = detail::from_matrix(Y / std::sqrt(worst));
  return y;
}

}  // namespace spreadkit
