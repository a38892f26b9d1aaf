#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/objectives.hpp"

namespace spreadkit {

/// Factor vectors x_v of a feasible Gram matrix X = x x^T for the lifted problem
/// max Var(x) subject to |x_u - x_v|^2 <= 1 on edges.
struct GramLift {
  Embedding<double> x;
  double objective = 0;  // Var(x)
  double dual_bound = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;

  Eigen::MatrixXd gram() const {
    Eigen::MatrixXd f(x.size(), x.dim());
    for (std::size_t v = 0; v < x.size(); ++v)
      for (std::size_t c = 0; c < x.dim(); ++c) f(v, c) = x(v, c);
    return f * f.transpose();
  }

  SolveReport<double> report() const {
    SolveReport<double> r;
    r.value = objective;
    r.witness = x;
    r.diagnostics["dual_bound"] = std::to_string(dual_bound);
    r.diagnostics["iterations"] = std::to_string(iterations);
    r.diagnostics["converged"] = converged ? "true" : "false";
    return r;
  }
};

struct LiftCheck {
  double min_eigenvalue = 0;
  double max_edge_excess = 0;  // max(|x_u - x_v|^2 - 1) over edges, may be negative
  bool ok(double tol = 1e-8) const { return min_eigenvalue >= -tol && max_edge_excess <= tol; }
};

inline LiftCheck check_lift(const GramLift& lift, const WeightedGraph<double>& g) {
  require(lift.x.size() == g.size(), "lift and graph sizes differ");
  LiftCheck c;
  Eigen::MatrixXd X = lift.gram();
  c.min_eigenvalue = X.size() ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(X).eigenvalues()(0) : 0;
  c.max_edge_excess = -1;
  for (auto e : g.edges())
    c.max_edge_excess = std::max(c.max_edge_excess, X(e.u, e.u) + X(e.v, e.v) - 2 * X(e.u, e.v) - 1);
  return c;
}

namespace detail {

// Limited-memory BFGS with Armijo backtracking. f(x, grad) returns the value and fills grad.
template <class F>
int lbfgs_minimize(F&& f, Eigen::VectorXd& x, int max_iters, double gtol) {
  const std::size_t memory = 8;
  std::deque<Eigen::VectorXd> S, Y;
  Eigen::VectorXd g(x.size()), gn(x.size());
  double fx = f(x, g);
  int it = 0;
  for (; it < max_iters; ++it) {
    if (g.norm() <= gtol) break;
    Eigen::VectorXd q = g;
    std::vector<double> a(S.size());
    for (std::size_t i = S.size(); i-- > 0;) {
      a[i] = S[i].dot(q) / Y[i].dot(S[i]);
      q -= a[i] * Y[i];
    }
    if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().dot(Y.back());
    for (std::size_t i = 0; i < S.size(); ++i) {
      double b = Y[i].dot(q) / Y[i].dot(S[i]);
      q += (a[i] - b) * S[i];
    }
    Eigen::VectorXd d = -q;
    double slope = g.dot(d);
    if (!(slope < 0)) {
      S.clear();
      Y.clear();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = S.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    Eigen::VectorXd xn;
    double fn = 0;
    int tries = 0;
    for (; tries < 60; ++tries) {
      xn = x + step * d;
      fn = f(xn, gn);
      if (fn <= fx + 1e-4 * step * slope) break;
      step *= 0.5;
    }
    if (tries == 60) break;
    Eigen::VectorXd s = xn - x, y = gn - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s);
      Y.push_back(y);
      if (S.size() > memory) {
        S.pop_front();
        Y.pop_front();
      }
    }
    x = xn;
    g = gn;
    if (std::abs(fx - fn) <= 1e-15 * std::max(1.0, std::abs(fx))) {
      fx = fn;
      break;
    }
    fx = fn;
  }
  return it;
}

// Smallest t with t L_w >= L_pi on the complement of the all-ones vector; t sum(w) bounds the
// lifted optimum from above.
inline double dual_bound(const WeightedGraph<double>& g, const std::vector<double>& w) {
  const std::size_t n = g.size();
  if (n < 2) return 0;
  Eigen::MatrixXd Lw = Eigen::MatrixXd::Zero(n, n), Lp = Eigen::MatrixXd::Zero(n, n);
  double total = 0;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    auto e = g.edges()[i];
    Lw(e.u, e.u) += w[i];
    Lw(e.v, e.v) += w[i];
    Lw(e.u, e.v) -= w[i];
    Lw(e.v, e.u) -= w[i];
    total += w[i];
  }
  Eigen::VectorXd p(n);
  for (std::size_t v = 0; v < n; ++v) p(v) = g.pi(v);
  Lp = Eigen::MatrixXd(p.asDiagonal()) - p * p.transpose();
  // orthonormal basis of the complement of 1
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ()).rightCols(n - 1);
  Eigen::MatrixXd A = Q.transpose() * Lw * Q, B = Q.transpose() * Lp * Q;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(B, A);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  return std::max(0.0, es.eigenvalues().maxCoeff()) * total;
}

}  // namespace detail

struct LiftOptions {
  std::uint64_t seed = 0x5eed;
  int inner_iters = 3000;
};

/// Lifted maximum variance embedding. Augmented Lagrangian over a full-rank factor (n x n), each
/// subproblem by L-BFGS; the final iterate is centred and shrunk by the worst edge length so every
/// constraint holds. The edge multipliers give a dual upper bound reported next to the objective.
inline GramLift lift_solve(const WeightedGraph<double>& g, double tol = 1e-6, int max_iters = 200,
                           LiftOptions opts = {}) {
  if (!(tol > 0)) fail(ErrorKind::precondition, "tol must be positive");
  if (max_iters < 1) fail(ErrorKind::precondition, "max_iters must be positive");
  const std::size_t n = g.size(), r = n;
  const auto& E = g.edges();
  const std::size_t m = E.size();

  GramLift out;
  if (n == 1) {
    out.x = Embedding<double>(1, 1);
    out.converged = true;
    out.dual_bound = 0;
    return out;
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd(0.0, 0.5);
  Eigen::VectorXd z(n * r);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = nd(rng);

  std::vector<double> lam(m, 0.0);
  double rho = 10;

  auto edge_sq = [&](const Eigen::VectorXd& x, std::size_t i) {
    auto e = E[i];
    return (x.segment(e.u * r, r) - x.segment(e.v * r, r)).squaredNorm();
  };
  auto lagrangian = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(r);
    for (std::size_t v = 0; v < n; ++v) mu += g.pi(v) * x.segment(v * r, r);
    double val = 0;
    for (std::size_t v = 0; v < n; ++v) {
      Eigen::VectorXd d = x.segment(v * r, r) - mu;
      val -= g.pi(v) * d.squaredNorm();
      grad.segment(v * r, r) = -2 * g.pi(v) * d;
    }
    for (std::size_t i = 0; i < m; ++i) {
      double h = std::max(0.0, edge_sq(x, i) - 1 + lam[i] / rho);
      if (h == 0) continue;
      val += 0.5 * rho * h * h;
      auto e = E[i];
      Eigen::VectorXd diff = x.segment(e.u * r, r) - x.segment(e.v * r, r);
      grad.segment(e.u * r, r) += 2 * rho * h * diff;
      grad.segment(e.v * r, r) -= 2 * rho * h * diff;
    }
    return val;
  };
  auto var_of = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(r);
    for (std::size_t v = 0; v < n; ++v) mu += g.pi(v) * x.segment(v * r, r);
    double val = 0;
    for (std::size_t v = 0; v < n; ++v) val += g.pi(v) * (x.segment(v * r, r) - mu).squaredNorm();
    return val;
  };

  double prev_obj = -1, prev_viol = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    out.iterations = it + 1;
    detail::lbfgs_minimize(lagrangian, z, opts.inner_iters, 1e-11);
    double viol = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double c = edge_sq(z, i) - 1;
      viol = std::max(viol, c);
      lam[i] = std::max(0.0, lam[i] + rho * c);
    }
    double obj = var_of(z) / (1 + viol);
    if (viol > 0.25 * prev_viol) rho = std::min(rho * 4, 1e9);
    prev_viol = viol;
    if (viol < 1e-10 && std::abs(obj - prev_obj) <= tol * std::max(1.0, obj)) {
      out.converged = true;
      break;
    }
    prev_obj = obj;
  }

  double worst = 0;
  for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, edge_sq(z, i));
  const double shrink = worst > 1 ? 1 / std::sqrt(worst) : 1.0;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(r);
  for (std::size_t v = 0; v < n; ++v) mu += g.pi(v) * z.segment(v * r, r);
  out.x = Embedding<double>(n, r);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t c = 0; c < r; ++c) out.x(v, c) = (z(v * r + c) - mu(c)) * shrink;
  out.objective = variance(out.x, g);
  out.dual_bound = std::max(out.objective, detail::dual_bound(g, lam));
  return out;
}

}  // namespace spreadkit
