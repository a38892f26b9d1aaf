#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/objectives.hpp"
#include "spreadkit/core/rational.hpp"
#include "spreadkit/core/subset_sum.hpp"

// Star valuations are normalised to x_0 = 0 with every leaf at +-1 except one special leaf i at y.
// With d the signed mass of the other leaves, the quotient becomes
//   F(d, y) = (a + p y^2) / (b + p y^2 - (d + p y)^2),  a = 1 - p, b = 1 - pi_0 - p, p = pi_i.
// Flipping every sign maps (d, y) to (-d, -y), so y in [0, 1] is enough.

namespace spreadkit {

template <class Scalar>
Scalar star_lower_bound(const StarGraph<Scalar>& s) {
  if (s.center_mass() == 1) fail(ErrorKind::degenerate, "pi_0 = 1 leaves no variance");
  return Scalar(1) / (Scalar(1) - s.center_mass());
}

/// True iff the leaves split into two sides of equal mass.
inline bool star_is_tight(const StarGraph<Rational>& s) {
  auto m = integer_masses(s.graph().pi());
  SubsetSums ss(std::vector<std::int64_t>(m.weight.begin() + 1, m.weight.end()));
  return ss.total() % 2 == 0 && ss.reachable(ss.total() / 2);
}

namespace detail {

struct YMin {
  double value = std::numeric_limits<double>::infinity();
  double y = 0;
};

inline double star_quotient(double a, double b, double d, double p, double y) {
  double den = b + p * y * y - (d + p * y) * (d + p * y);
  if (!(den > 0)) return std::numeric_limits<double>::infinity();
  return (a + p * y * y) / den;
}

/// Real roots in (0, 1) of the stationarity condition -d p y^2 + (b - d^2 - a(1-p)) y + a d = 0.
inline std::vector<double> star_critical_points(double a, double b, double d, double p) {
  std::vector<double> out;
  const double qa = -d * p, qb = b - d * d - a * (1 - p), qc = a * d;
  if (qa == 0) {
    if (qb != 0) out.push_back(-qc / qb);
  } else {
    double disc = qb * qb - 4 * qa * qc;
    if (disc >= 0) {
      double sq = std::sqrt(disc);
      // numerically stable pair
      double t = -0.5 * (qb + std::copysign(sq, qb));
      if (t != 0) out.push_back(qc / t);
      out.push_back(t / qa);
    }
  }
  std::vector<double> in;
  for (double y : out)
    if (y > 0 && y < 1) in.push_back(y);
  return in;
}

inline YMin star_min_over_y(double a, double b, double d, double p, bool fixed_one) {
  YMin best;
  auto consider = [&](double y) {
    double v = star_quotient(a, b, d, p, y);
    if (v < best.value || (v == best.value && y < best.y)) {
      best.value = v;
      best.y = y;
    }
  };
  consider(1);
  if (fixed_one) return best;
  consider(0);
  for (double y : star_critical_points(a, b, d, p)) consider(y);
  return best;
}

inline std::optional<BigInt> exact_isqrt(const BigInt& v) {
  if (v < 0) return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(v);
  if (r * r != v) return std::nullopt;
  return r;
}

inline std::optional<Rational> exact_sqrt(const Rational& v) {
  auto n = exact_isqrt(numerator(v));
  auto d = exact_isqrt(denominator(v));
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

}  // namespace detail

/// Exact decision: is lambda_inf(s) <= c (or < c when strict)?
inline bool star_lambda_at_most(const StarGraph<Rational>& s, const Rational& c, bool strict = false) {
  if (c <= 0) return false;
  auto m = integer_masses(s.graph().pi());
  const BigInt W = m.total, w0 = m.weight[0];
  const BigInt cn = numerator(c), cd = denominator(c);
  const std::size_t leaves = s.leaf_count();
  auto hit = [&](const BigInt& q) { return strict ? q < 0 : q <= 0; };
  for (std::size_t i = 1; i <= leaves; ++i) {
    std::vector<std::int64_t> others;
    for (std::size_t j = 1; j <= leaves; ++j)
      if (j != i) others.push_back(m.weight[j]);
    SubsetSums ss(others);
    const BigInt w = m.weight[i];
    const BigInt A = cd * W * w - cn * (W * w - w * w);
    const BigInt Wb = W * (W - w0 - w);
    const BigInt Ca = cd * W * (W - w);
    for (std::int64_t sum : ss.sums()) {
      const BigInt e = BigInt(2 * sum - ss.total());
      const BigInt B = 2 * cn * e * w;
      const BigInt C = Ca - cn * (Wb - e * e);
      if (hit(A + B + C)) return true;
      if (leaves == 1) continue;  // the only leaf must sit at distance 1
      if (hit(C)) return true;
      if (A > 0 && -B > 0 && -B < 2 * A && hit(4 * A * C - B * B)) return true;
    }
  }
  return false;
}

/// Closed-form lambda_inf of a star with rational masses: every special leaf, every reachable balance
/// of the remaining leaves, and every stationary point in y. The value is algebraic; `exact_value`
/// is set when the optimum is rational and certified by the exact decision procedure.
struct StarClosedForm {
  double value = 0;
  std::optional<Rational> exact_value;
  int special_leaf = 0;
  double y = 0;
  Embedding<double> witness;
};

namespace detail {

struct StarScan {
  double value = std::numeric_limits<double>::infinity();
  int special_leaf = 0;
  std::int64_t sum = 0, total = 0;
  double y = 0;
};

inline StarScan star_scan(const IntegerMasses& m, std::size_t leaves) {
  const double W = static_cast<double>(m.total);
  const double pi0 = static_cast<double>(m.weight[0]) / W;
  StarScan best;
  for (std::size_t i = 1; i <= leaves; ++i) {
    std::vector<std::int64_t> others;
    for (std::size_t j = 1; j <= leaves; ++j)
      if (j != i) others.push_back(m.weight[j]);
    SubsetSums ss(others);
    const double p = static_cast<double>(m.weight[i]) / W;
    const double a = 1 - p, b = 1 - pi0 - p;
    for (std::int64_t sum : ss.sums()) {
      double d = static_cast<double>(2 * sum - ss.total()) / W;
      auto r = star_min_over_y(a, b, d, p, leaves == 1);
      if (r.value < best.value) {
        best.value = r.value;
        best.special_leaf = static_cast<int>(i);
        best.sum = sum;
        best.total = ss.total();
        best.y = r.y;
      }
    }
  }
  if (!std::isfinite(best.value)) fail(ErrorKind::degenerate, "every valuation of this star has zero variance");
  return best;
}

}  // namespace detail

/// Floating-point value of the closed form, without the rational certification.
inline double star_closed_form_value(const StarGraph<Rational>& s) {
  return detail::star_scan(integer_masses(s.graph().pi()), s.leaf_count()).value;
}

inline StarClosedForm star_closed_form(const StarGraph<Rational>& s) {
  auto m = integer_masses(s.graph().pi());
  const std::size_t leaves = s.leaf_count();
  auto scan = detail::star_scan(m, leaves);
  const double best = scan.value;
  const int best_i = scan.special_leaf;
  const std::int64_t best_sum = scan.sum, best_total = scan.total;
  const double best_y = scan.y;

  StarClosedForm out;
  out.value = best;
  out.special_leaf = best_i;
  out.y = best_y;
  out.witness = Embedding<double>(s.size(), 1);
  {
    std::vector<std::int64_t> others;
    std::vector<int> idx;
    for (std::size_t j = 1; j <= leaves; ++j)
      if (static_cast<int>(j) != best_i) {
        others.push_back(m.weight[j]);
        idx.push_back(static_cast<int>(j));
      }
    auto chosen = SubsetSums(others).subset_for(best_sum);
    for (std::size_t k = 0; k < idx.size(); ++k) out.witness[idx[k]] = chosen[k] ? 1.0 : -1.0;
    out.witness[best_i] = best_y;
  }

  // try to recover the optimum as a rational number
  const Rational p(m.weight[best_i], m.total);
  const Rational a = 1 - p, b = 1 - Rational(m.weight[0], m.total) - p;
  const Rational d(2 * best_sum - best_total, m.total);
  std::vector<Rational> ys{Rational(0), Rational(1)};
  {
    const Rational qa = -d * p, qb = b - d * d - a * (1 - p), qc = a * d;
    if (qa == 0) {
      if (qb != 0) ys.push_back(-qc / qb);
    } else if (auto sq = detail::exact_sqrt(qb * qb - 4 * qa * qc)) {
      ys.push_back((-qb + *sq) / (2 * qa));
      ys.push_back((-qb - *sq) / (2 * qa));
    }
  }
  for (const auto& y : ys) {
    if (y < 0 || y > 1) continue;
    if (leaves == 1 && y != 1) continue;
    Rational den = b + p * y * y - (d + p * y) * (d + p * y);
    if (den <= 0) continue;
    Rational v = (a + p * y * y) / den;
    if (std::abs(to_double(v) - best) > 1e-9 * best) continue;
    if (star_lambda_at_most(s, v) && !star_lambda_at_most(s, v, true)) {
      out.exact_value = v;
      break;
    }
  }
  return out;
}

struct StarFptasOptions {
  /// Multiplies both grid steps. Values other than 1 void the approximation guarantee.
  double grid_scale = 1.0;
};

/// (1+eps)-approximation of lambda_inf on a star: outer loop over the special leaf, a balance DP on the
/// grid eps^2/(100 n), and a scan of y over the grid eps^2/100. Each reachable grid balance keeps the
/// first sign pattern that produced it; the reported value is the quotient of that concrete valuation.
template <class Scalar>
SolveReport<double> star_fptas(const StarGraph<Scalar>& s, double eps, StarFptasOptions opts = {}) {
  const std::size_t n = s.size();
  double min_pi = 1;
  for (std::size_t v = 0; v < n; ++v) min_pi = std::min(min_pi, to_double(s.graph().pi(v)));
  if (!(eps > 0) || !(eps < std::min(0.1, min_pi)))
    fail(ErrorKind::precondition, "eps must lie in (0, min(0.1, min_v pi_v))");
  require(opts.grid_scale > 0, "grid_scale must be positive");

  const double delta = eps * eps / (100.0 * static_cast<double>(n)) * opts.grid_scale;
  const double ystep = eps * eps / 100.0 * opts.grid_scale;
  const std::int64_t ny = static_cast<std::int64_t>(std::floor(1.0 / ystep));
  const std::size_t leaves = s.leaf_count();
  std::vector<double> pi(n);
  std::vector<std::int64_t> units(n);
  for (std::size_t v = 0; v < n; ++v) {
    pi[v] = to_double(s.graph().pi(v));
    units[v] = static_cast<std::int64_t>(std::floor(pi[v] / delta));
  }

  struct State {
    std::int64_t key;
    double balance;  // true signed mass of the stored pattern
    int prev;
    bool plus;
  };

  double best = std::numeric_limits<double>::infinity();
  double best_y = 0;
  int best_i = 0;
  std::vector<bool> best_signs;
  std::vector<int> best_order;

  for (std::size_t i = 1; i <= leaves; ++i) {
    std::vector<int> order;
    for (std::size_t j = 1; j <= leaves; ++j)
      if (j != i) order.push_back(static_cast<int>(j));
    std::vector<std::vector<State>> layers{{State{0, 0.0, -1, true}}};
    for (int j : order) {
      const auto& prev = layers.back();
      std::vector<State> next;
      next.reserve(prev.size() * 2);
      for (std::size_t k = 0; k < prev.size(); ++k) {
        next.push_back({prev[k].key + units[j], prev[k].balance + pi[j], static_cast<int>(k), true});
        next.push_back({prev[k].key - units[j], prev[k].balance - pi[j], static_cast<int>(k), false});
      }
      std::stable_sort(next.begin(), next.end(), [](const State& x, const State& y) { return x.key < y.key; });
      next.erase(std::unique(next.begin(), next.end(), [](const State& x, const State& y) { return x.key == y.key; }),
                 next.end());
      layers.push_back(std::move(next));
    }

    const double p = pi[i], a = 1 - p, b = 1 - pi[0] - p;
    const auto& last = layers.back();
    for (std::size_t k = 0; k < last.size(); ++k) {
      const double d = last[k].balance;
      // grid minimum of a function with at most two stationary points: check the grid
      // neighbours of each stationary point plus both ends
      std::vector<double> ys{1.0};
      if (leaves > 1) {
        ys.push_back(0.0);
        ys.push_back(static_cast<double>(ny) * ystep);
        for (double c : detail::star_critical_points(a, b, d, p)) {
          auto g = static_cast<std::int64_t>(std::floor(c / ystep));
          for (std::int64_t t : {g, g + 1})
            if (t >= 0 && t <= ny) ys.push_back(static_cast<double>(t) * ystep);
        }
      }
      for (double y : ys) {
        double v = detail::star_quotient(a, b, d, p, y);
        if (v < best || (v == best && y < best_y)) {
          best = v;
          best_y = y;
          best_i = static_cast<int>(i);
          best_signs.assign(order.size(), false);
          int idx = static_cast<int>(k);
          for (std::size_t layer = order.size(); layer > 0; --layer) {
            const State& st = layers[layer][idx];
            best_signs[layer - 1] = st.plus;
            idx = st.prev;
          }
          best_order = order;
        }
      }
    }
  }
  if (!std::isfinite(best)) fail(ErrorKind::degenerate, "every valuation of this star has zero variance");

  SolveReport<double> r;
  Embedding<double> x(n, 1);
  for (std::size_t k = 0; k < best_order.size(); ++k) x[best_order[k]] = best_signs[k] ? 1.0 : -1.0;
  x[best_i] = best_y;
  r.value = best;
  r.witness = std::move(x);
  r.status = make_approx(eps);
  r.diagnostics["special_leaf"] = std::to_string(best_i);
  r.diagnostics["balance_step"] = std::to_string(delta);
  r.diagnostics["y_step"] = std::to_string(ystep);
  return r;
}

/// Number of leaves whose distance to the center is not the maximum one (relative tolerance 1e-9).
template <class Scalar>
int almost_binary_violation(const Embedding<Scalar>& x, const StarGraph<Scalar>& s) {
  if (x.size() != s.size() || x.dim() != 1) fail(ErrorKind::precondition, "expected a 1-D valuation of the star");
  if (!(variance(x, s.graph()) > 0)) fail(ErrorKind::precondition, "valuation has zero variance");
  const double c = to_double(x[0]);
  double far = 0;
  for (std::size_t i = 1; i < s.size(); ++i) far = std::max(far, std::abs(to_double(x[i]) - c));
  int count = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(std::abs(to_double(x[i]) - c) - far) > 1e-9 * far) ++count;
  return count;
}

/// lam/2 <= phi <= 4 lam + 4 sqrt(lam), with 1e-9 slack on both sides.
inline bool cheeger_sandwich(double lam, double phi) {
  require(lam >= 0 && phi >= 0, "cheeger_sandwich takes non-negative arguments");
  return lam / 2 <= phi + 1e-9 && phi <= 4 * lam + 4 * std::sqrt(lam) + 1e-9;
}

}  // namespace spreadkit
