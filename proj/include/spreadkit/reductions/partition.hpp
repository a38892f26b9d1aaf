#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/rational.hpp"
#include "spreadkit/lambda/oracle.hpp"
#include "spreadkit/lambda/star.hpp"
#include "spreadkit/spread/star.hpp"

namespace spreadkit {

struct PartitionInstance {
  std::vector<std::int64_t> p;

  explicit PartitionInstance(std::vector<std::int64_t> values) : p(std::move(values)) {
    if (p.empty()) fail(ErrorKind::invalid_input, "partition instance needs at least one integer");
    for (auto x : p)
      if (x < 1) fail(ErrorKind::invalid_input, "partition integers must be positive");
  }

  std::int64_t sum() const { return std::accumulate(p.begin(), p.end(), std::int64_t(0)); }
  std::size_t size() const { return p.size(); }
};

/// Equal-sum split by trying every assignment (the first element's side is fixed).
inline bool partition_bruteforce(const PartitionInstance& in, std::size_t max_len = 24) {
  const std::size_t m = in.size();
  if (m > max_len || m > 40) fail(ErrorKind::budget_exceeded, "partition instance too long for brute force");
  const std::int64_t total = in.sum();
  if (total % 2) return false;
  // running difference (this side) - (other side), Gray code over elements 1..m-1
  std::int64_t diff = total;
  std::vector<int> side(m, 1);
  const std::uint64_t patterns = std::uint64_t(1) << (m - 1);
  for (std::uint64_t t = 0; t < patterns; ++t) {
    if (t > 0) {
      int bit = __builtin_ctzll(t) + 1;
      side[bit] = -side[bit];
      diff += 2 * side[bit] * in.p[bit];
    }
    if (diff == 0) return true;
  }
  return false;
}

/// Star for the lambda_inf reduction: pi_0 = (beta - 1) / beta, pi_j = p_j / (beta sum p).
inline StarGraph<Rational> to_lambda_star(const PartitionInstance& in, const Rational& beta) {
  if (!(beta > 1)) fail(ErrorKind::precondition, "beta must exceed 1");
  std::vector<Rational> pi{(beta - 1) / beta};
  const Rational s(in.sum());
  for (auto x : in.p) pi.push_back(Rational(x) / (beta * s));
  return StarGraph<Rational>::from_masses(std::move(pi));
}

/// Star for the spread-constant reduction: pi_0 = 1 - beta, pi_j = beta p_j / sum p.
inline StarGraph<Rational> to_spread_star(const PartitionInstance& in, const Rational& beta) {
  if (!(beta > 0 && beta < 1)) fail(ErrorKind::precondition, "beta must lie in (0, 1)");
  std::vector<Rational> pi{1 - beta};
  const Rational s(in.sum());
  for (auto x : in.p) pi.push_back(beta * Rational(x) / s);
  return StarGraph<Rational>::from_masses(std::move(pi));
}

/// Vertex-expansion instance: the lambda_inf star reused as is.
inline StarGraph<Rational> to_vexp_star(const PartitionInstance& in, const Rational& beta) {
  return to_lambda_star(in, beta);
}

struct GapBound {
  Rational beta;
  std::int64_t sum_p = 0;
  Rational gap;
};

/// min{(beta - 1) / beta, 1 / beta} / (3 (sum p)^2): NO instances have lambda_inf >= beta + gap.
inline GapBound lambda_gap_bound(const PartitionInstance& in, const Rational& beta) {
  if (!(beta > 1)) fail(ErrorKind::precondition, "beta must exceed 1");
  GapBound g;
  g.beta = beta;
  g.sum_p = in.sum();
  const Rational s(g.sum_p);
  g.gap = std::min<Rational>((beta - 1) / beta, 1 / beta) / (3 * s * s);
  return g;
}

enum class LambdaBackend {
  exact,   // closed form in floating point, exact decision procedure near the threshold
  oracle,  // small-instance interval oracle
  fptas,   // star FPTAS with eps tied to the gap
};

struct PartitionDecision {
  bool yes = false;
  double lambda = 0;  // backend estimate of lambda_inf
  Rational threshold;
};

/// Answers Partition through lambda_inf of the gadget: YES iff lambda_inf <= beta + gap / 2.
inline PartitionDecision decide_partition(const PartitionInstance& in, const Rational& beta,
                                          LambdaBackend backend = LambdaBackend::exact) {
  auto s = to_lambda_star(in, beta);
  const auto bound = lambda_gap_bound(in, beta);
  PartitionDecision d;
  d.threshold = beta + bound.gap / 2;
  const double thr = to_double(d.threshold);
  switch (backend) {
    case LambdaBackend::exact: {
      d.lambda = star_closed_form_value(s);
      if (d.lambda <= thr * (1 - 1e-9)) {
        d.yes = true;
      } else if (d.lambda >= thr * (1 + 1e-9)) {
        d.yes = false;
      } else {
        d.yes = star_lambda_at_most(s, d.threshold);
      }
      break;
    }
    case LambdaBackend::oracle: {
      auto r = oracle_small(s.graph());
      d.lambda = r.hi;
      if (r.hi <= thr) {
        d.yes = true;
      } else if (r.lo > thr) {
        d.yes = false;
      } else {
        fail(ErrorKind::non_convergence, "oracle interval straddles the decision threshold");
      }
      break;
    }
    case LambdaBackend::fptas: {
      const double eps = 0.99 * to_double(bound.gap / (3 * beta));
      auto r = star_fptas(s, eps);
      d.lambda = r.value;
      d.yes = r.value <= thr;
      break;
    }
  }
  return d;
}

/// Certified check that lambda_inf(gadget) >= beta + gap.
inline bool lambda_gap_holds(const PartitionInstance& in, const Rational& beta) {
  auto s = to_lambda_star(in, beta);
  const Rational target = beta + lambda_gap_bound(in, beta).gap;
  const double v = star_closed_form_value(s), t = to_double(target);
  if (v >= t * (1 + 1e-9)) return true;
  return !star_lambda_at_most(s, target, true);
}

struct SpreadGap {
  Rational value;     // exact spread constant of the gadget
  Rational beta;
  bool yes_by_value;  // value == beta
  bool yes_by_partition;
  bool agrees() const { return yes_by_value == yes_by_partition; }
};

/// The spread gadget has spread constant beta on YES instances and strictly less otherwise.
inline SpreadGap spread_gap_check(const PartitionInstance& in, const Rational& beta) {
  SpreadGap out;
  out.beta = beta;
  out.value = star_spread_exact(to_spread_star(in, beta)).value;
  if (out.value > beta) fail(ErrorKind::non_convergence, "gadget spread constant exceeds beta");
  out.yes_by_value = out.value == beta;
  out.yes_by_partition = partition_bruteforce(in);
  return out;
}

}  // namespace spreadkit
