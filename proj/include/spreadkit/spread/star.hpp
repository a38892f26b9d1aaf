#pragma once

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

/// Variance of a binary star valuation: center at 0, leaf mass pm at -1 and pp at +1.
template <class Scalar>
Scalar star_spread_value(const Scalar& pm, const Scalar& pp, const Scalar& p0) {
  if (pm < 0 || pp < 0 || p0 < 0) fail(ErrorKind::precondition, "masses must be non-negative");
  if constexpr (is_exact_v<Scalar>) {
    if (pm + pp + p0 != 1) fail(ErrorKind::precondition, "masses must sum to 1");
  } else {
    if (std::abs(pm + pp + p0 - 1) > 1e-12) fail(ErrorKind::precondition, "masses must sum to 1");
  }
  return 4 * pm * pp + (1 - p0) * p0;
}

/// Exact spread constant of a star. The optimum is binary, so it suffices to split the leaves as
/// evenly as possible; the split comes from an exact subset-sum table.
inline SolveReport<Rational> star_spread_exact(const StarGraph<Rational>& s) {
  auto im = integer_masses(s.graph().pi());
  SubsetSums ss(std::vector<std::int64_t>(im.weight.begin() + 1, im.weight.end()));
  const std::int64_t T = ss.total();
  std::int64_t best = -1;
  for (std::int64_t lo = T / 2; lo >= 0; --lo)
    if (ss.reachable(lo)) {
      best = lo;
      break;
    }
  const Rational W = im.total;
  const Rational pm = Rational(best) / W, pp = Rational(T - best) / W, p0 = s.center_mass();

  SolveReport<Rational> r;
  r.value = star_spread_value(pm, pp, p0);
  Embedding<Rational> y(s.size(), 1);
  auto chosen = ss.subset_for(best);
  for (std::size_t i = 0; i < chosen.size(); ++i) y[i + 1] = chosen[i] ? Rational(-1) : Rational(1);
  r.witness = std::move(y);
  r.diagnostics["minus_mass"] = to_string(pm);
  r.diagnostics["plus_mass"] = to_string(pp);
  return r;
}

}  // namespace spreadkit
