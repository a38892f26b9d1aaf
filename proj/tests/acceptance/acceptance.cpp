// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spreadkit/spreadkit.hpp"

using namespace spreadkit;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// every multiset of size 1..max_len over 1..max_value, nondecreasing
void for_each_multiset(std::size_t max_len, int max_value, const std::function<void(const std::vector<std::int64_t>&)>& f) {
  std::vector<std::int64_t> cur;
  std::function<void(int)> rec = [&](int lo) {
    if (!cur.empty()) f(cur);
    if (cur.size() == max_len) return;
    for (int v = lo; v <= max_value; ++v) {
      cur.push_back(v);
      rec(v);
      cur.pop_back();
    }
  };
  rec(1);
}

WeightedGraph<Rational> random_tree(std::size_t n, std::mt19937_64& rng) {
  return gen::make_graph(n, gen::random_tree_edges(n, rng), gen::random_pi(n, rng));
}

// AC1 -----------------------------------------------------------------------------------------

// leaves split into two groups of equal integer weight, centre weight arbitrary
StarGraph<Rational> random_balanced_star(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 4), w(1, 9);
  std::vector<long> a(len(rng)), b(len(rng));
  for (auto& x : a) x = w(rng);
  long sa = 0;
  for (auto x : a) sa += x;
  long sb = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    b[i] = w(rng);
    sb += b[i];
  }
  if (sb >= sa) {
    b.resize(1);
    sb = 0;
  }
  b.back() = sa - sb;
  long centre = w(rng);
  long total = centre + 2 * sa;
  std::vector<Rational> pi{Rational(centre, total)};
  for (auto x : a) pi.push_back(Rational(x, total));
  for (auto x : b) pi.push_back(Rational(x, total));
  return StarGraph<Rational>::from_masses(std::move(pi));
}

Outcome ac1() {
  std::mt19937_64 rng(1001);
  auto t0 = Clock::now();
  int bad = 0;
  double worst_width = 0;
  for (int t = 0; t < 50; ++t) {
    auto s = random_balanced_star(rng);
    const Rational exact = 1 / (1 - s.center_mass());
    const double v = to_double(exact);
    auto r = oracle_small(s.graph());
    worst_width = std::max(worst_width, r.hi - r.lo);
    bool ok = r.hi - r.lo <= 1e-7 && r.lo <= v + 1e-9 && r.hi >= v - 1e-9 && star_is_tight(s);
    auto f = star_fptas(s, 1e-3);
    ok = ok && f.value >= v * (1 - 1e-12) && f.value <= 1.001 * v;
    bad += !ok;
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << "50 stars, " << bad << " bad, max interval width " << worst_width << ", " << secs << " s";
  return {bad == 0 && secs < 30, d.str()};
}

// AC2 -----------------------------------------------------------------------------------------

Outcome ac2() {
  auto t0 = Clock::now();
  long instances = 0, disagree = 0, gap_fail = 0, no_count = 0;
  for_each_multiset(8, 12, [&](const std::vector<std::int64_t>& p) {
    PartitionInstance in(p);
    const bool truth = partition_bruteforce(in);
    ++instances;
    no_count += !truth;
    for (Rational beta : {Rational(3, 2), Rational(2), Rational(3)}) {
      if (decide_partition(in, beta).yes != truth) ++disagree;
      if (!truth && !lambda_gap_holds(in, beta)) ++gap_fail;
    }
  });
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << instances << " instances x 3 beta (" << no_count << " NO), " << disagree << " disagreements, " << gap_fail
    << " gap failures, " << secs << " s";
  return {disagree == 0 && gap_fail == 0 && secs < 300, d.str()};
}

// AC3 -----------------------------------------------------------------------------------------

Outcome ac3() {
  auto t0 = Clock::now();
  long instances = 0, wrong = 0;
  for_each_multiset(8, 12, [&](const std::vector<std::int64_t>& p) {
    PartitionInstance in(p);
    ++instances;
    for (Rational beta : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      auto r = spread_gap_check(in, beta);
      if (!r.agrees()) ++wrong;
    }
  });
  auto claw = gen::claw();
  const Rational e1 = abs_oracle(claw).value, e1_star = star_spread_exact(StarGraph<Rational>(claw)).value;
  const Rational e2 = tree_mve2_value(TreeGraph<Rational>(claw)).value;
  const bool claw_ok = e1 == Rational(8, 9) && e1_star == e1 && e2 == 1 && e2 / e1 == Rational(9, 8);
  std::ostringstream d;
  d << instances << " instances x 3 beta, " << wrong << " mismatches; claw E1 = " << to_string(e1)
    << ", E2 = " << to_string(e2) << ", ratio " << to_string(e2 / e1) << ", " << seconds_since(t0) << " s";
  return {wrong == 0 && claw_ok, d.str()};
}

// AC4 -----------------------------------------------------------------------------------------

Outcome ac4() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(1004);
  long runs = 0, bracket = 0, stretch = 0, singleton = 0;
  int shapes = 0;
  for (std::size_t n = 1; n <= 9; ++n) {
    auto trees = n == 1 ? std::vector<std::vector<Edge>>{{}} : gen::all_free_trees(n);
    for (const auto& edges : trees) {
      ++shapes;
      for (int t = 0; t < 100; ++t) {
        auto g = gen::make_graph(n, edges, gen::random_pi(n, rng));
        auto exact = abs_oracle(g);
        auto f = tree_spread_fptas(TreeGraph<Rational>(g), 1e-3);
        ++runs;
        if (f.value > exact.value || f.value * Rational(1001, 1000) < exact.value) ++bracket;
        for (auto e : g.edges())
          if (exact.witness.squared_distance(e.u, e.v) != 1) {
            ++stretch;
            break;
          }
        if (abs_oracle(g, AbsOracleOptions{14, true}).value != exact.value) ++singleton;
      }
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << shapes << " tree shapes x 100 pi = " << runs << " runs; bracket " << bracket << ", stretch " << stretch
    << ", singleton-root " << singleton << " failures, " << secs << " s";
  return {bracket == 0 && stretch == 0 && singleton == 0 && secs < 600, d.str()};
}

// AC5 -----------------------------------------------------------------------------------------

Outcome ac5() {
  std::mt19937_64 rng(1005);
  int bad_lift = 0, bad_embed = 0, bad_case = 0;
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 2 + t % 9;
    auto g = random_tree(n, rng);
    TreeGraph<Rational> tree(g);
    auto r = tree_mve2_value(tree);
    const double truth = to_double(r.value);
    auto gd = g.converted<double>();
    auto lift = lift_solve(gd);
    const double err = std::abs(lift.objective - truth);
    worst = std::max(worst, err);
    bad_lift += err > 1e-3 || !check_lift(lift, gd).ok();
    auto y = tree_mve2_embed(tree);
    bool ok = lipschitz_check(y, gd, 1e-9).ok && std::abs(variance(y, gd) - truth) <= 1e-9;
    for (auto e : g.edges()) ok = ok && std::abs(y.squared_distance(e.u, e.v) - 1) <= 1e-9;
    bad_embed += !ok;
    bad_case += r.diagnostics.at("feasible_cases") != "1";
  }
  std::ostringstream d;
  d << "50 trees, max |lift - E2| = " << worst << "; lift " << bad_lift << ", embedding " << bad_embed << ", case "
    << bad_case << " failures";
  return {bad_lift == 0 && bad_embed == 0 && bad_case == 0, d.str()};
}

// AC6 -----------------------------------------------------------------------------------------

Outcome ac6() {
  auto t0 = Clock::now();
  int trees = 0, dp_bad = 0, cheeger_bad = 0, stars = 0;
  for (std::size_t n = 2; n <= 10; ++n)
    for (const auto& edges : gen::all_free_trees(n)) {
      auto g = gen::make_graph(n, edges, gen::uniform_pi(n));
      ++trees;
      dp_bad += vexp_tree_uniform(TreeGraph<Rational>(g)).value != vexp_bruteforce(g).value;
    }
  std::mt19937_64 rng(1006);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + t % 14;
    auto g = gen::make_graph(n, gen::random_tree_edges(n, rng), gen::uniform_pi(n));
    ++trees;
    dp_bad += vexp_tree_uniform(TreeGraph<Rational>(g)).value != vexp_bruteforce(g).value;
  }
  for (std::size_t n = 2; n <= 8; ++n)
    for (int t = 0; t < 30; ++t) {
      auto pi = t == 0 ? gen::uniform_pi(n) : gen::random_pi(n, rng, 9);
      auto s = StarGraph<Rational>::from_masses(pi);
      auto lam = oracle_small(s.graph());
      double phi = to_double(vexp_bruteforce(s.graph()).value);
      ++stars;
      cheeger_bad += !(cheeger_sandwich(lam.lo, phi) && cheeger_sandwich(lam.hi, phi));
    }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << trees << " trees, " << dp_bad << " DP mismatches; " << stars << " stars, " << cheeger_bad
    << " Cheeger failures, " << secs << " s";
  return {dp_bad == 0 && cheeger_bad == 0 && secs < 300, d.str()};
}

// AC7 -----------------------------------------------------------------------------------------

Outcome ac7() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(1007);
  std::vector<WeightedGraph<double>> graphs{gen::claw().converted<double>()};
  std::uniform_int_distribution<int> size(8, 16);
  for (int i = 0; i < 5; ++i) graphs.push_back(random_tree(size(rng), rng).converted<double>());
  const int T = 10000;
  int cases = 0, pair_bad = 0, lip_bad = 0, keep_bad = 0;
  double worst_z = 0, worst_lip = 0, worst_keep = 1;
  for (const auto& g : graphs) {
    const std::size_t n = g.size();
    auto lift = lift_solve(g);
    const double ln = std::log(static_cast<double>(n));
    std::vector<int> ks{1, 2, 4, static_cast<int>(std::ceil(ln)), static_cast<int>(std::ceil(4 * ln))};
    for (int k : ks) {
      ++cases;
      const double tau = rounding_tau(k, n);
      std::vector<double> s(n * n, 0), s2(n * n, 0);
      int lip_fail = 0, kept = 0;
      for (int t = 0; t < T; ++t) {
        auto r = gaussian_round(lift.x, g, k, static_cast<std::uint64_t>(t));
        lip_fail += !r.report.lipschitz_ok;
        kept += r.report.variance_retained;
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t v = u + 1; v < n; ++v) {
            double d = r.y.squared_distance(u, v) * tau / k;
            s[u * n + v] += d;
            s2[u * n + v] += d * d;
          }
      }
      bool pairs_ok = true;
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
          double mean = s[u * n + v] / T;
          double se = std::sqrt(std::max(0.0, s2[u * n + v] / T - mean * mean) / T);
          double dev = std::abs(mean - lift.x.squared_distance(u, v));
          if (se > 0) worst_z = std::max(worst_z, dev / se);
          if (dev > 5 * se + 1e-12) pairs_ok = false;
        }
      pair_bad += !pairs_ok;
      const double lip_rate = static_cast<double>(lip_fail) / T, keep_rate = static_cast<double>(kept) / T;
      worst_lip = std::max(worst_lip, lip_rate * n / 2);
      worst_keep = std::min(worst_keep, keep_rate);
      lip_bad += lip_rate > 2.0 / n;
      keep_bad += keep_rate < 1.0 / 24;
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << cases << " (graph, k) cases x " << T << " seeds; max z " << worst_z << ", max lip rate/(2/n) " << worst_lip
    << ", min retention " << worst_keep << "; failures pair " << pair_bad << " lip " << lip_bad << " keep " << keep_bad
    << ", " << secs << " s";
  return {pair_bad == 0 && lip_bad == 0 && keep_bad == 0 && secs < 600, d.str()};
}

// AC8 -----------------------------------------------------------------------------------------

Outcome ac8() {
  auto q3 = gen::make_graph(8, gen::hypercube_edges(3), gen::uniform_pi(8)).converted<double>();
  Embedding<double> x(8, 3);
  for (int v = 0; v < 8; ++v)
    for (int c = 0; c < 3; ++c) x(v, c) = (v >> c & 1) ? 0.5 : -0.5;
  const double vx = variance(x, q3);
  const double pca = variance(pca_round(x, q3, 1), q3) / vx;

  const int k = 1, T = 20000;
  const double predicted = k / rounding_tau(k, 8);
  double s = 0, s2 = 0;
  for (int t = 0; t < T; ++t) {
    double r = gaussian_round(x, q3, k, static_cast<std::uint64_t>(t)).report.variance_ratio;
    s += r;
    s2 += r * r;
  }
  const double mean = s / T, se = std::sqrt((s2 / T - mean * mean) / T);
  const double z = std::abs(mean - predicted) / se;
  std::ostringstream d;
  d << "PCA k=1 retains " << pca << "; Gaussian mean ratio " << mean << " vs k/tau " << predicted << " (z = " << z
    << ")";
  return {pca <= 0.34 && z <= 5, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"AC1 balanced-star exactness", ac1},  {"AC2 lambda_inf hardness gap", ac2},
      {"AC3 spread gadget and claw", ac3},   {"AC4 tree FPTAS vs ABS oracle", ac4},
      {"AC5 E2 tree pipeline", ac5},         {"AC6 vertex expansion", ac6},
      {"AC7 Gaussian rounding", ac7},        {"AC8 PCA vs Gaussian rounding", ac8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
