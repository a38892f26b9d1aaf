#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "selftest.hpp"
#include "spreadkit/spreadkit.hpp"

namespace sk = spreadkit;
using json = nlohmann::json;

namespace {

struct Output {
  bool json = false;
  std::string numeric = "rational";
  bool exact() const { return numeric == "rational"; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) sk::fail(sk::ErrorKind::invalid_input, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) sk::fail(sk::ErrorKind::invalid_input, "cannot write " + path);
  out << text;
}

sk::WeightedGraph<sk::Rational> load_graph(const std::string& path, bool zero_mass) {
  return sk::parse_graph(read_file(path), sk::ParseOptions{zero_mass});
}

json number(const sk::Rational& x, const Output& o) {
  if (o.exact()) return sk::to_string(x);
  return sk::to_double(x);
}
json number(double x, const Output&) { return x; }

json embedding_json(const sk::Embedding<sk::Rational>& y, const Output& o) {
  json rows = json::array();
  for (std::size_t v = 0; v < y.size(); ++v) {
    json row = json::array();
    for (std::size_t c = 0; c < y.dim(); ++c) row.push_back(number(y(v, c), o));
    rows.push_back(row);
  }
  return rows;
}
json embedding_json(const sk::Embedding<double>& y, const Output&) { return sk::embedding_to_json(y)["vectors"]; }

template <class Scalar>
json report_json(const sk::SolveReport<Scalar>& r, const Output& o) {
  json j;
  j["value"] = number(r.value, o);
  j["status"] = r.status_name();
  if (auto* a = std::get_if<sk::status::Approx>(&r.status)) j["eps"] = a->eps;
  if (auto* iv = std::get_if<sk::status::Interval<Scalar>>(&r.status)) {
    j["lo"] = number(iv->lo, o);
    j["hi"] = number(iv->hi, o);
  }
  if (std::holds_alternative<sk::Embedding<Scalar>>(r.witness)) j["witness"] = embedding_json(r.embedding(), o);
  if (std::holds_alternative<sk::VertexSet>(r.witness)) j["set"] = r.vertex_set();
  j["diagnostics"] = r.diagnostics;
  return j;
}

void emit(const json& j, const Output& o) {
  if (o.json) {
    std::cout << j.dump() << "\n";
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "witness" || it.key() == "diagnostics") continue;
    std::cout << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  }
  if (j.contains("diagnostics"))
    for (auto it = j["diagnostics"].begin(); it != j["diagnostics"].end(); ++it)
      std::cout << "  " << it.key() << ": " << it->get<std::string>() << "\n";
}

sk::Rational parse_beta(const std::string& s) {
  auto b = sk::parse_rational(s);
  if (!b) sk::fail(sk::ErrorKind::invalid_input, "cannot parse beta '" + s + "'");
  return *b;
}

sk::PartitionInstance parse_p(const std::string& s) {
  std::vector<std::int64_t> p;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    std::int64_t x = 0;
    try {
      x = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) sk::fail(sk::ErrorKind::invalid_input, "--p takes comma-separated integers");
    p.push_back(x);
  }
  return sk::PartitionInstance(p);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv("SPREAD_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      sk::fail(sk::ErrorKind::invalid_input, "SPREAD_SEED must be a non-negative integer");
    }
  }
  sk::fail(sk::ErrorKind::invalid_input, "randomized method needs --seed or SPREAD_SEED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spreadkit: lambda_inf, spread constant, maximum variance embedding, vertex expansion"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads (solvers currently run sequentially)")
      ->check(CLI::PositiveNumber);

  Output out;
  std::string graph_path, method, lift_path, embed_out, emit_path, target, p_text, beta_text, out_path;
  double eps = 0, tol = 1e-6;
  int k = 1, trials = 1, max_iters = 200;
  std::optional<std::uint64_t> seed;
  bool zero_mass = false;
  std::string mutate;

  auto common = [&](CLI::App* sub, bool needs_graph) {
    sub->add_flag("--json", out.json, "print one JSON object");
    sub->add_option("--numeric", out.numeric, "rational or float")->check(CLI::IsMember({"rational", "float"}));
    if (needs_graph) {
      sub->add_option("--graph", graph_path, "graph file")->required();
      sub->add_flag("--allow-zero-mass", zero_mass, "accept pi_v = 0");
    }
  };

  auto* lam = app.add_subcommand("lambda-inf", "lambda_inf of a graph");
  common(lam, true);
  lam->add_option("--method", method, "oracle | star-closed | star-fptas")
      ->required()
      ->check(CLI::IsMember({"oracle", "star-closed", "star-fptas"}));
  lam->add_option("--eps", eps, "FPTAS accuracy");

  auto* spr = app.add_subcommand("spread", "spread constant of a graph");
  common(spr, true);
  spr->add_option("--method", method, "abs-oracle | star-exact | tree-fptas")
      ->required()
      ->check(CLI::IsMember({"abs-oracle", "star-exact", "tree-fptas"}));
  spr->add_option("--eps", eps, "FPTAS accuracy");

  auto* mve = app.add_subcommand("mve2", "two-dimensional maximum variance embedding of a tree");
  common(mve, true);
  mve->add_option("--embed-out", embed_out, "write the planar embedding as JSON");

  auto* lift = app.add_subcommand("lift", "lifted maximum variance embedding");
  common(lift, true);
  lift->add_option("--tol", tol, "relative objective tolerance")->check(CLI::PositiveNumber);
  lift->add_option("--max-iters", max_iters, "outer iterations")->check(CLI::PositiveNumber);
  lift->add_option("--out", out_path, "write the lift as JSON");

  auto* rnd = app.add_subcommand("round", "round a lift to k dimensions");
  common(rnd, false);
  rnd->add_option("--lift", lift_path, "lift JSON written by 'lift --out'")->required();
  rnd->add_option("--graph", graph_path, "graph file, when the lift JSON does not embed one");
  rnd->add_flag("--allow-zero-mass", zero_mass, "accept pi_v = 0");
  rnd->add_option("--k", k, "target dimension")->check(CLI::PositiveNumber);
  rnd->add_option("--seed", seed, "first seed; trial t uses seed + t");
  rnd->add_option("--trials", trials, "number of seeds")->check(CLI::PositiveNumber);
  rnd->add_option("--method", method, "gaussian | pca")->required()->check(CLI::IsMember({"gaussian", "pca"}));
  rnd->add_option("--embed-out", embed_out, "write the first trial's embedding as JSON");

  auto* vx = app.add_subcommand("vexp", "vertex expansion");
  common(vx, true);
  vx->add_option("--method", method, "brute | tree-dp | star")
      ->required()
      ->check(CLI::IsMember({"brute", "tree-dp", "star"}));

  auto* red = app.add_subcommand("reduce", "Partition instance to star gadget");
  red->add_flag("--json", out.json, "print one JSON object");
  red->add_option("--p", p_text, "comma-separated positive integers")->required();
  red->add_option("--beta", beta_text, "gadget parameter")->required();
  red->add_option("--target", target, "lambda | spread | vexp")
      ->required()
      ->check(CLI::IsMember({"lambda", "spread", "vexp"}));
  red->add_option("--emit", emit_path, "write the graph file here instead of stdout");

  auto* gap = app.add_subcommand("gapcheck", "predicted versus observed gadget gap (JSON)");
  gap->add_option("--p", p_text, "comma-separated positive integers")->required();
  gap->add_option("--beta", beta_text, "gadget parameter")->required();
  gap->add_option("--target", target, "lambda | spread | vexp")
      ->required()
      ->check(CLI::IsMember({"lambda", "spread", "vexp"}));

  auto* self = app.add_subcommand("selftest", "run the invariant suites at reduced size");
  self->add_flag("--json", out.json, "print one JSON object");
  self->add_option("--mutate", mutate)->check(CLI::IsMember({"tau", "fptas-grid"}))->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    json j;
    int rc = 0;
    if (lam->parsed()) {
      auto g = load_graph(graph_path, zero_mass);
      j["command"] = "lambda-inf";
      j["method"] = method;
      if (method == "oracle") {
        j.update(report_json(sk::oracle_small(g).report(), out));
      } else {
        sk::StarGraph<sk::Rational> s(g);
        if (method == "star-closed") {
          auto r = sk::star_closed_form(s);
          sk::SolveReport<double> rep;
          rep.value = r.value;
          rep.witness = r.witness;
          rep.diagnostics["special_leaf"] = std::to_string(r.special_leaf);
          j.update(report_json(rep, out));
          if (r.exact_value) j["exact_value"] = sk::to_string(*r.exact_value);
        } else {
          if (!(eps > 0)) sk::fail(sk::ErrorKind::precondition, "--eps is required for star-fptas");
          j.update(report_json(sk::star_fptas(s, eps), out));
        }
      }
    } else if (spr->parsed()) {
      auto g = load_graph(graph_path, zero_mass);
      j["command"] = "spread";
      j["method"] = method;
      if (method == "star-exact") {
        auto r = sk::star_spread_exact(sk::StarGraph<sk::Rational>(g));
        j.update(report_json(r, out));
      } else if (method == "abs-oracle") {
        if (out.exact()) {
          j.update(report_json(sk::abs_oracle(g).report(), out));
        } else {
          j.update(report_json(sk::abs_oracle(g.converted<double>()).report(), out));
        }
      } else {
        if (!(eps > 0)) sk::fail(sk::ErrorKind::precondition, "--eps is required for tree-fptas");
        if (out.exact()) {
          j.update(report_json(sk::tree_spread_fptas(sk::TreeGraph<sk::Rational>(g), eps), out));
        } else {
          j.update(report_json(sk::tree_spread_fptas(sk::TreeGraph<double>(g.converted<double>()), eps), out));
        }
      }
    } else if (mve->parsed()) {
      auto g = load_graph(graph_path, zero_mass);
      sk::TreeGraph<sk::Rational> t(g);
      j["command"] = "mve2";
      j.update(report_json(sk::tree_mve2_value(t), out));
      auto y = sk::tree_mve2_embed(t);
      j["witness"] = embedding_json(y, out);
      if (!embed_out.empty()) write_file(embed_out, sk::embedding_to_json(y).dump(2) + "\n");
    } else if (lift->parsed()) {
      auto g = load_graph(graph_path, zero_mass).converted<double>();
      auto r = sk::lift_solve(g, tol, max_iters);
      auto check = sk::check_lift(r, g);
      j["command"] = "lift";
      j["value"] = r.objective;
      j["status"] = r.converged ? "converged" : "not_converged";
      j["dual_bound"] = r.dual_bound;
      j["iterations"] = r.iterations;
      j["min_eigenvalue"] = check.min_eigenvalue;
      j["max_edge_excess"] = check.max_edge_excess;
      if (!out_path.empty()) {
        json doc = sk::embedding_to_json(r.x);
        doc["objective"] = r.objective;
        doc["dual_bound"] = r.dual_bound;
        doc["converged"] = r.converged;
        doc["graph"] = sk::format_graph(load_graph(graph_path, zero_mass));
        write_file(out_path, doc.dump(2) + "\n");
      }
      if (!r.converged) rc = 3;
    } else if (rnd->parsed()) {
      json doc;
      try {
        doc = json::parse(read_file(lift_path));
      } catch (const json::parse_error& e) {
        sk::fail(sk::ErrorKind::invalid_input, std::string("lift file is not JSON: ") + e.what());
      }
      auto x = sk::embedding_from_json(doc);
      sk::WeightedGraph<sk::Rational> gr;
      if (!graph_path.empty()) {
        gr = load_graph(graph_path, zero_mass);
      } else if (doc.contains("graph") && doc["graph"].is_string()) {
        gr = sk::parse_graph(doc["graph"].get<std::string>(), sk::ParseOptions{true});
      } else {
        sk::fail(sk::ErrorKind::invalid_input, "no graph: pass --graph or use a lift written by 'lift --out'");
      }
      auto g = gr.converted<double>();
      j["command"] = "round";
      j["method"] = method;
      j["k"] = k;
      const double vx0 = sk::variance(x, g);
      if (method == "pca") {
        auto y = sk::pca_round(x, g, k);
        j["variance"] = sk::variance(y, g);
        j["variance_ratio"] = vx0 > 0 ? sk::variance(y, g) / vx0 : 0.0;
        j["lipschitz_ok"] = sk::lipschitz_check(y, g, 1e-12).ok;
        if (!embed_out.empty()) write_file(embed_out, sk::embedding_to_json(y).dump(2) + "\n");
      } else {
        const std::uint64_t s0 = resolve_seed(seed);
        double ratio_sum = 0;
        int lip_fail = 0, kept = 0;
        double tau = 0;
        for (int t = 0; t < trials; ++t) {
          auto r = sk::gaussian_round(x, g, k, s0 + t);
          tau = r.report.tau;
          ratio_sum += r.report.variance_ratio;
          lip_fail += !r.report.lipschitz_ok;
          kept += r.report.variance_retained;
          if (t == 0 && !embed_out.empty()) write_file(embed_out, sk::embedding_to_json(r.y).dump(2) + "\n");
        }
        j["seed"] = s0;
        j["trials"] = trials;
        j["tau"] = tau;
        j["mean_variance_ratio"] = ratio_sum / trials;
        j["predicted_variance_ratio"] = k / tau;
        j["lipschitz_failure_rate"] = static_cast<double>(lip_fail) / trials;
        j["retention_rate"] = static_cast<double>(kept) / trials;
      }
    } else if (vx->parsed()) {
      auto g = load_graph(graph_path, zero_mass);
      j["command"] = "vexp";
      j["method"] = method;
      if (method == "brute") {
        if (out.exact()) {
          j.update(report_json(sk::vexp_bruteforce(g), out));
        } else {
          j.update(report_json(sk::vexp_bruteforce(g.converted<double>()), out));
        }
      } else if (method == "tree-dp") {
        j.update(report_json(sk::vexp_tree_uniform(sk::TreeGraph<sk::Rational>(g)), out));
      } else {
        j.update(report_json(sk::vexp_star_weighted(sk::StarGraph<sk::Rational>(g)), out));
      }
    } else if (red->parsed()) {
      auto p = parse_p(p_text);
      auto beta = parse_beta(beta_text);
      auto s = target == "lambda"   ? sk::to_lambda_star(p, beta)
               : target == "spread" ? sk::to_spread_star(p, beta)
                                    : sk::to_vexp_star(p, beta);
      const std::string text = sk::format_graph(s.graph());
      if (emit_path.empty() && !out.json) {
        std::cout << text;
        return 0;
      }
      if (!emit_path.empty()) write_file(emit_path, text);
      j["command"] = "reduce";
      j["target"] = target;
      j["beta"] = sk::to_string(beta);
      json pi = json::array();
      for (const auto& x : s.graph().pi()) pi.push_back(sk::to_string(x));
      j["pi"] = pi;
      if (!emit_path.empty()) j["emitted"] = emit_path;
      if (!out.json) {
        std::cout << "wrote " << emit_path << "\n";
        return 0;
      }
    } else if (gap->parsed()) {
      out.json = true;
      auto p = parse_p(p_text);
      auto beta = parse_beta(beta_text);
      bool yes = sk::partition_bruteforce(p);
      j["command"] = "gapcheck";
      j["target"] = target;
      j["beta"] = sk::to_string(beta);
      j["partition"] = yes;
      if (target == "lambda") {
        auto s = sk::to_lambda_star(p, beta);
        auto bound = sk::lambda_gap_bound(p, beta);
        auto cf = sk::star_closed_form(s);
        j["predicted_gap"] = sk::to_string(bound.gap);
        j["lambda"] = cf.value;
        if (cf.exact_value) j["lambda_exact"] = sk::to_string(*cf.exact_value);
        j["observed_gap"] = cf.value - sk::to_double(beta);
        j["decision"] = sk::decide_partition(p, beta).yes;
        j["gap_holds"] = yes ? sk::star_lambda_at_most(s, beta) : sk::lambda_gap_holds(p, beta);
      } else if (target == "spread") {
        auto r = sk::spread_gap_check(p, beta);
        j["value"] = sk::to_string(r.value);
        j["observed_gap"] = sk::to_string(beta - r.value);
        j["predicted"] = yes ? "equal" : "below";
        j["agrees"] = r.agrees();
      } else {
        auto s = sk::to_vexp_star(p, beta);
        auto r = sk::vexp_star_weighted(s);
        j["value"] = sk::to_string(r.value);
        j["set"] = r.vertex_set();
        if (s.size() <= 20) j["bruteforce_agrees"] = sk::vexp_bruteforce(s.graph()).value == r.value;
      }
    } else if (self->parsed()) {
      sk::selftest::Mutation m;
      m.tau = mutate == "tau";
      m.fptas_grid = mutate == "fptas-grid";
      j["command"] = "selftest";
      json res = json::object();
      bool all = true;
      for (const auto& suite : sk::selftest::suites()) {
        bool ok = suite.run(m);
        all = all && ok;
        res[suite.name] = ok;
        if (!out.json) std::cout << (ok ? "PASS " : "FAIL ") << suite.name << "\n";
      }
      if (!out.json) return all ? 0 : 1;
      j["suites"] = res;
      j["ok"] = all;
      rc = all ? 0 : 1;
    }
    emit(j, out);
    return rc;
  } catch (const sk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == sk::ErrorKind::non_convergence ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
