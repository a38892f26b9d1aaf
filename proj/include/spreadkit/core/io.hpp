#pragma once

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/rational.hpp"

namespace spreadkit {

struct ParseOptions {
  bool allow_zero_mass = false;
};

/// Parses the line-oriented graph format:
///
///   # comment
///   vertices <n>
///   pi <v> <p/q | decimal>
///   edge <u> <v>
///
/// `vertices` must come first; the remaining directives may appear in any order.
/// When every pi entry is written as an integer or fraction the sum must be exactly 1.
/// If any entry is a decimal the sum may be off by 1e-12 and pi is renormalized.
inline WeightedGraph<Rational> parse_graph(std::string_view text, ParseOptions opts = {}) {
  auto error = [](std::size_t line, const std::string& msg) -> Error {
    return Error(ErrorKind::invalid_input, "line " + std::to_string(line) + ": " + msg);
  };
  auto parse_index = [&](const std::string& tok, std::size_t line) -> long {
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw error(line, "expected a vertex index, got '" + tok + "'");
    }
    if (used != tok.size() || v < 0) throw error(line, "expected a vertex index, got '" + tok + "'");
    return v;
  };

  std::optional<std::size_t> n;
  std::vector<std::optional<Rational>> pi;
  std::vector<Edge> edges;
  bool any_decimal = false;
  std::size_t last_line = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    last_line = lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "vertices") {
      if (n) throw error(lineno, "duplicate 'vertices' directive");
      if (tok.size() != 2) throw error(lineno, "usage: vertices <n>");
      long count = parse_index(tok[1], lineno);
      if (count < 1) throw error(lineno, "vertex count must be positive");
      n = static_cast<std::size_t>(count);
      pi.assign(*n, std::nullopt);
    } else if (kw == "pi" || kw == "edge") {
      if (!n) throw error(lineno, "'vertices' must precede '" + kw + "'");
      if (tok.size() != 3) throw error(lineno, kw == "pi" ? "usage: pi <v> <mass>" : "usage: edge <u> <v>");
      long a = parse_index(tok[1], lineno);
      if (static_cast<std::size_t>(a) >= *n) throw error(lineno, "vertex " + tok[1] + " out of range");
      if (kw == "pi") {
        auto p = parse_rational(tok[2]);
        if (!p) throw error(lineno, "malformed mass '" + tok[2] + "'");
        if (pi[a]) throw error(lineno, "duplicate pi for vertex " + tok[1]);
        if (*p < 0 || (*p == 0 && !opts.allow_zero_mass)) throw error(lineno, "π_v must be positive");
        if (tok[2].find('/') == std::string::npos && tok[2].find_first_of(".eE") != std::string::npos)
          any_decimal = true;
        pi[a] = *p;
      } else {
        long b = parse_index(tok[2], lineno);
        if (static_cast<std::size_t>(b) >= *n) throw error(lineno, "vertex " + tok[2] + " out of range");
        if (a == b) throw error(lineno, "self-loop at vertex " + tok[1]);
        Edge e{static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b))};
        for (const auto& f : edges)
          if (f == e) throw error(lineno, "duplicate edge " + tok[1] + " " + tok[2]);
        edges.push_back(e);
      }
    } else {
      throw error(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!n) throw error(last_line, "missing 'vertices' directive");
  std::vector<Rational> masses;
  Rational total = 0;
  for (std::size_t v = 0; v < *n; ++v) {
    if (!pi[v]) throw error(last_line, "no pi given for vertex " + std::to_string(v));
    masses.push_back(*pi[v]);
    total += *pi[v];
  }
  if (total != 1) {
    if (!any_decimal || std::abs(to_double(total - 1)) > 1e-12)
      throw error(last_line, "π must sum to 1 (sum is " + to_string(total) + ")");
    for (auto& m : masses) m /= total;
  }
  try {
    return WeightedGraph<Rational>(*n, std::move(edges), std::move(masses), GraphOptions{opts.allow_zero_mass});
  } catch (const Error& e) {
    throw error(last_line, e.what());
  }
}

template <class Scalar>
std::string format_graph(const WeightedGraph<Scalar>& g) {
  std::ostringstream out;
  out << "vertices " << g.size() << "\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    out << "pi " << v << " ";
    if constexpr (is_exact_v<Scalar>) {
      out << to_string(g.pi(v));
    } else {
      out.precision(17);
      out << g.pi(v);
    }
    out << "\n";
  }
  for (const auto& e : g.edges()) out << "edge " << e.u << " " << e.v << "\n";
  return out.str();
}

/// {"n": int, "k": int, "vectors": [[...], ...]} with row v = coordinates of vertex v.
inline nlohmann::json embedding_to_json(const Embedding<double>& y) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t v = 0; v < y.size(); ++v) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < y.dim(); ++c) row.push_back(y(v, c));
    rows.push_back(std::move(row));
  }
  return {{"n", y.size()}, {"k", y.dim()}, {"vectors", std::move(rows)}};
}

inline Embedding<double> embedding_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    const auto& rows = j.at("vectors");
    if (!rows.is_array() || rows.size() != n) fail(ErrorKind::invalid_input, "'vectors' must have n rows");
    Embedding<double> y(n, k);
    for (std::size_t v = 0; v < n; ++v) {
      if (!rows[v].is_array() || rows[v].size() != k) fail(ErrorKind::invalid_input, "every row must have k entries");
      for (std::size_t c = 0; c < k; ++c) {
        double x = rows[v][c].get<double>();
        if (!std::isfinite(x)) fail(ErrorKind::invalid_input, "embedding entries must be finite");
        y(v, c) = x;
      }
    }
    return y;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("malformed embedding JSON: ") + e.what());
  }
}

}  // namespace spreadkit
