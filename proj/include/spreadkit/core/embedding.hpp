#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/rational.hpp"

namespace spreadkit {

/// Placement of n vertices in R^k, stored row-major (row v = coordinates of vertex v).
template <class Scalar>
class Embedding {
 public:
  Embedding() = default;
  Embedding(std::size_t n, std::size_t k) : n_(n), k_(k), data_(n * k, Scalar(0)) {}
  Embedding(std::size_t n, std::size_t k, std::vector<Scalar> data) : n_(n), k_(k), data_(std::move(data)) {
    if (data_.size() != n_ * k_) fail(ErrorKind::invalid_input, "embedding data does not match n*k");
  }

  /// One-dimensional valuation.
  static Embedding line(std::vector<Scalar> x) {
    const std::size_t n = x.size();
    return Embedding(n, 1, std::move(x));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return k_; }

  Scalar& operator()(std::size_t v, std::size_t c) { return data_[v * k_ + c]; }
  const Scalar& operator()(std::size_t v, std::size_t c) const { return data_[v * k_ + c]; }
  /// Shorthand for 1-D valuations.
  const Scalar& operator[](std::size_t v) const { return data_[v * k_]; }
  Scalar& operator[](std::size_t v) { return data_[v * k_]; }

  const std::vector<Scalar>& data() const noexcept { return data_; }

  Scalar squared_distance(std::size_t u, std::size_t v) const {
    Scalar s = 0;
    for (std::size_t c = 0; c < k_; ++c) {
      Scalar d = (*this)(u, c) - (*this)(v, c);
      s += d * d;
    }
    return s;
  }

  bool finite() const {
    if constexpr (is_exact_v<Scalar>) {
      return true;
    } else {
      for (const auto& x : data_)
        if (!std::isfinite(x)) return false;
      return true;
    }
  }

  template <class To>
  Embedding<To> converted() const {
    std::vector<To> out;
    out.reserve(data_.size());
    for (const auto& x : data_) out.push_back(scalar_cast<To>(x));
    return Embedding<To>(n_, k_, std::move(out));
  }

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<Scalar> data_;
};

template <class Scalar>
using Embedding1D = Embedding<Scalar>;

namespace status {
struct Exact {};
template <class Scalar>
struct Interval {
  Scalar lo;
  Scalar hi;
};
struct Approx {
  double eps;
};
}  // namespace status

/// Value, witness, and certification status emitted by every solver.
template <class Scalar>
struct SolveReport {
  using Status = std::variant<status::Exact, status::Interval<Scalar>, status::Approx>;
  using Witness = std::variant<std::monostate, Embedding<Scalar>, VertexSet>;

  Scalar value{};
  Witness witness;
  Status status = status::Exact{};
  std::map<std::string, std::string> diagnostics;

  bool is_exact() const { return std::holds_alternative<status::Exact>(status); }

  const Embedding<Scalar>& embedding() const { return std::get<Embedding<Scalar>>(witness); }
  const VertexSet& vertex_set() const { return std::get<VertexSet>(witness); }

  std::string status_name() const {
    if (std::holds_alternative<status::Exact>(status)) return "exact";
    if (std::holds_alternative<status::Approx>(status)) return "approx";
    return "interval";
  }
};

template <class Scalar>
SolveReport<Scalar> make_interval_report(Scalar lo, Scalar hi) {
  if (hi < lo) fail(ErrorKind::precondition, "interval requires lo <= hi");
  SolveReport<Scalar> r;
  r.value = hi;
  r.status = status::Interval<Scalar>{lo, hi};
  return r;
}

inline status::Approx make_approx(double eps) {
  if (!(eps > 0)) fail(ErrorKind::precondition, "approximation status requires eps > 0");
  return status::Approx{eps};
}

}  // namespace spreadkit
