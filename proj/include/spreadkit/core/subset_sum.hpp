#pragma once

#include <cstdint>
#include <vector>

#include "spreadkit/core/error.hpp"

namespace spreadkit {

/// Exact subset-sum table over non-negative integer weights, one bitset layer per item so that
/// any reachable sum can be traced back to a concrete subset.
class SubsetSums {
 public:
  static constexpr std::uint64_t kMaxBits = std::uint64_t(1) << 31;

  explicit SubsetSums(std::vector<std::int64_t> weights) : w_(std::move(weights)) {
    total_ = 0;
    for (auto x : w_) {
      require(x >= 0, "subset-sum weights must be non-negative");
      total_ += x;
    }
    words_ = static_cast<std::size_t>(total_ / 64 + 1);
    if (static_cast<std::uint64_t>(words_) * 64 * (w_.size() + 1) > kMaxBits)
      fail(ErrorKind::budget_exceeded, "subset-sum table too large");
    layers_.assign(w_.size() + 1, std::vector<std::uint64_t>(words_, 0));
    layers_[0][0] = 1;
    for (std::size_t j = 0; j < w_.size(); ++j) {
      const auto& prev = layers_[j];
      auto& next = layers_[j + 1];
      next = prev;
      shift_or(prev, next, w_[j]);
    }
  }

  std::int64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return w_.size(); }

  bool reachable(std::int64_t s) const {
    if (s < 0 || s > total_) return false;
    return layers_.back()[s / 64] >> (s % 64) & 1;
  }

  /// Every reachable sum in increasing order.
  std::vector<std::int64_t> sums() const {
    std::vector<std::int64_t> out;
    for (std::int64_t s = 0; s <= total_; ++s)
      if (reachable(s)) out.push_back(s);
    return out;
  }

  /// chosen[j] is true when item j is in the subset; lexicographically the last item is decided first.
  std::vector<bool> subset_for(std::int64_t s) const {
    require(reachable(s), "sum is not reachable");
    std::vector<bool> chosen(w_.size(), false);
    for (std::size_t j = w_.size(); j-- > 0;) {
      if (!bit(layers_[j], s)) {
        chosen[j] = true;
        s -= w_[j];
      }
    }
    return chosen;
  }

 private:
  static bool bit(const std::vector<std::uint64_t>& b, std::int64_t s) {
    return s >= 0 && (b[s / 64] >> (s % 64) & 1);
  }

  void shift_or(const std::vector<std::uint64_t>& src, std::vector<std::uint64_t>& dst, std::int64_t k) const {
    if (k == 0) return;
    const std::size_t ws = static_cast<std::size_t>(k / 64);
    const unsigned bs = static_cast<unsigned>(k % 64);
    for (std::size_t i = words_; i-- > ws;) {
      std::uint64_t v = src[i - ws] << bs;
      if (bs && i - ws >= 1) v |= src[i - ws - 1] >> (64 - bs);
      dst[i] |= v;
    }
    // clear bits past total
    const unsigned tail = static_cast<unsigned>(total_ % 64 + 1);
    if (tail < 64) dst.back() &= (std::uint64_t(1) << tail) - 1;
  }

  std::vector<std::int64_t> w_;
  std::int64_t total_ = 0;
  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> layers_;
};

}  // namespace spreadkit
