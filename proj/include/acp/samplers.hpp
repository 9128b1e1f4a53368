#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "acp/rng.hpp"

namespace acp {

/// Dynamic set of small integer ids with O(1) insert, erase and uniform draw.
class IndexedSet {
 public:
  static constexpr std::uint32_t npos = 0xffffffffu;

  void reserve_ids(std::size_t n) {
    if (pos_.size() < n) pos_.resize(n, npos);
  }
  bool contains(std::uint32_t id) const { return id < pos_.size() && pos_[id] != npos; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  void insert(std::uint32_t id) {
    reserve_ids(static_cast<std::size_t>(id) + 1);
    if (pos_[id] != npos) return;
    pos_[id] = static_cast<std::uint32_t>(items_.size());
    items_.push_back(id);
  }

  void erase(std::uint32_t id) {
    if (!contains(id)) return;
    const std::uint32_t at = pos_[id];
    const std::uint32_t last = items_.back();
    items_[at] = last;
    pos_[last] = at;
    items_.pop_back();
    pos_[id] = npos;
  }

  void clear() {
    for (auto id : items_) pos_[id] = npos;
    items_.clear();
  }

  std::uint32_t sample(Rng& rng) const {
    assert(!items_.empty());
    return items_[uniform_index(rng, items_.size())];
  }

  const std::vector<std::uint32_t>& items() const { return items_; }

 private:
  std::vector<std::uint32_t> items_;
  std::vector<std::uint32_t> pos_;
};

/// Fenwick tree over non-negative integer weights supporting weighted draws.
/// Grows on demand; integer weights keep totals exact.
class FenwickSampler {
 public:
  explicit FenwickSampler(std::size_t n = 0) { grow(n); }

  std::size_t size() const { return weights_.size(); }

  void grow(std::size_t n) {
    if (n <= weights_.size()) return;
    weights_.resize(n, 0);
    if (n > capacity_) {
      std::size_t cap = capacity_ == 0 ? 16 : capacity_;
      while (cap < n) cap *= 2;
      capacity_ = cap;
      rebuild();
    }
  }

  std::int64_t weight(std::size_t i) const { return weights_[i]; }
  std::int64_t total() const { return total_; }

  void set(std::size_t i, std::int64_t w) { add(i, w - weights_[i]); }

  void add(std::size_t i, std::int64_t delta) {
    if (delta == 0) return;
    weights_[i] += delta;
    assert(weights_[i] >= 0);
    total_ += delta;
    for (std::size_t k = i + 1; k <= capacity_; k += k & (~k + 1)) tree_[k] += delta;
  }

  /// Index drawn with probability weight(i) / total(). Requires total() > 0.
  std::size_t sample(Rng& rng) const {
    assert(total_ > 0);
    auto target = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(total_)));
    return find(target);
  }

  /// Smallest i with prefix_sum(i) > target.
  std::size_t find(std::int64_t target) const {
    std::size_t idx = 0;
    for (std::size_t step = top_bit(); step != 0; step >>= 1) {
      const std::size_t next = idx + step;
      if (next <= capacity_ && tree_[next] <= target) {
        idx = next;
        target -= tree_[next];
      }
    }
    return idx;
  }

  void clear() {
    std::fill(weights_.begin(), weights_.end(), 0);
    std::fill(tree_.begin(), tree_.end(), 0);
    total_ = 0;
  }

 private:
  std::size_t top_bit() const {
    std::size_t b = 1;
    while (b * 2 <= capacity_) b *= 2;
    return capacity_ == 0 ? 0 : b;
  }

  void rebuild() {
    tree_.assign(capacity_ + 1, 0);
    for (std::size_t i = 0; i < weights_.size(); ++i) tree_[i + 1] = weights_[i];
    for (std::size_t k = 1; k <= capacity_; ++k) {
      const std::size_t parent = k + (k & (~k + 1));
      if (parent <= capacity_) tree_[parent] += tree_[k];
    }
  }

  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> tree_;
  std::size_t capacity_ = 0;
  std::int64_t total_ = 0;
};

}  // namespace acp
