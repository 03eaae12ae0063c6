#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netrec/types.hpp"

namespace netrec {

/// Dense set of node ids backed by 64-bit words.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t word_count) : words_(word_count, 0) {}

  std::span<std::uint64_t> words() noexcept { return words_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool contains(NodeId id) const noexcept {
    const std::size_t w = id.index() >> 6;
    return w < words_.size() && ((words_[w] >> (id.index() & 63)) & 1U);
  }

  void insert(NodeId id) {
    const std::size_t w = id.index() >> 6;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (id.index() & 63);
  }

  void erase(NodeId id) noexcept {
    const std::size_t w = id.index() >> 6;
    if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (id.index() & 63));
  }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  /// k-th smallest member (0-based). Requires k < size().
  NodeId nth(std::size_t k) const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto bits = words_[w];
      const auto c = static_cast<std::size_t>(std::popcount(bits));
      if (k >= c) {
        k -= c;
        continue;
      }
      for (; k > 0; --k) bits &= bits - 1;
      return NodeId{static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)))};
    }
    return NodeId{~0U};
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (auto bits = words_[w]; bits != 0; bits &= bits - 1) {
        f(NodeId{static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)))});
      }
    }
  }

  std::vector<NodeId> to_vector() const {
    std::vector<NodeId> out;
    out.reserve(size());
    for_each([&](NodeId id) { out.push_back(id); });
    return out;
  }

 private:
  std::vector<std::uint64_t> words_;
};

/// Square bit matrix whose column capacity grows geometrically with the row count.
class BitMatrix {
 public:
  std::size_t rows() const noexcept { return rows_; }
  std::size_t stride() const noexcept { return stride_; }

  void add_row() {
    if (rows_ + 1 > stride_ * 64) {
      const std::size_t new_stride = std::max<std::size_t>(4, stride_ * 2);
      std::vector<std::uint64_t> data(new_stride * new_stride * 64, 0);
      for (std::size_t r = 0; r < rows_; ++r) {
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_,
                    data.begin() + static_cast<std::ptrdiff_t>(r * new_stride));
      }
      data_ = std::move(data);
      stride_ = new_stride;
    }
    ++rows_;
  }

  std::span<const std::uint64_t> row(std::size_t r) const noexcept { return {data_.data() + r * stride_, stride_}; }

  bool test(std::size_t r, std::size_t c) const noexcept {
    return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1U;
  }
  void set(std::size_t r, std::size_t c) noexcept { data_[r * stride_ + (c >> 6)] |= std::uint64_t{1} << (c & 63); }
  void reset(std::size_t r, std::size_t c) noexcept {
    data_[r * stride_ + (c >> 6)] &= ~(std::uint64_t{1} << (c & 63));
  }

 private:
  std::size_t rows_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

}  // namespace netrec
