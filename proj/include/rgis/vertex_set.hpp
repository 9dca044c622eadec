#pragma once

// Dense bit-vector over vertex ids 0..n-1 with a cached cardinality.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "rgis/error.hpp"

namespace rgis {

using Vertex = std::uint32_t;
using Word = std::uint64_t;

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

namespace bits {

inline std::size_t popcount(std::span<const Word> a) {
  std::size_t c = 0;
  for (Word w : a) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

inline std::size_t popcount_and3(std::span<const Word> a, std::span<const Word> b,
                                 std::span<const Word> c) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    r += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
  return r;
}

inline bool test(std::span<const Word> a, std::size_t i) {
  return (a[i / kWordBits] >> (i % kWordBits)) & 1u;
}

/// Calls f(index) for every set bit of a & b, in increasing order.
template <typename F>
void for_each_and(std::span<const Word> a, std::span<const Word> b, F&& f) {
  for (std::size_t wi = 0; wi < a.size(); ++wi) {
    Word w = a[wi] & b[wi];
    while (w) {
      const int bit = std::countr_zero(w);
      f(static_cast<Vertex>(wi * kWordBits + static_cast<std::size_t>(bit)));
      w &= w - 1;
    }
  }
}

template <typename F>
void for_each(std::span<const Word> a, F&& f) {
  for (std::size_t wi = 0; wi < a.size(); ++wi) {
    Word w = a[wi];
    while (w) {
      const int bit = std::countr_zero(w);
      f(static_cast<Vertex>(wi * kWordBits + static_cast<std::size_t>(bit)));
      w &= w - 1;
    }
  }
}

}  // namespace bits

class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : n_(n), words_(words_for(n), 0) {}

  VertexSet(std::size_t n, std::initializer_list<Vertex> members) : VertexSet(n) {
    for (Vertex v : members) insert(v);
  }

  template <typename Range>
  static VertexSet from_range(std::size_t n, const Range& members) {
    VertexSet s(n);
    for (auto v : members) s.insert(static_cast<Vertex>(v));
    return s;
  }

  static VertexSet full(std::size_t n) {
    VertexSet s(n);
    std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
    s.trim();
    s.count_ = n;
    return s;
  }

  std::size_t universe() const noexcept { return n_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(Vertex v) const {
    check(v);
    return bits::test(words_, v);
  }

  /// Returns true if v was newly inserted.
  bool insert(Vertex v) {
    check(v);
    Word& w = words_[v / kWordBits];
    const Word mask = Word{1} << (v % kWordBits);
    if (w & mask) return false;
    w |= mask;
    ++count_;
    return true;
  }

  bool erase(Vertex v) {
    check(v);
    Word& w = words_[v / kWordBits];
    const Word mask = Word{1} << (v % kWordBits);
    if (!(w & mask)) return false;
    w &= ~mask;
    --count_;
    return true;
  }

  void clear() {
    std::fill(words_.begin(), words_.end(), 0);
    count_ = 0;
  }

  void intersect_with(std::span<const Word> other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other[i];
    recount();
  }

  void subtract(std::span<const Word> other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other[i];
    recount();
  }

  void unite_with(std::span<const Word> other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other[i];
    recount();
  }

  void intersect_with(const VertexSet& o) { intersect_with(o.words()); }
  void subtract(const VertexSet& o) { subtract(o.words()); }
  void unite_with(const VertexSet& o) { unite_with(o.words()); }

  bool is_subset_of(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool intersects(const VertexSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  std::span<const Word> words() const noexcept { return words_; }

  template <typename F>
  void for_each(F&& f) const {
    bits::for_each(words_, std::forward<F>(f));
  }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(count_);
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  void check(Vertex v) const {
    if (v >= n_) throw DomainError("vertex id " + std::to_string(v) + " out of range");
  }

  void trim() {
    if (n_ % kWordBits != 0 && !words_.empty())
      words_.back() &= (Word{1} << (n_ % kWordBits)) - 1;
  }

  void recount() { count_ = bits::popcount(words_); }

  std::size_t n_ = 0;
  std::size_t count_ = 0;
  std::vector<Word> words_;
};

}  // namespace rgis
