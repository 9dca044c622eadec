#pragma once

// Immutable simple graph stored as one adjacency bit-row per vertex.

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rgis/error.hpp"
#include "rgis/random.hpp"
#include "rgis/vertex_set.hpp"

namespace rgis {

class Graph;

/// Accumulates edges, then freezes into a Graph. Rejects self-loops.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n) : n_(n), stride_(words_for(n)), rows_(n * stride_, 0) {}

  std::size_t size() const noexcept { return n_; }

  /// Returns false if the edge was already present.
  bool add_edge(Vertex u, Vertex v) {
    if (u >= n_ || v >= n_) throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
    Word& a = rows_[u * stride_ + v / kWordBits];
    const Word ma = Word{1} << (v % kWordBits);
    if (a & ma) return false;
    a |= ma;
    rows_[v * stride_ + u / kWordBits] |= Word{1} << (u % kWordBits);
    ++edges_;
    return true;
  }

  bool has_edge(Vertex u, Vertex v) const {
    return (rows_[u * stride_ + v / kWordBits] >> (v % kWordBits)) & 1u;
  }

  Graph build() &&;

 private:
  friend class Graph;
  std::size_t n_;
  std::size_t stride_;
  std::vector<Word> rows_;
  std::size_t edges_ = 0;
};

class Graph {
 public:
  Graph() = default;

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_; }
  std::size_t words_per_row() const noexcept { return stride_; }

  std::span<const Word> row(Vertex v) const {
    return {rows_.data() + static_cast<std::size_t>(v) * stride_, stride_};
  }

  bool adjacent(Vertex u, Vertex v) const { return bits::test(row(u), v); }

  std::size_t degree(Vertex v) const { return degrees_[v]; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }

  std::size_t non_edge_count() const noexcept { return n_ * (n_ - (n_ ? 1 : 0)) / 2 - edges_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  friend class GraphBuilder;
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::size_t edges_ = 0;
  std::vector<Word> rows_;
  std::vector<std::uint32_t> degrees_;
};

inline Graph GraphBuilder::build() && {
  Graph g;
  g.n_ = n_;
  g.stride_ = stride_;
  g.edges_ = edges_;
  g.rows_ = std::move(rows_);
  g.degrees_.resize(n_);
  for (std::size_t v = 0; v < n_; ++v)
    g.degrees_[v] = static_cast<std::uint32_t>(
        bits::popcount(std::span<const Word>(g.rows_.data() + v * stride_, stride_)));
  return g;
}

// ---------------------------------------------------------------------------
// Constructors

/// G(n, p): each pair u < v is an edge independently with probability p.
/// Row u draws its pairs (u, u+1), (u, u+2), ... from
/// Stream(derive_seed(derive_seed(seed, streams::kHost), u)), so host and
/// process streams built from the same seed never coincide.
inline Graph gnp_sample(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("gnp_sample: p must lie in [0, 1]");
  GraphBuilder b(n);
  const std::uint64_t host_key = derive_seed(seed, streams::kHost);
  for (std::size_t u = 0; u < n; ++u) {
    Stream rng(derive_seed(host_key, u));
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) b.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return std::move(b).build();
}

/// K[A, B] with A = 0..a-1 and B = a..a+b-1.
inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  GraphBuilder g(a + b);
  for (std::size_t u = 0; u < a; ++u)
    for (std::size_t v = a; v < a + b; ++v) g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return std::move(g).build();
}

inline Graph complete_graph(std::size_t n) {
  GraphBuilder g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return std::move(g).build();
}

inline Graph empty_graph(std::size_t n) { return GraphBuilder(n).build(); }

/// Star K_{1,n-1} centred at vertex 0.
inline Graph star_graph(std::size_t n) {
  GraphBuilder g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(0, static_cast<Vertex>(v));
  return std::move(g).build();
}

inline Graph path_graph(std::size_t n) {
  GraphBuilder g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(static_cast<Vertex>(v - 1), static_cast<Vertex>(v));
  return std::move(g).build();
}

inline Graph cycle_graph(std::size_t n) {
  GraphBuilder g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(static_cast<Vertex>(v - 1), static_cast<Vertex>(v));
  if (n >= 3) g.add_edge(static_cast<Vertex>(n - 1), 0);
  return std::move(g).build();
}

inline Graph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
  GraphBuilder g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return std::move(g).build();
}

// ---------------------------------------------------------------------------
// Queries

inline void check_membership(const Graph& g, const VertexSet& s) {
  if (s.universe() != g.size()) throw DomainError("vertex set universe does not match graph order");
}

/// V(g) minus the union of closed neighbourhoods of the members of s.
inline VertexSet common_non_neighbourhood(const Graph& g, const VertexSet& s) {
  check_membership(g, s);
  VertexSet out = VertexSet::full(g.size());
  std::vector<Word> blocked(s.words().begin(), s.words().end());
  s.for_each([&](Vertex v) {
    auto r = g.row(v);
    for (std::size_t i = 0; i < blocked.size(); ++i) blocked[i] |= r[i];
  });
  out.subtract(blocked);
  return out;
}

inline std::size_t codegree(const Graph& g, Vertex u, Vertex v) {
  if (u >= g.size() || v >= g.size()) throw DomainError("codegree: vertex out of range");
  if (u == v) throw DomainError("codegree: u and v must be distinct");
  return bits::popcount_and(g.row(u), g.row(v));
}

inline bool is_independent(const Graph& g, const VertexSet& s) {
  check_membership(g, s);
  bool ok = true;
  s.for_each([&](Vertex v) {
    if (ok && bits::popcount_and(g.row(v), s.words()) != 0) ok = false;
  });
  return ok;
}

/// Unordered non-adjacent pairs {u, v}, u < v, in lexicographic order.
class NonEdgeRange {
 public:
  class iterator {
   public:
    using value_type = std::pair<Vertex, Vertex>;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;
    using pointer = void;
    using reference = value_type;

    iterator() = default;
    iterator(const Graph* g, Vertex u, Vertex v) : g_(g), u_(u), v_(v) { settle(); }

    value_type operator*() const { return {u_, v_}; }
    iterator& operator++() {
      ++v_;
      settle();
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++*this;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.u_ == b.u_ && a.v_ == b.v_; }

   private:
    void settle() {
      const auto n = static_cast<Vertex>(g_->size());
      while (u_ < n) {
        while (v_ < n && g_->adjacent(u_, v_)) ++v_;
        if (v_ < n) return;
        ++u_;
        v_ = u_ + 1;
      }
      u_ = n;
      v_ = n;
    }

    const Graph* g_ = nullptr;
    Vertex u_ = 0;
    Vertex v_ = 0;
  };

  explicit NonEdgeRange(const Graph& g) : g_(&g) {}
  iterator begin() const { return {g_, 0, 1}; }
  iterator end() const {
    const auto n = static_cast<Vertex>(g_->size());
    return {g_, n, n};
  }

 private:
  const Graph* g_;
};

inline NonEdgeRange non_edges(const Graph& g) { return NonEdgeRange(g); }

}  // namespace rgis
