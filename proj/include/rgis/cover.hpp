#pragma once

// Covers of the non-edges of a host graph by independent sets drawn from the
// greedy process:
//
//  * flat covers: t independent copies of I_k;
//  * partition covers: t collections, each built from s copies J_1..J_s of
//    I_k disjointified as I_j = J_j \ (J_1 u ... u J_{j-1}).
//
// Copy c of a flat cover is drawn from Stream(derive_seed(seed, c)); copy
// (i, j) of a partition cover from Stream(derive_seed(seed, i * s + j)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rgis/analytics.hpp"
#include "rgis/error.hpp"
#include "rgis/graph.hpp"
#include "rgis/parallel.hpp"
#include "rgis/process.hpp"

namespace rgis {

struct Cover {
  std::size_t host_n = 0;
  std::vector<VertexSet> sets;
};

struct PartitionCover {
  std::size_t host_n = 0;
  std::size_t copies_per_partition = 0;
  std::vector<std::vector<VertexSet>> partitions;
};

struct BoundComparison {
  std::uint64_t t_formula = 0;
  double mrss_lower = 0.0;
  std::optional<std::uint64_t> adaptive_count;
  std::optional<double> multiplier;  // adaptive t / (n log n / k) for partition covers
};

struct CoverReport {
  std::size_t total_sets = 0;
  std::size_t singleton_sets = 0;
  std::size_t non_edges = 0;
  std::size_t covered = 0;
  std::vector<std::pair<Vertex, Vertex>> uncovered;
  double covered_fraction = 1.0;
  std::optional<BoundComparison> bound_comparison;
};

/// Bit-matrix of covered pairs with a running count of uncovered non-edges.
class CoverageTracker {
 public:
  explicit CoverageTracker(const Graph& host)
      : host_(&host), stride_(host.words_per_row()), rows_(host.size() * stride_, 0), remaining_(host.non_edge_count()) {}

  /// Marks every pair inside `members`; returns the number of newly covered non-edges.
  std::size_t add(std::span<const Vertex> members) {
    std::size_t fresh = 0;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Vertex u = std::min(members[a], members[b]);
        const Vertex v = std::max(members[a], members[b]);
        if (host_->adjacent(u, v)) continue;
        Word& w = rows_[u * stride_ + v / kWordBits];
        const Word m = Word{1} << (v % kWordBits);
        if (!(w & m)) {
          w |= m;
          ++fresh;
        }
      }
    remaining_ -= fresh;
    return fresh;
  }

  std::size_t remaining() const noexcept { return remaining_; }
  bool complete() const noexcept { return remaining_ == 0; }

  bool covered(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    return (rows_[u * stride_ + v / kWordBits] >> (v % kWordBits)) & 1u;
  }

 private:
  const Graph* host_;
  std::size_t stride_;
  std::vector<Word> rows_;
  std::size_t remaining_;
};

inline Cover build_theta1_cover(const Graph& host, const ParamSet& ps, std::size_t t, std::uint64_t seed,
                                unsigned threads = 1) {
  if (t < 1) throw DomainError("build_theta1_cover: t must be at least 1");
  Cover c;
  c.host_n = host.size();
  c.sets.resize(t);
  constexpr std::size_t kChunk = 64;
  parallel_chunks(t, kChunk, threads, [&](std::size_t, std::size_t b, std::size_t e) {
    ProcessState state(host, false);
    for (std::size_t j = b; j < e; ++j) {
      Stream rng(derive_seed(seed, j));
      c.sets[j] = VertexSet::from_range(host.size(), sample_greedy_set(state, ps.k, rng));
    }
  });
  return c;
}

struct AdaptiveCover {
  Cover cover;
  std::size_t count = 0;  // copies needed; 0 when there is nothing to cover
  bool complete = false;
  std::size_t uncovered_remaining = 0;
};

/// Adds copies of I_k until every non-edge is covered or max_t copies were used.
inline AdaptiveCover build_theta1_adaptive(const Graph& host, const ParamSet& ps, std::uint64_t seed,
                                           std::size_t max_t) {
  if (max_t < 1) throw DomainError("build_theta1_adaptive: max_t must be at least 1");
  AdaptiveCover out;
  out.cover.host_n = host.size();
  CoverageTracker tracker(host);
  ProcessState state(host, false);
  while (!tracker.complete() && out.count < max_t) {
    Stream rng(derive_seed(seed, out.count));
    const auto set = sample_greedy_set(state, ps.k, rng);
    tracker.add(set);
    out.cover.sets.push_back(VertexSet::from_range(host.size(), set));
    ++out.count;
  }
  out.complete = tracker.complete();
  out.uncovered_remaining = tracker.remaining();
  return out;
}

namespace detail {

inline std::vector<VertexSet> build_partition(const Graph& host, const ParamSet& ps, std::size_t s, std::size_t i,
                                              std::uint64_t seed, ProcessState& state) {
  std::vector<VertexSet> cells;
  VertexSet used(host.size());
  for (std::size_t j = 0; j < s; ++j) {
    Stream rng(derive_seed(seed, i * s + j));
    VertexSet cell = VertexSet::from_range(host.size(), sample_greedy_set(state, ps.k, rng));
    cell.subtract(used);
    used.unite_with(cell);
    if (!cell.empty()) cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace detail

inline PartitionCover build_pdim_cover(const Graph& host, const ParamSet& ps, std::size_t s, std::size_t t,
                                       std::uint64_t seed, unsigned threads = 1) {
  if (s < 1 || t < 1) throw DomainError("build_pdim_cover: s and t must be at least 1");
  PartitionCover pc;
  pc.host_n = host.size();
  pc.copies_per_partition = s;
  pc.partitions.resize(t);
  parallel_chunks(t, 4, threads, [&](std::size_t, std::size_t b, std::size_t e) {
    ProcessState state(host, false);
    for (std::size_t i = b; i < e; ++i) pc.partitions[i] = detail::build_partition(host, ps, s, i, seed, state);
  });
  return pc;
}

struct AdaptivePartitionCover {
  PartitionCover cover;
  std::size_t count = 0;
  bool complete = false;
  std::size_t uncovered_remaining = 0;
  double multiplier = 0.0;  // count / (n log n / k): the empirical C_eps
};

inline AdaptivePartitionCover build_pdim_adaptive(const Graph& host, const ParamSet& ps, std::size_t s,
                                                  std::uint64_t seed, std::size_t max_t) {
  if (s < 1 || max_t < 1) throw DomainError("build_pdim_adaptive: s and max_t must be at least 1");
  AdaptivePartitionCover out;
  out.cover.host_n = host.size();
  out.cover.copies_per_partition = s;
  CoverageTracker tracker(host);
  ProcessState state(host, false);
  while (!tracker.complete() && out.count < max_t) {
    auto cells = detail::build_partition(host, ps, s, out.count, seed, state);
    for (const auto& cell : cells) tracker.add(cell.members());
    out.cover.partitions.push_back(std::move(cells));
    ++out.count;
  }
  out.complete = tracker.complete();
  out.uncovered_remaining = tracker.remaining();
  const double n = static_cast<double>(host.size());
  const double scale = n * std::log(n) / static_cast<double>(ps.k);
  out.multiplier = scale > 0.0 ? static_cast<double>(out.count) / scale : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Verification

namespace detail {

inline void check_set(const Graph& host, const VertexSet& set, const std::string& where) {
  if (set.universe() != host.size()) throw StructuralError(where + ": vertex universe does not match host");
  set.for_each([&](Vertex v) {
    if (bits::popcount_and(host.row(v), set.words()) != 0) {
      Vertex w = 0;
      bits::for_each_and(host.row(v), set.words(), [&](Vertex x) { w = x; });
      throw StructuralError(where + " is not independent: contains edge " + std::to_string(std::min(v, w)) + " " +
                            std::to_string(std::max(v, w)));
    }
  });
}

inline CoverReport tally(const Graph& host, std::span<const VertexSet* const> sets) {
  CoverReport rep;
  rep.total_sets = sets.size();
  const std::size_t stride = host.words_per_row();
  std::vector<Word> cov(host.size() * stride, 0);
  for (const VertexSet* s : sets) {
    if (s->size() == 1) ++rep.singleton_sets;
    s->for_each([&](Vertex v) {
      Word* row = cov.data() + static_cast<std::size_t>(v) * stride;
      auto w = s->words();
      for (std::size_t i = 0; i < stride; ++i) row[i] |= w[i];
    });
  }
  for (auto [u, v] : non_edges(host)) {
    ++rep.non_edges;
    if ((cov[u * stride + v / kWordBits] >> (v % kWordBits)) & 1u)
      ++rep.covered;
    else
      rep.uncovered.emplace_back(u, v);
  }
  rep.covered_fraction =
      rep.non_edges == 0 ? 1.0 : static_cast<double>(rep.covered) / static_cast<double>(rep.non_edges);
  return rep;
}

}  // namespace detail

/// Checks independence of every set and coverage of every non-edge.
/// Throws StructuralError naming the first offending set.
inline CoverReport verify_cover(const Graph& host, const Cover& cover) {
  std::vector<const VertexSet*> ptrs;
  for (std::size_t i = 0; i < cover.sets.size(); ++i) {
    detail::check_set(host, cover.sets[i], "set " + std::to_string(i));
    ptrs.push_back(&cover.sets[i]);
  }
  return detail::tally(host, ptrs);
}

/// As above, and additionally checks that the cells of each partition are pairwise disjoint.
inline CoverReport verify_cover(const Graph& host, const PartitionCover& cover) {
  std::vector<const VertexSet*> ptrs;
  for (std::size_t i = 0; i < cover.partitions.size(); ++i) {
    VertexSet seen(host.size());
    for (std::size_t j = 0; j < cover.partitions[i].size(); ++j) {
      const auto& cell = cover.partitions[i][j];
      const std::string where = "partition " + std::to_string(i) + " cell " + std::to_string(j);
      detail::check_set(host, cell, where);
      if (cell.intersects(seen)) throw StructuralError(where + " overlaps an earlier cell of the same partition");
      seen.unite_with(cell);
      ptrs.push_back(&cell);
    }
  }
  return detail::tally(host, ptrs);
}

}  // namespace rgis
