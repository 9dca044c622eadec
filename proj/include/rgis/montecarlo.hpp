#pragma once

// Monte Carlo estimates over repeated greedy-process runs on a fixed host:
// vertex and non-edge membership in I_k, the conditional event chain for a
// pair of step indices, and a comparison against uniformly random
// independent k-sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rgis/analytics.hpp"
#include "rgis/error.hpp"
#include "rgis/graph.hpp"
#include "rgis/parallel.hpp"
#include "rgis/process.hpp"
#include "rgis/random.hpp"

namespace rgis {

/// 3-sigma binomial radius for an observed frequency.
inline double binomial_radius(double freq, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return 3.0 * std::sqrt(freq * (1.0 - freq) / static_cast<double>(trials));
}

struct PairEstimate {
  Vertex u = 0;
  Vertex v = 0;
  std::uint64_t count = 0;
  double freq = 0.0;
  double ci_radius = 0.0;
};

struct EstimateReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> vertex_counts;
  std::vector<double> per_vertex_freq;
  std::vector<double> vertex_ci_radius;
  std::uint64_t total_set_size = 0;  // sum over trials of |I_k|
  std::vector<PairEstimate> pairs;
  double predicted_vertex = 0.0;  // k / n
  double predicted_pair = 0.0;    // (k / n)^2
};

struct MembershipOptions {
  std::size_t pair_sample = 200;
  unsigned threads = 1;
};

/// Up to `count` distinct non-edges chosen uniformly from Stream(derive_seed(seed, kPairSample)).
inline std::vector<std::pair<Vertex, Vertex>> sample_non_edges(const Graph& g, std::size_t count, std::uint64_t seed) {
  std::vector<std::pair<Vertex, Vertex>> out;
  const std::size_t total = g.non_edge_count();
  if (count >= total) {
    for (auto e : non_edges(g)) out.push_back(e);
    return out;
  }
  Stream rng(derive_seed(seed, streams::kPairSample));
  std::set<std::pair<Vertex, Vertex>> seen;
  const std::size_t n = g.size();
  while (out.size() < count) {
    auto u = static_cast<Vertex>(rng.below(n));
    auto v = static_cast<Vertex>(rng.below(n - 1));
    if (v >= u) ++v;
    if (u > v) std::swap(u, v);
    if (g.adjacent(u, v) || !seen.insert({u, v}).second) continue;
    out.emplace_back(u, v);
  }
  return out;
}

/// Trial t runs the process for ps.k steps from Stream(derive_seed(seed, t)).
inline EstimateReport estimate_membership(const Graph& host, const ParamSet& ps, std::uint64_t trials,
                                          std::uint64_t seed, MembershipOptions opt = {}) {
  if (trials < 1) throw DomainError("estimate_membership: trials must be at least 1");
  const std::size_t n = host.size();
  EstimateReport rep;
  rep.n = n;
  rep.k = ps.k;
  rep.trials = trials;
  rep.seed = seed;
  const auto pairs = sample_non_edges(host, opt.pair_sample, seed);

  struct Acc {
    std::vector<std::uint64_t> vc;
    std::vector<std::uint64_t> pc;
    std::uint64_t total = 0;
  };
  constexpr std::size_t kChunk = 4096;
  std::vector<Acc> accs(chunk_count(trials, kChunk));
  parallel_chunks(trials, kChunk, opt.threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    Acc& a = accs[c];
    a.vc.assign(n, 0);
    a.pc.assign(pairs.size(), 0);
    ProcessState state(host, false);
    std::vector<char> in(n, 0);
    for (std::size_t t = b; t < e; ++t) {
      Stream rng(derive_seed(seed, t));
      const auto set = sample_greedy_set(state, ps.k, rng);
      a.total += set.size();
      for (Vertex v : set) {
        ++a.vc[v];
        in[v] = 1;
      }
      for (std::size_t q = 0; q < pairs.size(); ++q)
        if (in[pairs[q].first] && in[pairs[q].second]) ++a.pc[q];
      for (Vertex v : set) in[v] = 0;
    }
  });

  rep.vertex_counts.assign(n, 0);
  std::vector<std::uint64_t> pc(pairs.size(), 0);
  for (const auto& a : accs) {
    for (std::size_t v = 0; v < n; ++v) rep.vertex_counts[v] += a.vc[v];
    for (std::size_t q = 0; q < pairs.size(); ++q) pc[q] += a.pc[q];
    rep.total_set_size += a.total;
  }
  const double T = static_cast<double>(trials);
  for (std::size_t v = 0; v < n; ++v) {
    const double f = static_cast<double>(rep.vertex_counts[v]) / T;
    rep.per_vertex_freq.push_back(f);
    rep.vertex_ci_radius.push_back(binomial_radius(f, trials));
  }
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const double f = static_cast<double>(pc[q]) / T;
    rep.pairs.push_back({pairs[q].first, pairs[q].second, pc[q], f, binomial_radius(f, trials)});
  }
  rep.predicted_vertex = n ? static_cast<double>(ps.k) / static_cast<double>(n) : 0.0;
  rep.predicted_pair = rep.predicted_vertex * rep.predicted_vertex;
  return rep;
}

/// Fraction of values within relative tolerance `rel` of `target`.
inline double fraction_within(std::span<const double> values, double target, double rel) {
  if (values.empty()) return 0.0;
  std::size_t ok = 0;
  for (double x : values)
    if (std::abs(x - target) <= rel * target) ++ok;
  return static_cast<double>(ok) / static_cast<double>(values.size());
}

// ---------------------------------------------------------------------------
// Conditional event chain
//
// For steps 1 <= i < j <= k and a non-edge uv:
//   E_t = {u, v in V_t, clean through t}              t < i
//   E_t = {v_i = u, v in V_t, clean through t}        i <= t < j
//   E_j = {v_i = u, v_j = v, clean through j}
// where "clean through t" means no envelope violation at steps 0..t.

enum class ChainCase { both_survive, first_hit, second_survives, second_hit };

inline const char* to_string(ChainCase c) {
  switch (c) {
    case ChainCase::both_survive: return "both_survive";
    case ChainCase::first_hit: return "first_hit";
    case ChainCase::second_survives: return "second_survives";
    case ChainCase::second_hit: return "second_hit";
  }
  return "?";
}

struct ChainCell {
  std::size_t t = 0;
  ChainCase kind = ChainCase::both_survive;
  std::uint64_t conditioned = 0;  // trials in E_{t-1}
  std::uint64_t survived = 0;     // trials in E_t
  std::optional<double> freq;     // empty when conditioned < min_support
  bool insufficient = false;
  double predicted = 0.0;
  double predicted_rel_error = 0.0;  // 3 f_{t-1}
  std::optional<double> ratio;       // freq / predicted
};

struct ConditionalEstimate {
  std::size_t i = 0, j = 0;
  Vertex u = 0, v = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t initial = 0;  // trials in E_0
  std::vector<ChainCell> cells;  // t = 1..j
  std::uint64_t joint_count = 0;
  double joint_freq = 0.0;
  double joint_sigma = 0.0;
  double chain_product = 0.0;  // product of all conditional frequencies (from counts)
  double plain_target = 0.0;   // n^-2
  double chain_prediction = 0.0;
};

struct ChainOptions {
  std::uint64_t min_support = 100;
  unsigned threads = 1;
};

inline ConditionalEstimate estimate_conditional_chain(const Graph& host, const ParamSet& ps, std::size_t i,
                                                      std::size_t j, Vertex u, Vertex v, std::uint64_t trials,
                                                      std::uint64_t seed, ChainOptions opt = {}) {
  if (!(1 <= i && i < j && j <= ps.k)) throw DomainError("estimate_conditional_chain: need 1 <= i < j <= k");
  if (u >= host.size() || v >= host.size() || u == v)
    throw DomainError("estimate_conditional_chain: u, v must be distinct vertices");
  if (host.adjacent(u, v)) throw DomainError("estimate_conditional_chain: uv is an edge");
  if (trials < 1) throw DomainError("estimate_conditional_chain: trials must be at least 1");

  // reached[t] counts trials in E_t, t = 0..j.
  constexpr std::size_t kChunk = 1024;
  std::vector<std::vector<std::uint64_t>> accs(chunk_count(trials, kChunk));
  parallel_chunks(trials, kChunk, opt.threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& reached = accs[c];
    reached.assign(j + 1, 0);
    ProcessState state(host, true);
    for (std::size_t trial = b; trial < e; ++trial) {
      state.reset();
      if (!make_record(state, ps).in_envelope) continue;
      ++reached[0];
      Stream rng(derive_seed(seed, trial));
      for (std::size_t t = 1; t <= j; ++t) {
        const auto picked = state.step(rng);
        if (!picked) break;
        bool holds;
        if (t < i)
          holds = state.active().contains(u) && state.active().contains(v);
        else if (t == i)
          holds = *picked == u && state.active().contains(v);
        else if (t < j)
          holds = state.active().contains(v);
        else
          holds = *picked == v;
        if (!holds || !make_record(state, ps).in_envelope) break;
        ++reached[t];
      }
    }
  });
  std::vector<std::uint64_t> reached(j + 1, 0);
  for (const auto& a : accs)
    for (std::size_t t = 0; t <= j; ++t) reached[t] += a[t];

  ConditionalEstimate est;
  est.i = i;
  est.j = j;
  est.u = u;
  est.v = v;
  est.trials = trials;
  est.seed = seed;
  est.initial = reached[0];
  const double n = static_cast<double>(host.size());
  double product = static_cast<double>(reached[0]) / static_cast<double>(trials);
  double prediction = 1.0;
  for (std::size_t t = 1; t <= j; ++t) {
    ChainCell cell;
    cell.t = t;
    cell.kind = t < i ? ChainCase::both_survive
                      : t == i ? ChainCase::first_hit : t < j ? ChainCase::second_survives : ChainCase::second_hit;
    cell.conditioned = reached[t - 1];
    cell.survived = reached[t];
    switch (cell.kind) {
      case ChainCase::both_survive: cell.predicted = 1.0 - 2.0 * ps.p; break;
      case ChainCase::second_survives: cell.predicted = 1.0 - ps.p; break;
      default: cell.predicted = std::pow(1.0 - ps.p, -static_cast<double>(t) + 1.0) / n; break;
    }
    cell.predicted_rel_error = 3.0 * error_at(ps, t - 1);
    prediction *= cell.predicted;
    if (cell.conditioned > 0) {
      const double f = static_cast<double>(cell.survived) / static_cast<double>(cell.conditioned);
      product *= f;
      if (cell.conditioned >= opt.min_support) {
        cell.freq = f;
        cell.ratio = f / cell.predicted;
      }
    } else {
      product = 0.0;
    }
    cell.insufficient = cell.conditioned < opt.min_support;
    est.cells.push_back(cell);
  }
  est.joint_count = reached[j];
  est.joint_freq = static_cast<double>(reached[j]) / static_cast<double>(trials);
  est.joint_sigma = std::sqrt(est.joint_freq * (1.0 - est.joint_freq) / static_cast<double>(trials));
  est.chain_product = product;
  est.plain_target = 1.0 / (n * n);
  est.chain_prediction = prediction;
  return est;
}

// ---------------------------------------------------------------------------
// Uniform independent k-sets

enum class UniformMode { exact, rejection };

inline constexpr std::size_t kExactEnumerationLimit = 30;

/// Parts of a complete multipartite graph (non-adjacency is an equivalence
/// relation), or nullopt if the graph is not complete multipartite.
inline std::optional<std::vector<std::vector<Vertex>>> multipartite_parts(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<int> part(n, -1);
  std::vector<std::vector<Vertex>> parts;
  for (Vertex v = 0; v < n; ++v) {
    if (part[v] >= 0) continue;
    const int id = static_cast<int>(parts.size());
    parts.emplace_back();
    for (Vertex w = v; w < n; ++w)
      if (w == v || !g.adjacent(v, w)) {
        if (part[w] >= 0) return std::nullopt;
        part[w] = id;
        parts.back().push_back(w);
      }
  }
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if ((part[a] == part[b]) == g.adjacent(a, b)) return std::nullopt;
  return parts;
}

inline long double binomial_ld(std::size_t n, std::size_t k) {
  if (k > n) return 0.0L;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return std::round(r);
}

namespace detail {

/// Counts independent k-subsets of `cand` by branching on the lowest candidate.
class IndependentSetCounter {
 public:
  explicit IndependentSetCounter(const Graph& g) : n_(g.size()), closed_(g.size()) {
    for (Vertex v = 0; v < n_; ++v) {
      std::uint64_t m = std::uint64_t{1} << v;
      for (Vertex w = 0; w < n_; ++w)
        if (g.adjacent(v, w)) m |= std::uint64_t{1} << w;
      closed_[v] = m;
    }
  }

  std::uint64_t count(std::uint64_t cand, std::size_t k) {
    if (k == 0) return 1;
    if (static_cast<std::size_t>(std::popcount(cand)) < k) return 0;
    const std::uint64_t key = cand ^ (static_cast<std::uint64_t>(k) << 58);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int v = std::countr_zero(cand);
    const std::uint64_t without = cand & ~(std::uint64_t{1} << v);
    const std::uint64_t r = count(without, k) + count(cand & ~closed_[v], k - 1);
    memo_.emplace(key, r);
    return r;
  }

  /// The rank-th independent k-subset of cand in branching order.
  void select(std::uint64_t cand, std::size_t k, std::uint64_t rank, std::vector<Vertex>& out) {
    while (k > 0) {
      const int v = std::countr_zero(cand);
      const std::uint64_t without = cand & ~(std::uint64_t{1} << v);
      const std::uint64_t skip = count(without, k);
      if (rank < skip) {
        cand = without;
      } else {
        rank -= skip;
        out.push_back(static_cast<Vertex>(v));
        cand &= ~closed_[v];
        --k;
      }
    }
  }

  std::uint64_t all() const { return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1; }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> closed_;
  std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

}  // namespace detail

/// Number of independent k-sets (exact; small or complete multipartite hosts).
inline long double count_independent_sets(const Graph& g, std::size_t k) {
  if (auto parts = multipartite_parts(g)) {
    long double total = 0.0L;
    for (const auto& p : *parts) total += binomial_ld(p.size(), k);
    return k == 0 ? 1.0L : total;
  }
  if (g.size() > kExactEnumerationLimit)
    throw DomainError("count_independent_sets: exact counting needs n <= 30 or a complete multipartite host");
  detail::IndependentSetCounter counter(g);
  return static_cast<long double>(counter.count(counter.all(), k));
}

inline VertexSet uniform_independent_set(const Graph& g, std::size_t k, std::uint64_t seed, UniformMode mode,
                                         std::uint64_t rejection_cap = 1'000'000) {
  Stream rng(derive_seed(seed, 0));
  const std::size_t n = g.size();
  if (k > n) throw DomainError("uniform_independent_set: k exceeds n");
  if (mode == UniformMode::rejection) {
    for (std::uint64_t attempt = 0; attempt < rejection_cap; ++attempt) {
      const auto pick = sample_subset(n, k, rng);
      const VertexSet s = VertexSet::from_range(n, pick);
      if (is_independent(g, s)) return s;
    }
    throw RejectionInfeasible("uniform_independent_set: no independent set after " + std::to_string(rejection_cap) +
                              " attempts; use exact mode");
  }
  if (auto parts = multipartite_parts(g)) {
    std::vector<long double> weights;
    long double total = 0.0L;
    for (const auto& p : *parts) {
      weights.push_back(binomial_ld(p.size(), k));
      total += weights.back();
    }
    if (total <= 0.0L) throw DomainError("uniform_independent_set: host has no independent k-set");
    long double r = static_cast<long double>(rng.uniform()) * total;
    std::size_t chosen = 0;
    while (chosen + 1 < weights.size() && (r >= weights[chosen] || weights[chosen] == 0.0L)) {
      r -= weights[chosen];
      ++chosen;
    }
    const auto& part = (*parts)[chosen];
    VertexSet s(n);
    for (auto idx : sample_subset(part.size(), k, rng)) s.insert(part[idx]);
    return s;
  }
  if (n > kExactEnumerationLimit)
    throw DomainError("uniform_independent_set: exact mode needs n <= 30 or a complete multipartite host");
  detail::IndependentSetCounter counter(g);
  const std::uint64_t total = counter.count(counter.all(), k);
  if (total == 0) throw DomainError("uniform_independent_set: host has no independent k-set");
  std::vector<Vertex> out;
  counter.select(counter.all(), k, rng.below(total), out);
  return VertexSet::from_range(n, out);
}

// ---------------------------------------------------------------------------
// K[A, B]: uniform independent k-set versus greedy output for a pair inside A

struct BipartiteComparison {
  std::size_t a = 0, b = 0, k = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double uniform_exact = 0.0;  // C(a-2, k-2) / (C(a, k) + C(b, k))
  double greedy_exact = 0.0;   // a/(a+b) * k(k-1) / (a(a-1))
  double ratio_exact = 0.0;
  std::uint64_t greedy_hits = 0;
  double greedy_mc = 0.0;
  double greedy_mc_sigma = 0.0;
  double ratio_mc = 0.0;
  double ratio_mc_sigma = 0.0;
  double z_score = 0.0;  // (greedy_mc - greedy_exact) / sigma
};

/// Pair {0, 1} of part A. Trial t uses Stream(derive_seed(seed, t)).
inline BipartiteComparison bipartite_comparison(std::size_t a, std::size_t b, std::size_t k, std::uint64_t trials,
                                                std::uint64_t seed, unsigned threads = 1) {
  if (!(k >= 2 && a >= k)) throw DomainError("bipartite_comparison: need a >= k >= 2");
  BipartiteComparison r;
  r.a = a;
  r.b = b;
  r.k = k;
  r.trials = trials;
  r.seed = seed;
  const long double total = binomial_ld(a, k) + binomial_ld(b, k);
  r.uniform_exact = static_cast<double>(binomial_ld(a - 2, k - 2) / total);
  r.greedy_exact = static_cast<double>(a) / static_cast<double>(a + b) * static_cast<double>(k * (k - 1)) /
                   static_cast<double>(a * (a - 1));
  r.ratio_exact = r.greedy_exact / r.uniform_exact;
  if (trials > 0) {
    const Graph host = complete_bipartite(a, b);
    constexpr std::size_t kChunk = 16384;
    std::vector<std::uint64_t> hits(chunk_count(trials, kChunk), 0);
    parallel_chunks(trials, kChunk, threads, [&](std::size_t c, std::size_t beg, std::size_t end) {
      ProcessState state(host, false);
      for (std::size_t t = beg; t < end; ++t) {
        Stream rng(derive_seed(seed, t));
        sample_greedy_set(state, k, rng);
        const auto ch = state.chosen();
        bool has0 = false, has1 = false;
        for (Vertex x : ch) {
          has0 |= x == 0;
          has1 |= x == 1;
        }
        if (has0 && has1) ++hits[c];
      }
    });
    for (auto h : hits) r.greedy_hits += h;
    const double T = static_cast<double>(trials);
    r.greedy_mc = static_cast<double>(r.greedy_hits) / T;
    const double sigma_exact = std::sqrt(r.greedy_exact * (1.0 - r.greedy_exact) / T);
    r.greedy_mc_sigma = sigma_exact;
    r.ratio_mc = r.greedy_mc / r.uniform_exact;
    r.ratio_mc_sigma = sigma_exact / r.uniform_exact;
    r.z_score = sigma_exact > 0.0 ? (r.greedy_mc - r.greedy_exact) / sigma_exact : 0.0;
  }
  return r;
}

}  // namespace rgis
