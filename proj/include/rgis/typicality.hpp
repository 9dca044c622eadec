#pragma once

// Pseudorandomness checks for a host graph at parameters (n, p, f0, delta2):
//
//   P1  |N^c(S)| = (1 +- f_|S|)(1-p)^|S| n   for small S   (sampled)
//   P2  d(v) = (1 +- f0/2) p n               for every v   (exhaustive)
//   P3  |N(u) & N(v)| <= delta2              for every u!=v (exhaustive up to 20000 vertices)
//
// Each check reports a margin: the largest fraction of the allowed deviation
// consumed by any tested object. A check passes iff its margin is <= 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rgis/analytics.hpp"
#include "rgis/graph.hpp"
#include "rgis/parallel.hpp"
#include "rgis/process.hpp"
#include "rgis/random.hpp"

namespace rgis {

inline constexpr std::size_t kExhaustivePairLimit = 20000;

struct P1Violation {
  std::vector<Vertex> set;
  std::size_t observed = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct P1Report {
  std::size_t subsets_tested = 0;
  std::size_t max_size_tested = 0;
  std::size_t uniform_tested = 0;
  std::size_t prefix_tested = 0;
  std::vector<P1Violation> violations;
  std::size_t violation_count = 0;
  double margin = 0.0;
};

struct P2Violation {
  Vertex v = 0;
  std::size_t degree = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct P2Report {
  std::vector<P2Violation> violations;
  std::size_t violation_count = 0;
  double margin = 0.0;
};

struct P3Violation {
  Vertex u = 0;
  Vertex v = 0;
  std::size_t codegree = 0;
};

struct P3Report {
  bool exhaustive = true;
  std::size_t pairs_tested = 0;
  std::vector<P3Violation> violations;
  std::size_t violation_count = 0;
  std::size_t max_codegree = 0;
  double delta2 = 0.0;
  double margin = 0.0;
};

struct ExpectationRow {
  std::size_t s = 0;
  double e_s = 0.0;   // (n - s)(1-p)^s
  double mu_s = 0.0;  // (1-p)^s n
  bool above_threshold = false;  // e_s >= 4 s log n
};

struct TypicalityReport {
  ParamSet params;
  double strict_factor = 1.0;
  P1Report p1;
  P2Report p2;
  P3Report p3;
  std::vector<ExpectationRow> e_table;
  bool typical = false;
  const char* p1_mode = "sampled";
};

struct TypicalityOptions {
  std::size_t budget = 200;            // subsets per size for P1
  std::size_t max_size = 0;            // 0: use k
  std::size_t max_recorded = std::numeric_limits<std::size_t>::max();
  std::size_t p3_sample_pairs = 2'000'000;  // only used above the exhaustive limit
  unsigned threads = 1;
};

inline P2Report check_p2(const Graph& g, const ParamSet& ps,
                         std::size_t max_recorded = std::numeric_limits<std::size_t>::max()) {
  P2Report r;
  const double pn = ps.p * static_cast<double>(g.size());
  const double half = ps.f0 / 2.0 * pn;
  for (Vertex v = 0; v < g.size(); ++v) {
    const double dev = std::abs(static_cast<double>(g.degree(v)) - pn);
    const double frac = half > 0.0 ? dev / half : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.margin = std::max(r.margin, frac);
    if (dev > half) {
      ++r.violation_count;
      if (r.violations.size() < max_recorded) r.violations.push_back({v, g.degree(v), pn - half, pn + half});
    }
  }
  return r;
}

inline P3Report check_p3(const Graph& g, const ParamSet& ps,
                         std::size_t max_recorded = std::numeric_limits<std::size_t>::max(), unsigned threads = 1,
                         std::size_t sample_pairs = 2'000'000, std::uint64_t seed = 0) {
  P3Report r;
  r.delta2 = ps.delta2;
  const std::size_t n = g.size();
  if (n < 2) return r;

  struct Acc {
    std::size_t tested = 0, max_cd = 0, count = 0;
    std::vector<P3Violation> found;
  };
  auto visit = [&](Acc& a, Vertex u, Vertex v) {
    const std::size_t cd = bits::popcount_and(g.row(u), g.row(v));
    ++a.tested;
    a.max_cd = std::max(a.max_cd, cd);
    if (static_cast<double>(cd) > ps.delta2) {
      ++a.count;
      if (a.found.size() < max_recorded) a.found.push_back({u, v, cd});
    }
  };

  std::vector<Acc> accs;
  if (n <= kExhaustivePairLimit) {
    constexpr std::size_t kRows = 16;
    accs.resize(chunk_count(n, kRows));
    parallel_chunks(n, kRows, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t u = b; u < e; ++u)
        for (std::size_t v = u + 1; v < n; ++v) visit(accs[c], static_cast<Vertex>(u), static_cast<Vertex>(v));
    });
  } else {
    r.exhaustive = false;
    constexpr std::size_t kBlock = 65536;
    accs.resize(chunk_count(sample_pairs, kBlock));
    parallel_chunks(sample_pairs, kBlock, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
      Stream rng(derive_seed(derive_seed(seed, streams::kPairs), c));
      for (std::size_t t = b; t < e; ++t) {
        auto u = static_cast<Vertex>(rng.below(n));
        auto v = static_cast<Vertex>(rng.below(n - 1));
        if (v >= u) ++v;
        visit(accs[c], std::min(u, v), std::max(u, v));
      }
    });
  }
  for (auto& a : accs) {
    r.pairs_tested += a.tested;
    r.max_codegree = std::max(r.max_codegree, a.max_cd);
    r.violation_count += a.count;
    for (auto& f : a.found)
      if (r.violations.size() < max_recorded) r.violations.push_back(f);
  }
  r.margin = ps.delta2 > 0.0 ? static_cast<double>(r.max_codegree) / ps.delta2
                             : (r.max_codegree > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  return r;
}

namespace detail {

inline void test_p1_subset(const Graph& g, const ParamSet& ps, const std::vector<Vertex>& members, P1Report& r,
                           std::size_t max_recorded) {
  const std::size_t s = members.size();
  const VertexSet set = VertexSet::from_range(g.size(), members);
  const std::size_t observed = common_non_neighbourhood(g, set).size();
  const double mu = expected_active(ps, s);
  const double width = error_at(ps, s) * mu;
  const double dev = std::abs(static_cast<double>(observed) - mu);
  const double frac = width > 0.0 ? dev / width : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.margin = std::max(r.margin, frac);
  ++r.subsets_tested;
  r.max_size_tested = std::max(r.max_size_tested, s);
  if (dev > width) {
    ++r.violation_count;
    if (r.violations.size() < max_recorded) r.violations.push_back({members, observed, mu - width, mu + width});
  }
}

}  // namespace detail

/// Tests `budget` subsets of every size 1..max_size: ceil(budget/2) uniform
/// s-subsets and floor(budget/2) prefixes I_s of independent process runs.
/// Uniform subsets for size s come from derive_seed(derive_seed(seed, kUniformSubsets), s);
/// prefix run r uses the process stream derive_seed(seed, r).
inline P1Report check_p1(const Graph& g, const ParamSet& ps, std::size_t budget, std::size_t max_size,
                         std::uint64_t seed, std::size_t max_recorded = std::numeric_limits<std::size_t>::max()) {
  if (budget == 0) throw DomainError("check_p1: budget must be at least 1");
  if (max_size == 0) max_size = ps.k;
  max_size = std::min(max_size, g.size());
  P1Report r;
  const std::size_t uniform = (budget + 1) / 2;
  const std::size_t prefixes = budget / 2;
  const std::uint64_t ukey = derive_seed(seed, streams::kUniformSubsets);
  for (std::size_t s = 1; s <= max_size; ++s) {
    Stream rng(derive_seed(ukey, s));
    for (std::size_t b = 0; b < uniform; ++b) {
      detail::test_p1_subset(g, ps, sample_subset(g.size(), s, rng), r, max_recorded);
      ++r.uniform_tested;
    }
  }
  ProcessState state(g, false);
  for (std::size_t run = 0; run < prefixes; ++run) {
    Stream rng(derive_seed(seed, run));
    const auto chosen = sample_greedy_set(state, max_size, rng);
    for (std::size_t s = 1; s <= chosen.size(); ++s) {
      detail::test_p1_subset(g, ps, std::vector<Vertex>(chosen.begin(), chosen.begin() + s), r, max_recorded);
      ++r.prefix_tested;
    }
  }
  return r;
}

inline std::vector<ExpectationRow> expectation_table(const ParamSet& ps, std::size_t max_size) {
  std::vector<ExpectationRow> rows;
  const double n = static_cast<double>(ps.n);
  for (std::size_t s = 1; s <= max_size; ++s) {
    ExpectationRow row;
    row.s = s;
    const double q = std::pow(1.0 - ps.p, static_cast<double>(s));
    row.e_s = (n - static_cast<double>(s)) * q;
    row.mu_s = q * n;
    row.above_threshold = row.e_s >= 4.0 * static_cast<double>(s) * std::log(n);
    rows.push_back(row);
  }
  return rows;
}

/// Conjunction of P1 (sampled), P2 and P3. A strict factor < 1 shrinks
/// f0, every f_s and delta2 before checking.
inline TypicalityReport is_typical(const Graph& g, const ParamSet& ps, std::uint64_t seed, TypicalityOptions opt = {},
                                   double strict_factor = 1.0) {
  if (ps.n != g.size()) throw DomainError("is_typical: parameter n does not match graph order");
  TypicalityReport rep;
  rep.strict_factor = strict_factor;
  rep.params = strict_factor == 1.0 ? ps : scaled(ps, strict_factor);
  const std::size_t max_size = opt.max_size ? opt.max_size : ps.k;
  rep.p1 = check_p1(g, rep.params, opt.budget, max_size, seed, opt.max_recorded);
  rep.p2 = check_p2(g, rep.params, opt.max_recorded);
  rep.p3 = check_p3(g, rep.params, opt.max_recorded, opt.threads, opt.p3_sample_pairs, seed);
  rep.e_table = expectation_table(rep.params, std::min(max_size, g.size()));
  rep.typical = rep.p1.violation_count == 0 && rep.p2.violation_count == 0 && rep.p3.violation_count == 0;
  return rep;
}

}  // namespace rgis
