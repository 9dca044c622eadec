#pragma once

// Random greedy independent set process: v_i is drawn uniformly from the
// common non-neighbourhood V_{i-1} of v_1..v_{i-1}; the process stops when
// that set is empty.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "rgis/analytics.hpp"
#include "rgis/graph.hpp"
#include "rgis/parallel.hpp"
#include "rgis/random.hpp"
#include "rgis/vertex_set.hpp"

namespace rgis {

/// Incremental state (V_i, I_i, d_i) of one process run over a fixed host.
///
/// Active vertices live both in a bit-vector (membership, word-parallel
/// intersections) and in a dense id array with swap-remove (O(1) uniform
/// draws). Induced degrees are maintained only when requested.
class ProcessState {
 public:
  explicit ProcessState(const Graph& host, bool track_degrees = true)
      : host_(&host),
        track_(track_degrees),
        active_(host.size()),
        list_(host.size()),
        pos_(host.size()) {
    if (track_) degrees_.resize(host.size());
    reset();
  }

  void reset() {
    step_ = 0;
    chosen_.clear();
    removed_.clear();
    active_ = VertexSet::full(host_->size());
    std::iota(list_.begin(), list_.end(), Vertex{0});
    std::iota(pos_.begin(), pos_.end(), Vertex{0});
    live_ = host_->size();
    if (track_) std::copy(host_->degrees().begin(), host_->degrees().end(), degrees_.begin());
  }

  /// Draws v_{i+1} uniformly from the active set and removes its closed
  /// neighbourhood. Returns nullopt (natural termination) when nothing is active.
  std::optional<Vertex> step(Stream& rng) {
    if (live_ == 0) return std::nullopt;
    const Vertex v = list_[static_cast<std::size_t>(rng.below(live_))];
    apply(v);
    return v;
  }

  /// Forces the next choice; v must be active.
  void step_to(Vertex v) {
    if (v >= host_->size() || !active_.contains(v)) throw DomainError("step_to: vertex is not active");
    apply(v);
  }

  const Graph& host() const noexcept { return *host_; }
  std::size_t step_index() const noexcept { return step_; }
  bool exhausted() const noexcept { return live_ == 0; }
  bool tracks_degrees() const noexcept { return track_; }

  const VertexSet& active() const noexcept { return active_; }
  std::size_t active_size() const noexcept { return live_; }
  std::span<const Vertex> active_list() const noexcept { return {list_.data(), live_}; }
  std::span<const Vertex> chosen() const noexcept { return chosen_; }
  /// Vertices that left the active set in the most recent step (v_i first).
  std::span<const Vertex> last_removed() const noexcept { return removed_; }

  /// d_i(v) for v in V_i; meaningless for inactive v.
  std::uint32_t degree(Vertex v) const { return degrees_[v]; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }

  VertexSet chosen_set() const { return VertexSet::from_range(host_->size(), chosen_); }

 private:
  void deactivate(Vertex u) {
    active_.erase(u);
    const Vertex at = pos_[u];
    const Vertex last = list_[live_ - 1];
    list_[at] = last;
    pos_[last] = at;
    list_[live_ - 1] = u;
    pos_[u] = static_cast<Vertex>(live_ - 1);
    --live_;
  }

  void apply(Vertex v) {
    removed_.clear();
    removed_.push_back(v);
    bits::for_each_and(host_->row(v), active_.words(), [&](Vertex u) { removed_.push_back(u); });
    for (Vertex u : removed_) deactivate(u);
    if (track_) {
      for (Vertex u : removed_)
        bits::for_each_and(host_->row(u), active_.words(), [&](Vertex w) { --degrees_[w]; });
    }
    chosen_.push_back(v);
    ++step_;
  }

  const Graph* host_;
  bool track_;
  std::size_t step_ = 0;
  VertexSet active_;
  std::vector<Vertex> list_;
  std::vector<Vertex> pos_;
  std::size_t live_ = 0;
  std::vector<Vertex> chosen_;
  std::vector<Vertex> removed_;
  std::vector<std::uint32_t> degrees_;
};

/// Runs the process for at most k steps without degree bookkeeping; the
/// cheapest way to draw I_k.
inline std::vector<Vertex> sample_greedy_set(ProcessState& state, std::size_t k, Stream& rng) {
  state.reset();
  for (std::size_t i = 0; i < k; ++i)
    if (!state.step(rng)) break;
  return {state.chosen().begin(), state.chosen().end()};
}

inline std::vector<Vertex> sample_greedy_set(const Graph& host, std::size_t k, std::uint64_t seed) {
  ProcessState state(host, false);
  Stream rng(derive_seed(seed, 0));
  return sample_greedy_set(state, k, rng);
}

// ---------------------------------------------------------------------------
// Trajectory records

struct StepRecord {
  std::size_t i = 0;
  std::optional<Vertex> chosen_vertex;  // empty for the initial record
  std::size_t active_size = 0;
  std::optional<std::uint32_t> deg_min;
  std::optional<std::uint32_t> deg_max;
  std::optional<double> deg_mean;
  double d_tilde = 0.0;
  double f_i = 0.0;
  bool in_envelope = true;
};

/// Evaluates the current state against the degree envelope (1 +- f_i) d~_i.
inline StepRecord make_record(const ProcessState& state, const ParamSet& ps) {
  StepRecord r;
  r.i = state.step_index();
  if (!state.chosen().empty()) r.chosen_vertex = state.chosen().back();
  r.active_size = state.active_size();
  r.d_tilde = expected_degree_at(ps, r.i);
  r.f_i = error_at(ps, r.i);
  if (state.active_size() > 0 && state.tracks_degrees()) {
    std::uint32_t lo = std::numeric_limits<std::uint32_t>::max(), hi = 0;
    std::uint64_t sum = 0;
    for (Vertex v : state.active_list()) {
      const std::uint32_t d = state.degree(v);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sum += d;
    }
    r.deg_min = lo;
    r.deg_max = hi;
    r.deg_mean = static_cast<double>(sum) / static_cast<double>(state.active_size());
    r.in_envelope = static_cast<double>(lo) >= (1.0 - r.f_i) * r.d_tilde &&
                    static_cast<double>(hi) <= (1.0 + r.f_i) * r.d_tilde;
  }
  return r;
}

struct ProcessRun {
  ParamSet params;
  std::uint64_t seed = 0;
  std::vector<Vertex> chosen;
  std::vector<StepRecord> records;  // records[i] describes V_i, i = 0..completed_steps
  std::size_t tau = 0;
  std::optional<std::size_t> first_violation;
  std::size_t completed_steps = 0;
  /// sigma[v]: step at which v left the active set; completed_steps + 1 if it never did.
  std::vector<std::uint32_t> sigma;
  std::vector<char> survived;
};

namespace detail {

inline void stamp_removals(const ProcessState& state, std::vector<std::uint32_t>& sigma) {
  for (Vertex u : state.last_removed()) sigma[u] = static_cast<std::uint32_t>(state.step_index());
}

}  // namespace detail

/// One run of up to ps.k steps drawn from Stream(derive_seed(seed, trial)).
inline ProcessRun run_process(const Graph& host, const ParamSet& ps, std::uint64_t seed,
                              std::uint64_t trial = 0) {
  if (ps.n != host.size()) throw DomainError("run_process: parameter n does not match host order");
  ProcessRun run;
  run.params = ps;
  run.seed = seed;
  ProcessState state(host, true);
  Stream rng(derive_seed(seed, trial));
  const std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
  run.sigma.assign(host.size(), unset);
  run.records.push_back(make_record(state, ps));
  if (!run.records.back().in_envelope) run.first_violation = 0;
  while (state.step_index() < ps.k && state.step(rng)) {
    detail::stamp_removals(state, run.sigma);
    run.records.push_back(make_record(state, ps));
    if (!run.first_violation && !run.records.back().in_envelope) run.first_violation = state.step_index();
  }
  run.completed_steps = state.step_index();
  run.chosen.assign(state.chosen().begin(), state.chosen().end());
  run.tau = std::min({ps.k, run.completed_steps, run.first_violation.value_or(ps.k)});
  run.survived.assign(host.size(), 0);
  for (std::size_t v = 0; v < host.size(); ++v)
    if (run.sigma[v] == unset) {
      run.sigma[v] = static_cast<std::uint32_t>(run.completed_steps + 1);
      run.survived[v] = 1;
    }
  return run;
}

// ---------------------------------------------------------------------------
// Increment diagnostics for the tracked degree processes
//
//   X-_{v,i} = d_i(v) - d~_i - f_i d~_i,   X+_{v,i} = d_i(v) - d~_i + f_i d~_i
//
// frozen after rho_v = min(tau, sigma_v - 1).

struct TrackedSeries {
  Vertex v = 0;
  std::vector<double> x_minus;   // i = 0..completed_steps
  std::vector<double> x_plus;
  std::vector<double> dx_minus;  // entry i-1 holds the increment at step i
  std::vector<double> dx_plus;
  std::size_t sigma = 0;
  bool survived = false;
  std::size_t rho = 0;
  // Exact M_{v,j} and q_{v,j} for each j with v in V_j (only when requested).
  std::vector<double> m;
  std::vector<double> q;
};

struct IncrementStats {
  ParamSet params;
  std::uint64_t seed = 0;
  std::size_t completed_steps = 0;
  std::size_t tau = 0;
  std::vector<TrackedSeries> series;
  double max_abs_increment = 0.0;
  double mean_abs_increment = 0.0;
  double bound_abs = 0.0;
  std::vector<double> bound_mean;  // 3 p d~_{i-1}, entry i-1 for step i
  std::size_t bound_violations = 0;
  std::size_t frozen_nonzero = 0;  // increments after rho_v that were not exactly 0
};

struct IncrementOptions {
  bool exact_m_q = false;
};

namespace detail {

inline void fill_m_q(const ProcessState& state, Vertex v, TrackedSeries& s) {
  const Graph& g = state.host();
  const auto active = state.active().words();
  std::vector<Word> nv(active.size());
  auto row = g.row(v);
  for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = row[i] & active[i];
  std::uint64_t m = 0;
  for (Vertex u : state.active_list())
    if (u != v && !bits::test(nv, u)) m += bits::popcount_and(g.row(u), nv);
  s.m.push_back(static_cast<double>(m));
  s.q.push_back(1.0 - (static_cast<double>(state.degree(v)) + 1.0) / static_cast<double>(state.active_size()));
}

}  // namespace detail

inline IncrementStats increment_diagnostics(const Graph& host, const ParamSet& ps, const VertexSet& tracked,
                                            std::uint64_t seed, IncrementOptions opt = {},
                                            std::uint64_t trial = 0) {
  if (ps.n != host.size()) throw DomainError("increment_diagnostics: parameter n does not match host order");
  check_membership(host, tracked);
  IncrementStats st;
  st.params = ps;
  st.seed = seed;
  st.bound_abs = increment_cap(ps);

  ProcessState state(host, true);
  Stream rng(derive_seed(seed, trial));
  const auto ids = tracked.members();
  st.series.resize(ids.size());
  std::vector<char> live(ids.size(), 1);

  auto value = [&](Vertex v, std::size_t i, double sign) {
    const double dt = expected_degree_at(ps, i);
    return static_cast<double>(state.degree(v)) - dt + sign * error_at(ps, i) * dt;
  };

  bool clean = make_record(state, ps).in_envelope;  // no violation at steps < i+1
  std::optional<std::size_t> violation;
  if (!clean) violation = 0;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    auto& s = st.series[t];
    s.v = ids[t];
    s.x_minus.push_back(value(s.v, 0, -1.0));
    s.x_plus.push_back(value(s.v, 0, +1.0));
    if (opt.exact_m_q) detail::fill_m_q(state, s.v, s);
  }

  double abs_sum = 0.0;
  std::size_t abs_count = 0;
  while (state.step_index() < ps.k && state.step(rng)) {
    const std::size_t i = state.step_index();
    const bool clean_before = clean;
    for (std::size_t t = 0; t < ids.size(); ++t) {
      auto& s = st.series[t];
      const bool in_vi = state.active().contains(s.v);
      if (!in_vi && s.sigma == 0) s.sigma = i;
      double xm = s.x_minus.back(), xp = s.x_plus.back();
      if (live[t] && clean_before && in_vi) {
        xm = value(s.v, i, -1.0);
        xp = value(s.v, i, +1.0);
        if (opt.exact_m_q) detail::fill_m_q(state, s.v, s);
      } else if (live[t]) {
        live[t] = 0;
        s.rho = i - 1;
      }
      const double dm = xm - s.x_minus.back();
      const double dp = xp - s.x_plus.back();
      if (!live[t] && (dm != 0.0 || dp != 0.0)) ++st.frozen_nonzero;
      s.dx_minus.push_back(dm);
      s.dx_plus.push_back(dp);
      s.x_minus.push_back(xm);
      s.x_plus.push_back(xp);
      for (double d : {dm, dp}) {
        st.max_abs_increment = std::max(st.max_abs_increment, std::abs(d));
        abs_sum += std::abs(d);
        ++abs_count;
        if (std::abs(d) > st.bound_abs) ++st.bound_violations;
      }
    }
    st.bound_mean.push_back(mean_increment_cap(ps, i));
    if (clean && !make_record(state, ps).in_envelope) {
      clean = false;
      violation = i;
    }
  }
  st.completed_steps = state.step_index();
  st.tau = std::min({ps.k, st.completed_steps, violation.value_or(ps.k)});
  for (std::size_t t = 0; t < ids.size(); ++t) {
    auto& s = st.series[t];
    if (s.sigma == 0) {
      s.sigma = st.completed_steps + 1;
      s.survived = true;
    }
    if (live[t]) s.rho = std::min(st.tau, s.sigma - 1);
  }
  st.mean_abs_increment = abs_count ? abs_sum / static_cast<double>(abs_count) : 0.0;
  return st;
}

// ---------------------------------------------------------------------------
// Ensembles

struct StepAggregate {
  std::size_t i = 0;
  std::size_t runs_reaching = 0;
  double mean_active = 0.0;
  // deg_mean / (p (|V_i| - 1)) over runs with |V_i| >= 2
  std::size_t ratio_samples = 0;
  double mean_degree_ratio = 0.0;
  double min_degree_ratio = 0.0;
  double max_degree_ratio = 0.0;
  // Tracked-vertex increments at this step, pooled over runs and vertices.
  std::size_t increment_samples = 0;
  double dx_minus_mean = 0.0;
  double dx_minus_se = 0.0;
  double dx_plus_mean = 0.0;
  double dx_plus_se = 0.0;
};

struct EnsembleSummary {
  ParamSet params;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t tracked = 0;
  std::size_t clean_runs = 0;  // runs whose tau equals their completed length
  double clean_fraction = 0.0;
  std::size_t shortest_run = 0;
  std::vector<StepAggregate> steps;  // i = 0..k
  double max_abs_increment = 0.0;
  double bound_abs = 0.0;
  std::size_t bound_violations = 0;
  std::size_t frozen_nonzero = 0;
};

struct EnsembleOptions {
  std::size_t tracked = 20;
  unsigned threads = 1;
};

namespace detail {

struct StepAcc {
  std::size_t reach = 0;
  double active_sum = 0.0;
  std::size_t ratio_n = 0;
  double ratio_sum = 0.0;
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = -std::numeric_limits<double>::infinity();
  std::size_t inc_n = 0;
  double dm_sum = 0.0, dm_sq = 0.0, dp_sum = 0.0, dp_sq = 0.0;

  void merge(const StepAcc& o) {
    reach += o.reach;
    active_sum += o.active_sum;
    ratio_n += o.ratio_n;
    ratio_sum += o.ratio_sum;
    ratio_min = std::min(ratio_min, o.ratio_min);
    ratio_max = std::max(ratio_max, o.ratio_max);
    inc_n += o.inc_n;
    dm_sum += o.dm_sum;
    dm_sq += o.dm_sq;
    dp_sum += o.dp_sum;
    dp_sq += o.dp_sq;
  }
};

struct EnsembleAcc {
  std::vector<StepAcc> steps;
  std::size_t clean = 0;
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  double max_abs = 0.0;
  std::size_t violations = 0;
  std::size_t frozen_nonzero = 0;
};

inline void mean_se(std::size_t n, double sum, double sq, double& mean, double& se) {
  if (n == 0) {
    mean = se = 0.0;
    return;
  }
  const double dn = static_cast<double>(n);
  mean = sum / dn;
  const double var = n > 1 ? std::max(0.0, (sq - dn * mean * mean) / (dn - 1.0)) : 0.0;
  se = std::sqrt(var / dn);
}

}  // namespace detail

/// `trials` independent runs; trial t uses Stream(derive_seed(seed, t)).
/// Tracked vertices are a uniform sample drawn from derive_seed(seed, streams::kTracked).
inline EnsembleSummary ensemble_run(const Graph& host, const ParamSet& ps, std::size_t trials, std::uint64_t seed,
                                    EnsembleOptions opt = {}) {
  if (trials < 1) throw DomainError("ensemble_run: trials must be at least 1");
  if (ps.n != host.size()) throw DomainError("ensemble_run: parameter n does not match host order");
  const std::size_t tracked_count = std::min(opt.tracked, host.size());
  Stream pick(derive_seed(seed, streams::kTracked));
  const VertexSet tracked = VertexSet::from_range(host.size(), sample_subset(host.size(), tracked_count, pick));

  constexpr std::size_t kChunk = 8;
  std::vector<detail::EnsembleAcc> accs(chunk_count(trials, kChunk));
  parallel_chunks(trials, kChunk, opt.threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& acc = accs[c];
    acc.steps.resize(ps.k + 1);
    for (std::size_t t = b; t < e; ++t) {
      const ProcessRun run = run_process(host, ps, seed, t);
      if (run.tau == run.completed_steps) ++acc.clean;
      acc.shortest = std::min(acc.shortest, run.completed_steps);
      for (const auto& r : run.records) {
        auto& s = acc.steps[r.i];
        ++s.reach;
        s.active_sum += static_cast<double>(r.active_size);
        if (r.active_size >= 2 && r.deg_mean && ps.p > 0.0) {
          const double ratio = *r.deg_mean / (ps.p * static_cast<double>(r.active_size - 1));
          ++s.ratio_n;
          s.ratio_sum += ratio;
          s.ratio_min = std::min(s.ratio_min, ratio);
          s.ratio_max = std::max(s.ratio_max, ratio);
        }
      }
      if (tracked_count > 0) {
        const IncrementStats inc = increment_diagnostics(host, ps, tracked, seed, {}, t);
        acc.max_abs = std::max(acc.max_abs, inc.max_abs_increment);
        acc.violations += inc.bound_violations;
        acc.frozen_nonzero += inc.frozen_nonzero;
        for (const auto& ser : inc.series)
          for (std::size_t j = 0; j < ser.dx_minus.size(); ++j) {
            auto& s = acc.steps[j + 1];
            ++s.inc_n;
            s.dm_sum += ser.dx_minus[j];
            s.dm_sq += ser.dx_minus[j] * ser.dx_minus[j];
            s.dp_sum += ser.dx_plus[j];
            s.dp_sq += ser.dx_plus[j] * ser.dx_plus[j];
          }
      }
    }
  });

  detail::EnsembleAcc total;
  total.steps.resize(ps.k + 1);
  for (const auto& a : accs) {
    for (std::size_t i = 0; i <= ps.k; ++i) total.steps[i].merge(a.steps[i]);
    total.clean += a.clean;
    total.shortest = std::min(total.shortest, a.shortest);
    total.max_abs = std::max(total.max_abs, a.max_abs);
    total.violations += a.violations;
    total.frozen_nonzero += a.frozen_nonzero;
  }

  EnsembleSummary out;
  out.params = ps;
  out.seed = seed;
  out.trials = trials;
  out.tracked = tracked_count;
  out.clean_runs = total.clean;
  out.clean_fraction = static_cast<double>(total.clean) / static_cast<double>(trials);
  out.shortest_run = total.shortest;
  out.max_abs_increment = total.max_abs;
  out.bound_abs = increment_cap(ps);
  out.bound_violations = total.violations;
  out.frozen_nonzero = total.frozen_nonzero;
  for (std::size_t i = 0; i <= ps.k; ++i) {
    const auto& s = total.steps[i];
    if (s.reach == 0) break;
    StepAggregate a;
    a.i = i;
    a.runs_reaching = s.reach;
    a.mean_active = s.active_sum / static_cast<double>(s.reach);
    a.ratio_samples = s.ratio_n;
    if (s.ratio_n) {
      a.mean_degree_ratio = s.ratio_sum / static_cast<double>(s.ratio_n);
      a.min_degree_ratio = s.ratio_min;
      a.max_degree_ratio = s.ratio_max;
    }
    a.increment_samples = s.inc_n;
    detail::mean_se(s.inc_n, s.dm_sum, s.dm_sq, a.dx_minus_mean, a.dx_minus_se);
    detail::mean_se(s.inc_n, s.dp_sum, s.dp_sq, a.dx_plus_mean, a.dx_plus_se);
    out.steps.push_back(a);
  }
  return out;
}

}  // namespace rgis
