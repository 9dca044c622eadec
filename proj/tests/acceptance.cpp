// Acceptance suite: one pass/fail line per criterion. Exit status is nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hp_oracle.hpp"
#include "oracles.hpp"
#include "rgis/rgis.hpp"

using namespace rgis;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned threads() { return default_threads(); }

// 1. Incremental state against brute-force recomputation after every step.
Outcome process_state_oracle() {
  const std::size_t ns[] = {50, 200, 500};
  const double ps_[] = {0.05, 0.1, 0.2};
  std::size_t hosts = 0, checks = 0, mismatches = 0;
  for (std::size_t h = 0; h < 100; ++h) {
    const std::size_t n = ns[h % 3];
    const double p = ps_[(h / 3) % 3];
    const Graph g = gnp_sample(n, p, 1000 + h);
    const ParamSet ps = derive_params(n, p, 0.5);
    ProcessState st(g);
    Stream rng(derive_seed(h, 0));
    for (std::size_t i = 0; i <= ps.k; ++i) {
      if (i > 0 && !st.step(rng)) break;
      const std::vector<Vertex> chosen(st.chosen().begin(), st.chosen().end());
      const auto ref = oracle::non_neighbourhood(g, chosen);
      const VertexSet lib = common_non_neighbourhood(g, VertexSet::from_range(n, chosen));
      for (Vertex v = 0; v < n; ++v) {
        ++checks;
        const bool live = ref[v];
        if (st.active().contains(v) != live || lib.contains(v) != live) ++mismatches;
        else if (live && st.degree(v) != oracle::induced_degree(g, ref, v)) ++mismatches;
      }
    }
    ++hosts;
  }
  return {mismatches == 0, fmt("%zu hosts, %zu vertex-step checks, %zu mismatches", hosts, checks, mismatches)};
}

// 2. Independence of every produced set and disjointness of partition cells.
Outcome independence_invariant() {
  std::size_t sets = 0, bad = 0, overlaps = 0;
  auto check = [&](const Graph& g, const std::vector<Vertex>& s) {
    ++sets;
    if (!oracle::independent(g, s) || !is_independent(g, VertexSet::from_range(g.size(), s))) ++bad;
  };
  std::mt19937_64 rng(5);
  for (int h = 0; h < 12; ++h) {
    const std::size_t n = 60 + rng() % 240;
    const double p = 0.05 + (rng() % 20) / 100.0;
    const Graph g = gnp_sample(n, p, 500 + h);
    const ParamSet ps = derive_params(n, p, 0.5);
    for (std::uint64_t t = 0; t < 200; ++t) check(g, run_process(g, ps, h, t).chosen);
    const auto th = build_theta1_adaptive(g, ps, h, 100000);
    for (const auto& s : th.cover.sets) check(g, s.members());
    const auto pd = build_pdim_cover(g, ps, bound_formulas(ps).s_pdim, 40, h, threads());
    for (const auto& part : pd.partitions) {
      std::vector<int> owner(n, 0);
      for (const auto& cell : part) {
        check(g, cell.members());
        for (Vertex v : cell.members())
          if (owner[v]++) ++overlaps;
      }
    }
  }
  return {bad == 0 && overlaps == 0,
          fmt("%zu sets checked (runs, cover sets, partition cells), %zu dependent, %zu overlaps", sets, bad,
              overlaps)};
}

// 3. Deterministic increment cap on P3-typical hosts, and exact freezing.
Outcome increment_cap_and_freezing() {
  std::size_t hosts = 0, violations = 0, frozen = 0, samples = 0;
  double worst = 0.0, cap = 0.0;
  for (std::uint64_t h = 1; h <= 3; ++h) {
    const Graph g = gnp_sample(1000, 0.05, h);
    const ParamSet ps = derive_params(1000, 0.05, 0.5);
    if (check_p3(g, ps, 0, threads()).violation_count != 0) continue;
    ++hosts;
    cap = increment_cap(ps);
    Stream pick(derive_seed(h, streams::kTracked));
    VertexSet tracked = VertexSet::from_range(1000, sample_subset(1000, 20, pick));
    for (std::uint64_t t = 0; t < 30; ++t) {
      const auto st = increment_diagnostics(g, ps, tracked, h, {}, t);
      violations += st.bound_violations;
      frozen += st.frozen_nonzero;
      worst = std::max(worst, st.max_abs_increment);
      for (const auto& s : st.series) samples += s.dx_minus.size() * 2;
    }
  }
  return {hosts > 0 && violations == 0 && frozen == 0,
          fmt("%zu P3-typical hosts, %zu increments, max |dX| = %.4g vs cap %.1f, %zu over cap, %zu nonzero after "
              "freezing",
              hosts, samples, worst, cap, violations, frozen)};
}

// 4. Drift signs of X- and X+ per step.
Outcome drift_signs() {
  const Graph g = gnp_sample(1000, 0.05, 21);
  const ParamSet ps = derive_params(1000, 0.05, 0.5);
  const auto sum = ensemble_run(g, ps, 2000, 4, {20, threads()});
  std::size_t bad = 0, steps = 0;
  double worst_minus = -1e300, worst_plus = 1e300;
  for (const auto& s : sum.steps) {
    if (s.increment_samples < 2) continue;
    ++steps;
    const double zm = s.dx_minus_se > 0 ? s.dx_minus_mean / s.dx_minus_se : (s.dx_minus_mean > 0 ? 1e300 : 0);
    const double zp = s.dx_plus_se > 0 ? s.dx_plus_mean / s.dx_plus_se : (s.dx_plus_mean < 0 ? -1e300 : 0);
    worst_minus = std::max(worst_minus, zm);
    worst_plus = std::min(worst_plus, zp);
    if (zm > 3.0 || zp < -3.0) ++bad;
  }
  return {bad == 0 && steps > 0,
          fmt("2000 runs x 20 tracked, %zu steps, largest mean dX-/se = %.2f, smallest mean dX+/se = %.2f, %zu bad "
              "steps",
              steps, worst_minus, worst_plus, bad)};
}

// 5. Envelope adherence and mean degree tracking.
Outcome envelope_adherence() {
  const ParamSet ps = derive_params(2000, 0.05, 0.5);
  std::size_t clean = 0;
  double lo = 1e300, hi = -1e300;
  for (std::uint64_t r = 0; r < 50; ++r) {
    const Graph g = gnp_sample(2000, 0.05, 100 + r);
    const auto run = run_process(g, ps, r);
    if (!run.first_violation && run.tau == run.completed_steps) ++clean;
    for (const auto& rec : run.records) {
      if (rec.i > ps.k || rec.active_size < 2 || !rec.deg_mean) continue;
      const double ratio = *rec.deg_mean / (ps.p * static_cast<double>(rec.active_size - 1));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return {clean == 50 && lo >= 0.9 && hi <= 1.1,
          fmt("k = %zu, %zu/50 runs clean, mean degree / p(|V_i|-1) in [%.4f, %.4f]", ps.k, clean, lo, hi)};
}

EstimateReport membership_report() {
  static const EstimateReport rep = [] {
    const Graph g = gnp_sample(500, 0.05, 13);
    return estimate_membership(g, derive_params(500, 0.05, 0.5), 200000, 6, {200, threads()});
  }();
  return rep;
}

// 6. Vertex membership uniformity.
Outcome vertex_uniformity() {
  const auto r = membership_report();
  std::uint64_t sum = 0;
  for (auto c : r.vertex_counts) sum += c;
  const double within = fraction_within(r.per_vertex_freq, r.predicted_vertex, 0.05);
  const double within10 = fraction_within(r.per_vertex_freq, r.predicted_vertex, 0.10);
  double rad = 0.0;
  for (double x : r.vertex_ci_radius) rad = std::max(rad, x);
  return {within >= 0.99 && sum == r.total_set_size,
          fmt("k/n = %.4f, %.1f%% of vertices within 5%% (%.1f%% within 10%%), max 3-sigma radius %.2e, count "
              "identity %s",
              r.predicted_vertex, 100 * within, 100 * within10, rad, sum == r.total_set_size ? "exact" : "broken")};
}

// 7. Pair coverage of sampled non-edges.
Outcome pair_coverage() {
  const auto r = membership_report();
  std::vector<double> freqs;
  double rad = 0.0;
  for (const auto& pe : r.pairs) {
    freqs.push_back(pe.freq);
    rad = std::max(rad, pe.ci_radius);
  }
  const double within = fraction_within(freqs, r.predicted_pair, 0.15);
  const double within30 = fraction_within(freqs, r.predicted_pair, 0.30);
  return {within >= 0.95,
          fmt("%zu pairs, (k/n)^2 = %.3e, %.1f%% within 15%% (%.1f%% within 30%%), max 3-sigma radius %.2e",
              r.pairs.size(), r.predicted_pair, 100 * within, 100 * within30, rad)};
}

// 8. Uniform versus greedy on a complete bipartite host.
Outcome bipartite_divergence() {
  const Graph g = complete_bipartite(10, 20);
  const auto all = oracle::independent_sets(g, 3);
  std::size_t with01 = 0;
  for (const auto& s : all) with01 += s[0] == 0 && s[1] == 1;
  const double uniform_oracle = static_cast<double>(with01) / static_cast<double>(all.size());
  double greedy_oracle = 0.0;
  for (const auto& [set, prob] : oracle::greedy_distribution(g, 3))
    if (set.size() >= 2 && set[0] == 0 && set[1] == 1) greedy_oracle += prob;
  const auto r = bipartite_comparison(10, 20, 3, 1'000'000, 8, threads());
  const auto eq = bipartite_comparison(10, 10, 3, 1'000'000, 9, threads());
  const bool exact_ok = std::abs(uniform_oracle - 8.0 / 1260) < 1e-15 && std::abs(greedy_oracle - 1.0 / 45) < 1e-15 &&
                        std::abs(r.uniform_exact - uniform_oracle) < 1e-15 &&
                        std::abs(r.greedy_exact - greedy_oracle) < 1e-15;
  const bool mc_ok = std::abs(r.z_score) <= 3.0 && std::abs(r.ratio_mc - 3.5) <= 3 * r.ratio_mc_sigma &&
                     std::abs(eq.ratio_mc - 1.0) <= 3 * eq.ratio_mc_sigma;
  return {exact_ok && mc_ok,
          fmt("oracle %zu/%zu and %.6f; greedy MC %.6f (z = %.2f), ratio %.3f +- %.3f; a = b ratio %.3f +- %.3f",
              with01, all.size(), greedy_oracle, r.greedy_mc, r.z_score, r.ratio_mc, r.ratio_mc_sigma, eq.ratio_mc,
              eq.ratio_mc_sigma)};
}

// 9. Cover completeness.
Outcome cover_completeness() {
  bool ok = true;
  std::string d;
  for (std::uint64_t h = 1; h <= 3; ++h) {
    const Graph g = gnp_sample(300, 0.1, h);
    const ParamSet ps = derive_params(300, 0.1, 0.5);
    const auto bf = bound_formulas(ps);
    const auto th = build_theta1_adaptive(g, ps, h, bf.t_theta1);
    const auto rt = verify_cover(g, th.cover);
    const auto pd = build_pdim_adaptive(g, ps, bf.s_pdim, h, 1'000'000);
    const auto rp = verify_cover(g, pd.cover);
    ok = ok && th.complete && rt.uncovered.empty() && th.count <= bf.t_theta1 && pd.complete && rp.uncovered.empty();
    d += fmt("%sseed %llu: theta1 %zu <= %zu, %.0f%%; pdim %zu partitions (C = %.2f), %.0f%%", h > 1 ? "; " : "",
             static_cast<unsigned long long>(h), th.count, bf.t_theta1, 100 * rt.covered_fraction, pd.count,
             pd.multiplier, 100 * rp.covered_fraction);
  }
  return {ok, d};
}

// 10. Scaling of adaptive cover counts with n^2 log n / k^2.
Outcome scaling_shape() {
  std::vector<double> xs, ys;
  std::string d;
  for (std::size_t n : {200, 300, 400}) {
    const ParamSet ps = derive_params(n, 0.1, 0.5);
    double mean_log = 0.0;
    const int hosts = 8;
    for (int h = 0; h < hosts; ++h) {
      const Graph g = gnp_sample(n, 0.1, 700 + h);
      mean_log += std::log(static_cast<double>(build_theta1_adaptive(g, ps, h, 10'000'000).count));
    }
    mean_log /= hosts;
    const double nn = static_cast<double>(n), kk = static_cast<double>(ps.k);
    xs.push_back(std::log(nn * nn * std::log(nn) / (kk * kk)));
    ys.push_back(mean_log);
    d += fmt("n=%zu k=%zu count %.0f; ", n, ps.k, std::exp(mean_log));
  }
  const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - 1.0) <= 0.25, d + fmt("log-log slope %.3f (predicted 1)", slope)};
}

// 11. Closed forms against 50-digit recomputation; monotonicity.
Outcome formula_evaluators() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> up(0.01, 0.6);
  std::size_t points = 0, bad = 0;
  while (points < 20) {
    const std::size_t n = 200 + rng() % 100000;
    const double p = up(rng);
    const ParamSet ps = derive_params(n, p, 0.5);
    ++points;
    const hp::Real N(n), P(p);
    const unsigned i = static_cast<unsigned>(rng() % (ps.k + 1));
    const auto b = bound_formulas(ps, 1.5);
    const double t = up(rng) * 100, s = up(rng) * 1000, r = up(rng);
    const bool ok = hp::agrees(ps.f0, hp::f0(N, P)) && hp::agrees(expected_degree(ps, i), hp::expected_degree(N, P, i)) &&
                    hp::agrees(error_f(ps, i), hp::error_f(N, P, i)) &&
                    hp::agrees(failure_prob_bound(ps), hp::failure(N, P)) && b.s_pdim == hp::s_pdim(N, ps.k) &&
                    b.t_pdim == hp::t_pdim(N, ps.k, hp::Real(1.5)) && b.t_theta1 == hp::t_theta1(N, ps.k) &&
                    hp::agrees(b.mrss_lower, hp::mrss(N, P)) && hp::agrees(freedman_bound(t, s, r), hp::freedman(t, s, r)) &&
                    hp::agrees(chernoff_bound(s, t), hp::chernoff(s, t)) && ps.k == hp::k_of(N, P, hp::Real(0.5));
    bad += !ok;
  }
  std::size_t mono_bad = 0;
  std::uniform_real_distribution<double> u(0.01, 500.0);
  for (int rep = 0; rep < 1000; ++rep) {
    double t1 = u(rng), t2 = u(rng), s = u(rng), r = u(rng) / 100;
    if (t1 > t2) std::swap(t1, t2);
    if (freedman_bound(t1, s, r) < freedman_bound(t2, s, r) || chernoff_bound(s, t1) < chernoff_bound(s, t2)) ++mono_bad;
    const ParamSet ps = fixed_length_params(1000 + rng() % 100000, 0.01 + (rng() % 50) / 100.0, 10);
    for (std::size_t i = 1; i <= 10; ++i)
      if (!(expected_degree(ps, i) < expected_degree(ps, i - 1)) || !(error_f(ps, i) > error_f(ps, i - 1))) {
        ++mono_bad;
        break;
      }
  }
  return {bad == 0 && mono_bad == 0,
          fmt("%zu points at 12 significant digits, %zu disagree; 1000 monotonicity triples, %zu break", points, bad,
              mono_bad)};
}

// 12. Typicality rate.
Outcome typicality_rate() {
  const ParamSet ps = derive_params(2000, 0.05, 0.5);
  std::size_t pass = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = gnp_sample(2000, 0.05, seed);
    TypicalityOptions opt;
    opt.threads = threads();
    opt.max_recorded = 10;
    const auto rep = is_typical(g, ps, seed, opt);
    pass += rep.typical;
    worst = std::max({worst, rep.p1.margin, rep.p2.margin, rep.p3.margin});
  }
  return {pass >= 99, fmt("%zu/100 hosts typical, largest margin %.3f", pass, worst)};
}

// 13. Byte-identical CLI output at any thread count.
Outcome cli_determinism() {
  const std::vector<std::vector<std::string>> cmds{
      {"gen", "--n", "200", "--p", "0.1", "--graph-seed", "3"},
      {"run", "--n", "500", "--p", "0.05", "--seed", "2"},
      {"run", "--n", "500", "--p", "0.05", "--trials", "64", "--seed", "2"},
      {"run", "--n", "500", "--p", "0.05", "--increments", "--seed", "2"},
      {"typical", "--n", "600", "--p", "0.05", "--seed", "2"},
      {"cover", "--n", "200", "--p", "0.1", "--seed", "2"},
      {"cover", "--n", "200", "--p", "0.1", "--mode", "pdim", "--seed", "2"},
      {"cover", "--n", "200", "--p", "0.1", "--mode", "adaptive", "--seed", "2"},
      {"estimate", "--n", "200", "--p", "0.1", "--trials", "20000", "--seed", "2"},
      {"estimate", "--what", "chain", "--n", "200", "--p", "0.1", "--trials", "20000", "--seed", "2"},
      {"estimate", "--what", "bipartite", "--a", "10", "--b", "20", "--k", "3", "--trials", "100000"},
      {"bounds", "--n", "1000", "--p", "0.05"}};
  std::size_t differing = 0, invocations = 0;
  for (const auto& base : cmds) {
    std::string first;
    for (const char* th : {"1", "2", "4", "1"}) {
      std::vector<std::string> args{"rgis"};
      args.insert(args.end(), base.begin(), base.end());
      args.insert(args.end(), {"--threads", th});
      std::vector<const char*> argv;
      for (auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
      ++invocations;
      const std::string text = std::to_string(code) + out.str();
      if (first.empty()) first = text;
      else if (text != first) ++differing;
    }
  }
  return {differing == 0, fmt("%zu commands x threads 1/2/4/1 (%zu invocations), %zu differ", cmds.size(),
                              invocations, differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"process state matches brute-force recomputation", process_state_oracle},
      {"independence and disjointness invariants", independence_invariant},
      {"increment cap and freezing", increment_cap_and_freezing},
      {"drift signs of X- and X+", drift_signs},
      {"envelope adherence", envelope_adherence},
      {"vertex membership uniformity", vertex_uniformity},
      {"pair coverage", pair_coverage},
      {"bipartite divergence", bipartite_divergence},
      {"cover completeness", cover_completeness},
      {"cover count scaling shape", scaling_shape},
      {"formula evaluators", formula_evaluators},
      {"typicality rate", typicality_rate},
      {"CLI determinism", cli_determinism}};
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("[%s] %zu %s (%s; %.1fs)\n", o.pass ? "PASS" : "FAIL", c + 1, criteria[c].first, o.details.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
