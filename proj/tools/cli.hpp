#pragma once

// Command-line front end: argument parsing into a RunConfig and dispatch to
// the library. Reports go to stdout (or --out) as JSON or CSV; human notes go
// to stderr.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rgis/rgis.hpp"

namespace rgis::cli {

struct RunConfig {
  std::string command;

  // host
  std::string input;
  std::string graph = "gnp";
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> graph_seed;
  std::size_t a = 0, b = 0;

  // parameters
  std::optional<double> p;
  std::optional<double> k_coef;
  std::optional<double> epsilon;
  std::optional<std::size_t> k;
  double c_eps = 1.0;

  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::optional<std::size_t> t;
  std::optional<std::size_t> s;
  std::size_t max_t = 1'000'000;

  std::string format = "json";
  std::string out;
  unsigned threads = 0;  // 0: all hardware threads; never part of the output

  // run
  bool increments = false;
  std::size_t tracked = 20;
  bool exact_mq = false;

  // typical
  std::size_t budget = 200;
  std::size_t max_size = 0;
  double strict_factor = 1.0;

  // cover
  std::string mode = "theta1";
  std::string family = "theta1";
  bool strict = false;
  bool emit_sets = false;

  // estimate
  std::string what = "membership";
  std::size_t pairs = 200;
  std::size_t i = 1, j = 2;
  std::optional<Vertex> u, v;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = 0;
};

/// Every field that influences the result; threads and the output path are left out.
inline Json config_json(const RunConfig& c) {
  Json j{{"command", c.command}};
  auto put = [&](const char* key, auto value) { j[key] = value; };
  auto put_opt = [&](const char* key, const auto& value) { j[key] = value ? Json(*value) : Json(nullptr); };
  if (c.command != "bounds" && !(c.command == "estimate" && c.what == "bipartite")) {
    if (!c.input.empty()) {
      put("input", c.input);
    } else {
      put("graph", c.graph);
      put_opt("n", c.n);
      if (c.graph == "bipartite") {
        put("a", c.a);
        put("b", c.b);
      }
      put("graph_seed", c.graph_seed.value_or(c.seed));
    }
  }
  put_opt("p", c.p);
  put_opt("k_coef", c.k_coef);
  put_opt("epsilon", c.epsilon);
  put_opt("k", c.k);
  put("seed", c.seed);
  put("format", c.format);
  if (c.command == "run") {
    put("trials", c.trials);
    put("increments", c.increments);
    put("tracked", c.tracked);
    put("exact_mq", c.exact_mq);
  } else if (c.command == "typical") {
    put("budget", c.budget);
    put("max_size", c.max_size);
    put("strict_factor", c.strict_factor);
  } else if (c.command == "cover") {
    put("mode", c.mode);
    put("family", c.family);
    put_opt("t", c.t);
    put_opt("s", c.s);
    put("max_t", c.max_t);
    put("c_eps", c.c_eps);
    put("strict", c.strict);
    put("emit_sets", c.emit_sets);
  } else if (c.command == "estimate") {
    put("what", c.what);
    put("trials", c.trials);
    if (c.what == "membership" || c.what == "pair") put("pairs", c.pairs);
    if (c.what == "chain") {
      put("i", c.i);
      put("j", c.j);
      put_opt("u", c.u);
      put_opt("v", c.v);
    }
    if (c.what == "bipartite") {
      put("a", c.a);
      put("b", c.b);
    }
  } else if (c.command == "bounds") {
    put_opt("n", c.n);
    put("c_eps", c.c_eps);
  }
  return j;
}

namespace detail {

inline void add_host_options(CLI::App* app, RunConfig& c) {
  auto* in = app->add_option("--input", c.input, "Edge-list file for the host graph");
  auto* kind = app->add_option("--graph", c.graph, "Host family when generating")
                   ->check(CLI::IsMember({"gnp", "empty", "complete", "star", "path", "cycle", "bipartite"}));
  auto* gs = app->add_option("--graph-seed", c.graph_seed, "Seed for a generated host (default: --seed)");
  auto* n = app->add_option("--n", c.n, "Vertex count of a generated host")->check(CLI::NonNegativeNumber);
  app->add_option("--a", c.a, "Part A size for bipartite hosts");
  app->add_option("--b", c.b, "Part B size for bipartite hosts");
  in->excludes(kind)->excludes(gs)->excludes(n);
}

inline void add_param_options(CLI::App* app, RunConfig& c) {
  app->add_option("--p", c.p, "Edge probability");
  auto* kc = app->add_option("--k-coef", c.k_coef, "k = floor(k_coef / p * log(pn)); default 0.5");
  auto* eps = app->add_option("--epsilon", c.epsilon, "Sets k_coef = epsilon / 1024");
  auto* k = app->add_option("--k", c.k, "Fixed process length");
  kc->excludes(eps)->excludes(k);
  eps->excludes(k);
}

inline void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--seed", c.seed, "Master seed (default 0)");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out, "Write the report here instead of stdout");
  app->add_option("--threads", c.threads, "Worker threads (output is identical for any value)");
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void validate(const RunConfig& c) {
  const bool needs_host = c.command != "bounds" && !(c.command == "estimate" && c.what == "bipartite");
  if (needs_host && c.input.empty()) {
    if (c.graph == "bipartite") {
      if (c.a + c.b == 0) throw UsageError("--graph bipartite needs --a and --b");
    } else if (!c.n) {
      throw UsageError("a host is required: pass --input FILE or --n N");
    }
    if (c.graph == "gnp" && !c.p) throw UsageError("--graph gnp needs --p");
  }
  if (c.command == "bounds" && (!c.n || !c.p)) throw UsageError("bounds needs --n and --p");
  if (needs_host && c.command != "gen" && !c.p) throw UsageError("--p is required to derive parameters");
  if (c.command == "estimate" && c.what == "bipartite" && !c.k) throw UsageError("--what bipartite needs --k");
  if (c.command == "estimate" && c.what == "chain" && c.u.has_value() != c.v.has_value())
    throw UsageError("--u and --v must be given together");
}

}  // namespace detail

/// Parses argv. On failure or --help, `config` is empty and `exit_code` is set
/// (2 for usage errors, 0 for help).
inline ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out = std::cout,
                               std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"Random greedy independent set process: runs, typicality, covers, estimates, bounds", "rgis"};
  app.require_subcommand(1, 1);

  auto* gen = app.add_subcommand("gen", "Generate a host graph as an edge list");
  detail::add_host_options(gen, c);
  gen->add_option("--p", c.p, "Edge probability for gnp");
  detail::add_common(gen, c);

  auto* run = app.add_subcommand("run", "Run the process once, as an ensemble, or with increment diagnostics");
  detail::add_host_options(run, c);
  detail::add_param_options(run, c);
  detail::add_common(run, c);
  run->add_option("--trials", c.trials, "Runs; more than 1 gives an ensemble summary")->check(CLI::PositiveNumber);
  run->add_flag("--increments", c.increments, "Record X-/X+ increments for tracked vertices");
  run->add_option("--tracked", c.tracked, "Tracked vertices for increment statistics");
  run->add_flag("--exact-mq", c.exact_mq, "Compute M_{v,j} and q_{v,j} exactly");

  auto* typ = app.add_subcommand("typical", "Check the typicality predicates P1-P3");
  detail::add_host_options(typ, c);
  detail::add_param_options(typ, c);
  detail::add_common(typ, c);
  typ->add_option("--budget", c.budget, "P1 subsets per size")->check(CLI::PositiveNumber);
  typ->add_option("--max-size", c.max_size, "Largest P1 subset size (default k)");
  typ->add_option("--strict-factor", c.strict_factor, "Scale f0, f_s and delta2 by this factor")
      ->check(CLI::Range(0.0, 1.0));

  auto* cov = app.add_subcommand("cover", "Build and verify a cover of the non-edges");
  detail::add_host_options(cov, c);
  detail::add_param_options(cov, c);
  detail::add_common(cov, c);
  cov->add_option("--mode", c.mode, "theta1 | pdim | adaptive")->check(CLI::IsMember({"theta1", "pdim", "adaptive"}));
  cov->add_option("--family", c.family, "Cover family grown in adaptive mode")
      ->check(CLI::IsMember({"theta1", "pdim"}));
  cov->add_option("--t", c.t, "Copies (theta1) or partitions (pdim); default from the bound formulas")
      ->check(CLI::PositiveNumber);
  cov->add_option("--s", c.s, "Copies per partition (default ceil(n/k))")->check(CLI::PositiveNumber);
  cov->add_option("--max-t", c.max_t, "Adaptive cap")->check(CLI::PositiveNumber);
  cov->add_option("--c-eps", c.c_eps, "Multiplier in t_pdim")->check(CLI::PositiveNumber);
  cov->add_flag("--strict", c.strict, "Exit 1 if any non-edge is left uncovered");
  cov->add_flag("--emit-sets", c.emit_sets, "Include the cover itself in the report");

  auto* est = app.add_subcommand("estimate", "Monte Carlo estimates");
  detail::add_host_options(est, c);
  detail::add_param_options(est, c);
  detail::add_common(est, c);
  est->add_option("--what", c.what, "membership | pair | chain | bipartite")
      ->check(CLI::IsMember({"membership", "pair", "chain", "bipartite"}));
  est->add_option("--trials", c.trials, "Trials")->check(CLI::PositiveNumber);
  est->add_option("--pairs", c.pairs, "Sampled non-edges");
  est->add_option("--i", c.i, "First step index (chain)");
  est->add_option("--j", c.j, "Second step index (chain)");
  est->add_option("--u", c.u, "First vertex (chain)");
  est->add_option("--v", c.v, "Second vertex (chain)");

  auto* bnd = app.add_subcommand("bounds", "Evaluate parameters, envelope and bound formulas");
  bnd->add_option("--n", c.n, "Vertex count");
  detail::add_param_options(bnd, c);
  bnd->add_option("--c-eps", c.c_eps, "Multiplier in t_pdim")->check(CLI::PositiveNumber);
  detail::add_common(bnd, c);

  try {
    app.parse(argc, argv);
    c.command = app.get_subcommands().front()->get_name();
    detail::validate(c);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return {std::nullopt, 0};
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return {std::nullopt, 0};
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return {std::nullopt, 2};
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return {std::nullopt, 2};
  }
  return {c, 0};
}

// ---------------------------------------------------------------------------
// Execution

namespace detail {

inline Graph load_host(const RunConfig& c) {
  if (!c.input.empty()) return read_edge_list_file(c.input);
  const std::size_t n = c.n.value_or(0);
  if (c.graph == "gnp") return gnp_sample(n, *c.p, c.graph_seed.value_or(c.seed));
  if (c.graph == "empty") return empty_graph(n);
  if (c.graph == "complete") return complete_graph(n);
  if (c.graph == "star") return star_graph(n);
  if (c.graph == "path") return path_graph(n);
  if (c.graph == "cycle") return cycle_graph(n);
  return complete_bipartite(c.a, c.b);
}

inline ParamSet params_for(const RunConfig& c, std::size_t n) {
  if (c.k) return fixed_length_params(n, *c.p, *c.k);
  if (c.epsilon) return derive_params_epsilon(n, *c.p, *c.epsilon);
  return derive_params(n, *c.p, c.k_coef.value_or(0.5));
}

struct Emitted {
  Json result;
  std::string csv;
  int exit_code = 0;
};

template <class T>
std::string to_csv(const T& value) {
  std::ostringstream os;
  csv::write(os, value);
  return os.str();
}

inline unsigned thread_count(const RunConfig& c) { return c.threads ? c.threads : default_threads(); }

inline Emitted do_run(const RunConfig& c, std::ostream& err) {
  const Graph host = load_host(c);
  const ParamSet ps = params_for(c, host.size());
  for (const auto& w : regime_check(ps).warnings) err << "note: " << w << "\n";
  if (c.increments) {
    VertexSet tracked(host.size());
    Stream rng(derive_seed(c.seed, streams::kTracked));
    for (auto v : sample_subset(host.size(), std::min(c.tracked, host.size()), rng)) tracked.insert(v);
    auto stats = increment_diagnostics(host, ps, tracked, c.seed, IncrementOptions{c.exact_mq});
    return {Json(stats), ""};
  }
  if (c.trials > 1) {
    auto sum = ensemble_run(host, ps, c.trials, c.seed, EnsembleOptions{c.tracked, thread_count(c)});
    return {Json(sum), to_csv(sum)};
  }
  auto r = run_process(host, ps, c.seed);
  return {Json(r), to_csv(r)};
}

inline Emitted do_typical(const RunConfig& c, std::ostream& err) {
  const Graph host = load_host(c);
  const ParamSet ps = params_for(c, host.size());
  TypicalityOptions opt;
  opt.budget = c.budget;
  opt.max_size = c.max_size;
  opt.threads = thread_count(c);
  auto rep = is_typical(host, ps, c.seed, opt, c.strict_factor);
  err << "typical: " << (rep.typical ? "yes" : "no") << "  (P1 " << rep.p1.violation_count << " violations, margin "
      << rep.p1.margin << "; P2 " << rep.p2.violation_count << ", margin " << rep.p2.margin << "; P3 "
      << rep.p3.violation_count << ", margin " << rep.p3.margin << ")\n";
  return {Json(rep), to_csv(rep)};
}

inline Emitted do_cover(const RunConfig& c, std::ostream& err) {
  const Graph host = load_host(c);
  const ParamSet ps = params_for(c, host.size());
  const BoundFormulas bf = bound_formulas(ps, c.c_eps);
  const std::size_t s = c.s.value_or(bf.s_pdim);
  const bool pdim = c.mode == "pdim" || (c.mode == "adaptive" && c.family == "pdim");
  const bool nothing_to_cover = host.non_edge_count() == 0;

  BoundComparison cmp;
  cmp.t_formula = pdim ? bf.t_pdim : bf.t_theta1;
  cmp.mrss_lower = bf.mrss_lower;
  CoverReport rep;
  Json cover_json;
  if (!pdim) {
    Cover cover{host.size(), {}};
    if (c.mode == "adaptive") {
      if (!nothing_to_cover) {
        auto ad = build_theta1_adaptive(host, ps, c.seed, c.max_t);
        cover = std::move(ad.cover);
      }
      cmp.adaptive_count = cover.sets.size();
    } else if (!nothing_to_cover) {
      cover = build_theta1_cover(host, ps, c.t.value_or(bf.t_theta1), c.seed, thread_count(c));
    }
    rep = verify_cover(host, cover);
    if (c.emit_sets) cover_json = cover;
  } else {
    PartitionCover cover{host.size(), s, {}};
    if (c.mode == "adaptive") {
      if (!nothing_to_cover) {
        auto ad = build_pdim_adaptive(host, ps, s, c.seed, c.max_t);
        cover = std::move(ad.cover);
        cmp.multiplier = ad.multiplier;
      } else {
        cmp.multiplier = 0.0;
      }
      cmp.adaptive_count = cover.partitions.size();
    } else if (!nothing_to_cover) {
      cover = build_pdim_cover(host, ps, s, c.t.value_or(bf.t_pdim), c.seed, thread_count(c));
    }
    rep = verify_cover(host, cover);
    if (c.emit_sets) cover_json = cover;
  }
  rep.bound_comparison = cmp;
  Json result{{"params", ps}, {"family", pdim ? "pdim" : "theta1"}, {"bounds", bf}, {"report", rep}};
  if (pdim) result["note"] = "partition count is reported as the idim-style upper bound proxy; pdim <= idim + 1";
  if (c.emit_sets) result["cover"] = cover_json;
  int code = 0;
  if (!rep.uncovered.empty()) {
    err << rep.uncovered.size() << " non-edges left uncovered\n";
    if (c.strict) code = 1;
  }
  return {result, to_csv(rep), code};
}

inline Emitted do_estimate(const RunConfig& c, std::ostream& err) {
  if (c.what == "bipartite") {
    auto r = bipartite_comparison(c.a, c.b, *c.k, c.trials, c.seed, thread_count(c));
    return {Json(r), to_csv(r)};
  }
  const Graph host = load_host(c);
  const ParamSet ps = params_for(c, host.size());
  if (c.what == "chain") {
    Vertex u = 0, v = 0;
    if (c.u) {
      u = *c.u;
      v = *c.v;
    } else {
      auto picked = sample_non_edges(host, 1, c.seed);
      if (picked.empty()) throw DomainError("host has no non-edges");
      std::tie(u, v) = picked.front();
    }
    auto e = estimate_conditional_chain(host, ps, c.i, c.j, u, v, c.trials, c.seed, ChainOptions{100, thread_count(c)});
    std::size_t flagged = 0;
    for (const auto& cell : e.cells) flagged += cell.insufficient;
    if (flagged) err << flagged << " chain cells have insufficient data\n";
    return {Json{{"params", ps}, {"estimate", e}}, to_csv(e)};
  }
  auto r = estimate_membership(host, ps, c.trials, c.seed, MembershipOptions{c.pairs, thread_count(c)});
  Json result{{"params", ps}, {"tolerance_note", "relative tolerances are engineering choices backed by 3-sigma radii"}};
  if (c.what == "pair") {
    result["predicted_pair"] = r.predicted_pair;
    result["trials"] = r.trials;
    result["pairs"] = r.pairs;
  } else {
    result["estimate"] = r;
  }
  return {result, to_csv(r)};
}

inline Emitted do_bounds(const RunConfig& c) {
  const ParamSet ps = params_for(c, *c.n);
  Json env = Json::array();
  for (std::size_t i = 0; i <= ps.k; ++i) env.push_back(envelope(ps, i));
  Json result{{"params", ps},
              {"bound_formulas", bound_formulas(ps, c.c_eps)},
              {"failure_prob_bound", failure_prob_bound(ps)},
              {"variation_cap", variation_cap(ps)},
              {"increment_cap", increment_cap(ps)},
              {"regime", regime_check(ps)},
              {"envelope", env}};
  std::ostringstream os;
  csv::write(os, ps, bound_formulas(ps, c.c_eps));
  return {result, os.str()};
}

}  // namespace detail

/// Runs a parsed command. Returns 0 on success, 1 on domain or I/O failure
/// (or uncovered non-edges under --strict).
inline int execute(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (c.command == "gen") {
      const std::string text = to_edge_list(detail::load_host(c));
      if (c.out.empty()) {
        out << text;
      } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!(f << text)) throw std::runtime_error("cannot write " + c.out);
      }
      return 0;
    }
    detail::Emitted em;
    if (c.command == "run") em = detail::do_run(c, err);
    else if (c.command == "typical") em = detail::do_typical(c, err);
    else if (c.command == "cover") em = detail::do_cover(c, err);
    else if (c.command == "estimate") em = detail::do_estimate(c, err);
    else em = detail::do_bounds(c);

    std::string text;
    if (c.format == "csv") {
      if (em.csv.empty()) throw DomainError("no flat table for this report; use --format json");
      text = em.csv;
    } else {
      Json doc{{"schema_version", kSchemaVersion},
               {"version", kVersion},
               {"config", config_json(c)},
               {"result", std::move(em.result)}};
      text = doc.dump(2) + "\n";
    }
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!(f << text)) throw std::runtime_error("cannot write " + c.out);
    }
    return em.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  auto parsed = parse_args(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return execute(*parsed.config, out, err);
}

}  // namespace rgis::cli
