#pragma once

// JSON and CSV renderings of every report type. JSON is canonical; CSV
// writers emit flat tables and say so in a leading comment line.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rgis/analytics.hpp"
#include "rgis/cover.hpp"
#include "rgis/montecarlo.hpp"
#include "rgis/process.hpp"
#include "rgis/typicality.hpp"

namespace rgis {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json set_json(const VertexSet& s) { return Json(s.members()); }

inline void to_json(Json& j, const ParamSet& ps) {
  j = Json{{"n", ps.n}, {"p", ps.p}, {"k_coef", ps.k_coef}, {"k", ps.k},
           {"f0", ps.f0}, {"delta2", ps.delta2}, {"epsilon", opt(ps.epsilon)}};
}

inline void to_json(Json& j, const EnvelopePoint& e) {
  j = Json{{"i", e.i},         {"d_tilde", e.d_tilde},           {"f_i", e.f_i},
           {"lower", e.lower}, {"upper", e.upper},               {"active_lower", e.active_lower},
           {"active_upper", e.active_upper}};
}

inline void to_json(Json& j, const BoundFormulas& b) {
  j = Json{{"s_pdim", b.s_pdim}, {"t_pdim", b.t_pdim}, {"t_theta1", b.t_theta1}, {"mrss_lower", b.mrss_lower}};
}

inline void to_json(Json& j, const RegimeCheck& r) {
  j = Json{{"in_asymptotic_range", opt(r.in_asymptotic_range)},
           {"f_k", r.f_k},
           {"f_k_below_one", r.f_k_below_one},
           {"delta2", r.delta2},
           {"first_width", r.first_width},
           {"delta2_below_width", r.delta2_below_width},
           {"warnings", r.warnings}};
}

inline void to_json(Json& j, const StepRecord& r) {
  j = Json{{"i", r.i},
           {"chosen", opt(r.chosen_vertex)},
           {"active_size", r.active_size},
           {"deg_min", opt(r.deg_min)},
           {"deg_max", opt(r.deg_max)},
           {"deg_mean", opt(r.deg_mean)},
           {"d_tilde", r.d_tilde},
           {"f_i", r.f_i},
           {"in_envelope", r.in_envelope}};
}

inline void to_json(Json& j, const ProcessRun& r) {
  Json sigma = Json::array();
  for (std::size_t v = 0; v < r.sigma.size(); ++v)
    sigma.push_back(r.survived[v] ? Json(nullptr) : Json(r.sigma[v]));
  j = Json{{"params", r.params},
           {"seed", r.seed},
           {"completed_steps", r.completed_steps},
           {"tau", r.tau},
           {"first_violation", opt(r.first_violation)},
           {"chosen", r.chosen},
           {"records", r.records},
           {"sigma", sigma},
           {"sigma_sentinel", r.completed_steps + 1}};
}

inline void to_json(Json& j, const TrackedSeries& s) {
  j = Json{{"v", s.v},          {"sigma", s.sigma},       {"survived", s.survived},
           {"rho", s.rho},      {"x_minus", s.x_minus},   {"x_plus", s.x_plus},
           {"dx_minus", s.dx_minus}, {"dx_plus", s.dx_plus}};
  if (!s.m.empty()) {
    j["m"] = s.m;
    j["q"] = s.q;
  }
}

inline void to_json(Json& j, const IncrementStats& s) {
  j = Json{{"params", s.params},
           {"seed", s.seed},
           {"completed_steps", s.completed_steps},
           {"tau", s.tau},
           {"max_abs_increment", s.max_abs_increment},
           {"mean_abs_increment", s.mean_abs_increment},
           {"bound_abs", s.bound_abs},
           {"bound_violations", s.bound_violations},
           {"frozen_nonzero", s.frozen_nonzero},
           {"bound_mean", s.bound_mean},
           {"series", s.series}};
}

inline void to_json(Json& j, const StepAggregate& a) {
  j = Json{{"i", a.i},
           {"runs_reaching", a.runs_reaching},
           {"mean_active", a.mean_active},
           {"ratio_samples", a.ratio_samples},
           {"mean_degree_ratio", a.mean_degree_ratio},
           {"min_degree_ratio", a.min_degree_ratio},
           {"max_degree_ratio", a.max_degree_ratio},
           {"increment_samples", a.increment_samples},
           {"dx_minus_mean", a.dx_minus_mean},
           {"dx_minus_se", a.dx_minus_se},
           {"dx_plus_mean", a.dx_plus_mean},
           {"dx_plus_se", a.dx_plus_se}};
}

inline void to_json(Json& j, const EnsembleSummary& s) {
  j = Json{{"params", s.params},
           {"seed", s.seed},
           {"trials", s.trials},
           {"tracked", s.tracked},
           {"clean_runs", s.clean_runs},
           {"clean_fraction", s.clean_fraction},
           {"shortest_run", s.shortest_run},
           {"max_abs_increment", s.max_abs_increment},
           {"bound_abs", s.bound_abs},
           {"bound_violations", s.bound_violations},
           {"frozen_nonzero", s.frozen_nonzero},
           {"steps", s.steps}};
}

inline void to_json(Json& j, const P1Violation& v) {
  j = Json{{"set", v.set}, {"observed", v.observed}, {"lo", v.lo}, {"hi", v.hi}};
}
inline void to_json(Json& j, const P2Violation& v) {
  j = Json{{"v", v.v}, {"degree", v.degree}, {"lo", v.lo}, {"hi", v.hi}};
}
inline void to_json(Json& j, const P3Violation& v) {
  j = Json{{"u", v.u}, {"v", v.v}, {"codegree", v.codegree}};
}

inline void to_json(Json& j, const ExpectationRow& r) {
  j = Json{{"s", r.s}, {"e_s", r.e_s}, {"mu_s", r.mu_s}, {"above_threshold", r.above_threshold}};
}

inline void to_json(Json& j, const TypicalityReport& r) {
  j = Json{{"params", r.params},
           {"strict_factor", r.strict_factor},
           {"typical", r.typical},
           {"p1_mode", r.p1_mode},
           {"p1",
            {{"subsets_tested", r.p1.subsets_tested},
             {"max_size_tested", r.p1.max_size_tested},
             {"uniform_tested", r.p1.uniform_tested},
             {"prefix_tested", r.p1.prefix_tested},
             {"violation_count", r.p1.violation_count},
             {"margin", r.p1.margin},
             {"violations", r.p1.violations}}},
           {"p2", {{"violation_count", r.p2.violation_count}, {"margin", r.p2.margin}, {"violations", r.p2.violations}}},
           {"p3",
            {{"mode", r.p3.exhaustive ? "exhaustive" : "sampled"},
             {"pairs_tested", r.p3.pairs_tested},
             {"max_codegree", r.p3.max_codegree},
             {"delta2", r.p3.delta2},
             {"violation_count", r.p3.violation_count},
             {"margin", r.p3.margin},
             {"violations", r.p3.violations}}},
           {"e_table", r.e_table}};
}

inline void to_json(Json& j, const Cover& c) {
  Json sets = Json::array();
  for (const auto& s : c.sets) sets.push_back(set_json(s));
  j = Json{{"host_n", c.host_n}, {"sets", sets}};
}

inline void to_json(Json& j, const PartitionCover& c) {
  Json parts = Json::array();
  for (const auto& part : c.partitions) {
    Json cells = Json::array();
    for (const auto& s : part) cells.push_back(set_json(s));
    parts.push_back(cells);
  }
  j = Json{{"host_n", c.host_n}, {"copies_per_partition", c.copies_per_partition}, {"partitions", parts}};
}

inline void to_json(Json& j, const BoundComparison& b) {
  j = Json{{"t_formula", b.t_formula},
           {"mrss_lower", b.mrss_lower},
           {"adaptive_count", opt(b.adaptive_count)},
           {"multiplier", opt(b.multiplier)}};
}

inline void to_json(Json& j, const CoverReport& r) {
  Json unc = Json::array();
  for (auto [u, v] : r.uncovered) unc.push_back({u, v});
  j = Json{{"total_sets", r.total_sets},
           {"singleton_sets", r.singleton_sets},
           {"non_edges", r.non_edges},
           {"covered", r.covered},
           {"covered_fraction", r.covered_fraction},
           {"uncovered", unc},
           {"bound_comparison", r.bound_comparison ? Json(*r.bound_comparison) : Json(nullptr)}};
}

inline void to_json(Json& j, const PairEstimate& e) {
  j = Json{{"u", e.u}, {"v", e.v}, {"count", e.count}, {"freq", e.freq}, {"ci_radius", e.ci_radius}};
}

inline void to_json(Json& j, const EstimateReport& r) {
  j = Json{{"n", r.n},
           {"k", r.k},
           {"trials", r.trials},
           {"seed", r.seed},
           {"predicted_vertex", r.predicted_vertex},
           {"predicted_pair", r.predicted_pair},
           {"total_set_size", r.total_set_size},
           {"vertex_counts", r.vertex_counts},
           {"per_vertex_freq", r.per_vertex_freq},
           {"vertex_ci_radius", r.vertex_ci_radius},
           {"pairs", r.pairs}};
}

inline void to_json(Json& j, const ChainCell& c) {
  j = Json{{"t", c.t},
           {"case", to_string(c.kind)},
           {"conditioned", c.conditioned},
           {"survived", c.survived},
           {"freq", opt(c.freq)},
           {"insufficient", c.insufficient},
           {"predicted", c.predicted},
           {"predicted_rel_error", c.predicted_rel_error},
           {"ratio", opt(c.ratio)}};
}

inline void to_json(Json& j, const ConditionalEstimate& e) {
  j = Json{{"i", e.i},
           {"j", e.j},
           {"u", e.u},
           {"v", e.v},
           {"trials", e.trials},
           {"seed", e.seed},
           {"initial", e.initial},
           {"joint_count", e.joint_count},
           {"joint_freq", e.joint_freq},
           {"joint_sigma", e.joint_sigma},
           {"chain_product", e.chain_product},
           {"chain_prediction", e.chain_prediction},
           {"plain_target", e.plain_target},
           {"cells", e.cells}};
}

inline void to_json(Json& j, const BipartiteComparison& b) {
  j = Json{{"a", b.a},
           {"b", b.b},
           {"k", b.k},
           {"trials", b.trials},
           {"seed", b.seed},
           {"uniform_exact", b.uniform_exact},
           {"greedy_exact", b.greedy_exact},
           {"ratio_exact", b.ratio_exact},
           {"greedy_hits", b.greedy_hits},
           {"greedy_mc", b.greedy_mc},
           {"greedy_mc_sigma", b.greedy_mc_sigma},
           {"ratio_mc", b.ratio_mc},
           {"ratio_mc_sigma", b.ratio_mc_sigma},
           {"z_score", b.z_score}};
}

// ---------------------------------------------------------------------------
// CSV

namespace csv {

inline void lossy_note(std::ostream& os) { os << "# flat table; JSON output carries the full report\n"; }

template <class T>
std::string cell(const std::optional<T>& v) {
  return v ? Json(*v).dump() : std::string();
}

inline std::string num(double x) { return Json(x).dump(); }

inline void write(std::ostream& os, const ProcessRun& r) {
  lossy_note(os);
  os << "i,chosen,active_size,deg_min,deg_max,deg_mean,d_tilde,f_i,in_envelope\n";
  for (const auto& s : r.records)
    os << s.i << ',' << cell(s.chosen_vertex) << ',' << s.active_size << ',' << cell(s.deg_min) << ','
       << cell(s.deg_max) << ',' << cell(s.deg_mean) << ',' << num(s.d_tilde) << ',' << num(s.f_i) << ','
       << (s.in_envelope ? 1 : 0) << '\n';
}

inline void write(std::ostream& os, const EnsembleSummary& s) {
  lossy_note(os);
  os << "i,runs_reaching,mean_active,mean_degree_ratio,min_degree_ratio,max_degree_ratio,increment_samples,"
        "dx_minus_mean,dx_minus_se,dx_plus_mean,dx_plus_se\n";
  for (const auto& a : s.steps)
    os << a.i << ',' << a.runs_reaching << ',' << num(a.mean_active) << ',' << num(a.mean_degree_ratio) << ','
       << num(a.min_degree_ratio) << ',' << num(a.max_degree_ratio) << ',' << a.increment_samples << ','
       << num(a.dx_minus_mean) << ',' << num(a.dx_minus_se) << ',' << num(a.dx_plus_mean) << ','
       << num(a.dx_plus_se) << '\n';
}

inline void write(std::ostream& os, const TypicalityReport& r) {
  lossy_note(os);
  os << "check,violations,margin\n";
  os << "p1," << r.p1.violation_count << ',' << num(r.p1.margin) << '\n';
  os << "p2," << r.p2.violation_count << ',' << num(r.p2.margin) << '\n';
  os << "p3," << r.p3.violation_count << ',' << num(r.p3.margin) << '\n';
}

inline void write(std::ostream& os, const CoverReport& r) {
  lossy_note(os);
  os << "total_sets,singleton_sets,non_edges,covered,covered_fraction,t_formula,adaptive_count,multiplier\n";
  os << r.total_sets << ',' << r.singleton_sets << ',' << r.non_edges << ',' << r.covered << ','
     << num(r.covered_fraction) << ',';
  if (r.bound_comparison)
    os << r.bound_comparison->t_formula << ',' << cell(r.bound_comparison->adaptive_count) << ','
       << cell(r.bound_comparison->multiplier);
  else
    os << ",,";
  os << '\n';
}

inline void write(std::ostream& os, const EstimateReport& r) {
  lossy_note(os);
  os << "kind,u,v,count,freq,ci_radius,predicted\n";
  for (std::size_t v = 0; v < r.n; ++v)
    os << "vertex," << v << ",," << r.vertex_counts[v] << ',' << num(r.per_vertex_freq[v]) << ','
       << num(r.vertex_ci_radius[v]) << ',' << num(r.predicted_vertex) << '\n';
  for (const auto& p : r.pairs)
    os << "pair," << p.u << ',' << p.v << ',' << p.count << ',' << num(p.freq) << ',' << num(p.ci_radius) << ','
       << num(r.predicted_pair) << '\n';
}

inline void write(std::ostream& os, const ConditionalEstimate& e) {
  lossy_note(os);
  os << "t,case,conditioned,survived,freq,insufficient,predicted,predicted_rel_error,ratio\n";
  for (const auto& c : e.cells)
    os << c.t << ',' << to_string(c.kind) << ',' << c.conditioned << ',' << c.survived << ',' << cell(c.freq) << ','
       << (c.insufficient ? 1 : 0) << ',' << num(c.predicted) << ',' << num(c.predicted_rel_error) << ','
       << cell(c.ratio) << '\n';
}

inline void write(std::ostream& os, const BipartiteComparison& b) {
  lossy_note(os);
  os << "a,b,k,trials,uniform_exact,greedy_exact,ratio_exact,greedy_mc,greedy_mc_sigma,ratio_mc,ratio_mc_sigma,"
        "z_score\n";
  os << b.a << ',' << b.b << ',' << b.k << ',' << b.trials << ',' << num(b.uniform_exact) << ','
     << num(b.greedy_exact) << ',' << num(b.ratio_exact) << ',' << num(b.greedy_mc) << ','
     << num(b.greedy_mc_sigma) << ',' << num(b.ratio_mc) << ',' << num(b.ratio_mc_sigma) << ','
     << num(b.z_score) << '\n';
}

inline void write(std::ostream& os, const ParamSet& ps, const BoundFormulas& b) {
  lossy_note(os);
  os << "n,p,k,f0,delta2,s_pdim,t_pdim,t_theta1,mrss_lower\n";
  os << ps.n << ',' << num(ps.p) << ',' << ps.k << ',' << num(ps.f0) << ',' << num(ps.delta2) << ',' << b.s_pdim
     << ',' << b.t_pdim << ',' << b.t_theta1 << ',' << num(b.mrss_lower) << '\n';
}

}  // namespace csv

}  // namespace rgis
