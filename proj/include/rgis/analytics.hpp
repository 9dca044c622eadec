#pragma once

// Closed-form quantities of the greedy independent set analysis: process
// length, expected degree trajectory, error envelope, tail bounds and the
// cover-size formulas. All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgis/error.hpp"

namespace rgis {

struct ParamSet {
  std::size_t n = 0;
  double p = 0.0;
  double k_coef = 0.0;  // 0 when k was fixed explicitly
  std::size_t k = 0;
  double f0 = 0.0;
  double delta2 = 0.0;
  std::optional<double> epsilon;
};

/// Initial error 4 log n sqrt(log(pn)/(pn) + p). Requires pn > 1.
inline double initial_error(std::size_t n, double p) {
  const double pn = p * static_cast<double>(n);
  return 4.0 * std::log(static_cast<double>(n)) * std::sqrt(std::log(pn) / pn + p);
}

/// Codegree cap 4 p^2 n + 2^7 log n.
inline double codegree_cap(std::size_t n, double p) {
  return 4.0 * p * p * static_cast<double>(n) + 128.0 * std::log(static_cast<double>(n));
}

/// k = floor(k_coef / p * log(pn)).
inline ParamSet derive_params(std::size_t n, double p, double k_coef) {
  if (n < 2) throw DomainError("derive_params: n must be at least 2");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("derive_params: p must lie in (0, 1)");
  if (!(k_coef > 0.0)) throw DomainError("derive_params: k_coef must be positive");
  const double pn = p * static_cast<double>(n);
  if (!(pn > 1.0)) throw DomainError("derive_params: log pn nonpositive (pn = " + std::to_string(pn) + ")");
  const double k_real = std::floor(k_coef / p * std::log(pn));
  if (k_real < 1.0) throw DomainError("derive_params: degenerate process length (k < 1)");
  ParamSet ps;
  ps.n = n;
  ps.p = p;
  ps.k_coef = k_coef;
  ps.k = static_cast<std::size_t>(k_real);
  ps.f0 = initial_error(n, p);
  ps.delta2 = codegree_cap(n, p);
  return ps;
}

/// The unscaled choice k_coef = epsilon * 2^-10.
inline ParamSet derive_params_epsilon(std::size_t n, double p, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  ParamSet ps = derive_params(n, p, epsilon / 1024.0);
  ps.epsilon = epsilon;
  return ps;
}

/// Parameters with an explicitly chosen process length. Where pn <= 1 the
/// error formula is undefined and f0 is set to 0 (a zero-width envelope).
inline ParamSet fixed_length_params(std::size_t n, double p, std::size_t k) {
  if (n < 1) throw DomainError("fixed_length_params: n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("fixed_length_params: p must lie in [0, 1]");
  if (k < 1) throw DomainError("fixed_length_params: k must be at least 1");
  ParamSet ps;
  ps.n = n;
  ps.p = p;
  ps.k = k;
  const double pn = p * static_cast<double>(n);
  ps.f0 = (pn > 1.0 && p < 1.0) ? initial_error(n, p) : 0.0;
  ps.delta2 = codegree_cap(n, p);
  return ps;
}

/// Multiplies f0 (hence every f_i) and delta2 by factor.
inline ParamSet scaled(ParamSet ps, double factor) {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  ps.f0 *= factor;
  ps.delta2 *= factor;
  return ps;
}

inline void check_step(const ParamSet& ps, std::size_t i) {
  if (i > ps.k) throw DomainError("step " + std::to_string(i) + " exceeds k = " + std::to_string(ps.k));
}

/// d~_i = (1-p)^i p n, without the step-range check.
inline double expected_degree_at(const ParamSet& ps, std::size_t i) {
  return std::pow(1.0 - ps.p, static_cast<double>(i)) * ps.p * static_cast<double>(ps.n);
}

/// f_i = ((1+16p)/(1-p))^i f0, without the step-range check.
inline double error_at(const ParamSet& ps, std::size_t i) {
  return std::pow((1.0 + 16.0 * ps.p) / (1.0 - ps.p), static_cast<double>(i)) * ps.f0;
}

inline double expected_degree(const ParamSet& ps, std::size_t i) {
  check_step(ps, i);
  return expected_degree_at(ps, i);
}

inline double error_f(const ParamSet& ps, std::size_t i) {
  check_step(ps, i);
  return error_at(ps, i);
}

/// Expected active-set size (1-p)^i n.
inline double expected_active(const ParamSet& ps, std::size_t i) {
  return std::pow(1.0 - ps.p, static_cast<double>(i)) * static_cast<double>(ps.n);
}

struct EnvelopePoint {
  std::size_t i = 0;
  double d_tilde = 0.0;
  double f_i = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double active_lower = 0.0;
  double active_upper = 0.0;
};

inline EnvelopePoint envelope_at(const ParamSet& ps, std::size_t i) {
  EnvelopePoint e;
  e.i = i;
  e.d_tilde = expected_degree_at(ps, i);
  e.f_i = error_at(ps, i);
  e.lower = (1.0 - e.f_i) * e.d_tilde;
  e.upper = (1.0 + e.f_i) * e.d_tilde;
  const double mu = expected_active(ps, i);
  e.active_lower = (1.0 - e.f_i) * mu;
  e.active_upper = (1.0 + e.f_i) * mu;
  return e;
}

inline EnvelopePoint envelope(const ParamSet& ps, std::size_t i) {
  check_step(ps, i);
  return envelope_at(ps, i);
}

/// Freedman tail exp(-t^2 / (2(s + R t))), clamped to [0, 1].
inline double freedman_bound(double t, double s, double R) {
  if (!(t > 0.0)) throw DomainError("freedman_bound: t must be positive");
  if (!(s > 0.0)) throw DomainError("freedman_bound: s must be positive");
  if (!(R >= 0.0)) throw DomainError("freedman_bound: R must be nonnegative");
  return std::clamp(std::exp(-t * t / (2.0 * (s + R * t))), 0.0, 1.0);
}

/// Two-sided binomial tail 2 exp(-t^2 / (2 mean + t)), clamped to [0, 1].
inline double chernoff_bound(double mean, double t) {
  if (!(mean >= 0.0)) throw DomainError("chernoff_bound: mean must be nonnegative");
  if (!(t >= 0.0)) throw DomainError("chernoff_bound: t must be nonnegative");
  if (t == 0.0) return 1.0;
  return std::clamp(2.0 * std::exp(-t * t / (2.0 * mean + t)), 0.0, 1.0);
}

/// Cap on the quadratic variation of the tracked degree processes: 2^9 (p^3 n^2 + p n log n).
inline double variation_cap(const ParamSet& ps) {
  const double n = static_cast<double>(ps.n);
  return 512.0 * (ps.p * ps.p * ps.p * n * n + ps.p * n * std::log(n));
}

/// Per-step increment cap 6 p^2 n + 2^7 log n.
inline double increment_cap(const ParamSet& ps) {
  const double n = static_cast<double>(ps.n);
  return 6.0 * ps.p * ps.p * n + 128.0 * std::log(n);
}

/// Cap on the conditional mean absolute increment at step i: 3 p d~_{i-1}.
inline double mean_increment_cap(const ParamSet& ps, std::size_t i) {
  return 3.0 * ps.p * expected_degree_at(ps, i == 0 ? 0 : i - 1);
}

/// n^(-2^-11 log pn), clamped to [0, 1]. Requires pn > 1.
inline double failure_prob_bound(const ParamSet& ps) {
  const double n = static_cast<double>(ps.n);
  const double pn = ps.p * n;
  if (!(pn > 1.0)) throw DomainError("failure_prob_bound: requires pn > 1");
  return std::clamp(std::exp(-std::log(n) * std::log(pn) / 2048.0), 0.0, 1.0);
}

struct BoundFormulas {
  std::size_t s_pdim = 0;
  std::uint64_t t_pdim = 0;
  std::uint64_t t_theta1 = 0;
  double mrss_lower = 0.0;
};

inline BoundFormulas bound_formulas(const ParamSet& ps, double c_eps = 1.0) {
  if (!(c_eps > 0.0)) throw DomainError("bound_formulas: c_eps must be positive");
  const double n = static_cast<double>(ps.n);
  const double k = static_cast<double>(ps.k);
  const double logn = std::log(n);
  BoundFormulas b;
  b.s_pdim = (ps.n + ps.k - 1) / ps.k;
  b.t_pdim = static_cast<std::uint64_t>(std::ceil(c_eps * n * logn / k));
  b.t_theta1 = static_cast<std::uint64_t>(std::ceil(6.0 * n * n * logn / (k * k)));
  b.mrss_lower = ps.p * n * std::log(1.0 / ps.p) / (5.0 * logn);
  return b;
}

/// Numerical sanity checks of the asymptotic regime at concrete (n, p).
struct RegimeCheck {
  std::optional<bool> in_asymptotic_range;  // known only when epsilon is recorded
  double f_k = 0.0;
  bool f_k_below_one = false;
  double delta2 = 0.0;
  double first_width = 0.0;  // f_1 * d~_1
  bool delta2_below_width = false;
  std::vector<std::string> warnings;
};

inline RegimeCheck regime_check(const ParamSet& ps) {
  RegimeCheck r;
  const double n = static_cast<double>(ps.n);
  if (ps.epsilon) {
    const double eps = *ps.epsilon;
    const double lo = std::pow(std::log(n), 2.0 + eps) / n;
    const double hi = std::pow(n, -eps);
    r.in_asymptotic_range = (lo <= ps.p && ps.p < hi);
  }
  r.f_k = error_at(ps, ps.k);
  r.f_k_below_one = r.f_k < 1.0;
  r.delta2 = ps.delta2;
  r.first_width = error_at(ps, 1) * expected_degree_at(ps, 1);
  r.delta2_below_width = ps.delta2 < r.first_width;
  if (!r.f_k_below_one)
    r.warnings.push_back("f_k = " + std::to_string(r.f_k) + " >= 1: degree envelope is vacuous at this scale");
  if (!r.delta2_below_width)
    r.warnings.push_back("delta2 = " + std::to_string(ps.delta2) + " >= f_1 d~_1 = " +
                         std::to_string(r.first_width) + ": codegree cap exceeds the first envelope width");
  return r;
}

}  // namespace rgis
