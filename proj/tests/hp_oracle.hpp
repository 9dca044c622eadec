#pragma once

// 50-digit recomputation of the closed-form quantities, written from the
// formulas directly.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace hp {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real freedman(Real t, Real s, Real r) {
  Real v = exp(-(t * t) / (2 * (s + r * t)));
  return v > 1 ? Real(1) : v;
}

inline Real chernoff(Real mean, Real t) {
  Real v = 2 * exp(-(t * t) / (2 * mean + t));
  return v > 1 ? Real(1) : v;
}

inline Real expected_degree(Real n, Real p, unsigned i) { return pow(1 - p, i) * p * n; }

inline Real f0(Real n, Real p) { return 4 * log(n) * sqrt(log(p * n) / (p * n) + p); }

inline Real error_f(Real n, Real p, unsigned i) { return pow((1 + 16 * p) / (1 - p), i) * f0(n, p); }

inline Real failure(Real n, Real p) {
  Real v = pow(n, -log(p * n) / 2048);
  return v > 1 ? Real(1) : v;
}

inline std::uint64_t k_of(Real n, Real p, Real coef) {
  return static_cast<std::uint64_t>(floor(coef / p * log(p * n)));
}

inline std::uint64_t s_pdim(Real n, std::uint64_t k) { return static_cast<std::uint64_t>(ceil(n / k)); }
inline std::uint64_t t_pdim(Real n, std::uint64_t k, Real c) {
  return static_cast<std::uint64_t>(ceil(c * n * log(n) / k));
}
inline std::uint64_t t_theta1(Real n, std::uint64_t k) {
  return static_cast<std::uint64_t>(ceil(6 * n * n * log(n) / (Real(k) * k)));
}
inline Real mrss(Real n, Real p) { return p * n * log(1 / p) / (5 * log(n)); }

/// |a - b| <= 1e-12 |b| (or absolute 1e-300 near zero).
inline bool agrees(double a, const Real& b) {
  const Real diff = abs(Real(a) - b);
  return diff <= Real("1e-12") * abs(b) || diff < Real("1e-300");
}

}  // namespace hp
