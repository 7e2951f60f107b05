#pragma once

// Shared helpers for the test suites: deterministic sampling and relative
// error comparison.  All generators take explicit seeds so reruns are
// byte-identical.

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace testutil {

inline double rel_err(double got, double want) {
  const double scale = std::max(std::fabs(want), 1e-300);
  return std::fabs(got - want) / scale;
}

// Log-uniform on [lo, hi], lo > 0.
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline std::vector<std::pair<double, double>> log_uniform_pairs(
    std::uint64_t seed, std::size_t count, double t_lo, double t_hi,
    double a_lo, double a_hi) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = log_uniform(rng, t_lo, t_hi);
    const double a = log_uniform(rng, a_lo, a_hi);
    out.emplace_back(t, a);
  }
  return out;
}

}  // namespace testutil
