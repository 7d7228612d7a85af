#pragma once

// Verification layer binding finite-N exact quantities to the large-deviation
// and generating-function limit statements, with truncation-budget logic.

#include <cmath>
#include <vector>

#include "eginoe/asymptotics.hpp"
#include "eginoe/detail/numeric.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/probabilities.hpp"
#include "eginoe/spectrum.hpp"

namespace eginoe::asymgap {

using asymptotics::Regime;

struct LdpEstimate {
  int N = 0;
  Regime regime = Regime::strong;
  double param = 0.0;
  double scaled_log_p = 0.0;    // N^{-1/2} log p_{N,0} (strong) or N^{-1} (weak)
  double limit = 0.0;           // strong-regime limit, or the weak upper bound -d(alpha)
  int K_used = 0;
  double truncated_scaled = 0.0;  // scaled -sum_{m<=K} Tr(M^m)/m
  double remainder_exact = 0.0;   // unscaled exact remainder R_n(K)
  double remainder_bound = 0.0;   // eigenvalue-wise bound, >= remainder_exact
};

// Default truncation budget: K = ceil(10 sqrt(N) log N), capped at 10^5,
// mirroring the proof requirement K_n / sqrt(n) -> infinity at linear cost.
inline int default_truncation(int N) {
  const double k = std::ceil(10.0 * std::sqrt(static_cast<double>(N)) * std::log(static_cast<double>(N)));
  return static_cast<int>(std::min(k, 1.0e5));
}

inline LdpEstimate ldp_estimate(const spectrum::Spectrum& s, Regime regime, double param, int K) {
  if (K < 1) throw argument_error("ldp_estimate requires K >= 1");
  LdpEstimate est;
  est.N = 2 * s.n;
  est.regime = regime;
  est.param = param;
  est.K_used = K;
  const double scale = regime == Regime::strong ? std::sqrt(static_cast<double>(est.N))
                                                : static_cast<double>(est.N);
  eginoe::detail::CompensatedSum logp;
  for (double lam : s.lambdas) logp.add(std::log1p(-std::min(std::max(lam, 0.0), 1.0 - 1e-16)));
  est.scaled_log_p = logp.value() / scale;
  auto [truncated, remainder] = probabilities::log_p_zero_truncated(s, K);
  est.truncated_scaled = truncated / scale;
  est.remainder_exact = remainder;
  eginoe::detail::CompensatedSum bound;
  for (double lam : s.lambdas) {
    const double l = std::min(std::max(lam, 0.0), 1.0 - 1e-16);
    if (l == 0.0) continue;
    bound.add(std::exp((K + 1) * std::log(l)) / std::sqrt(1.0 - l));
  }
  est.remainder_bound = bound.value() / std::sqrt(2.0 * K + 1.0);
  est.limit = asymptotics::ldp_rate(regime, param);
  return est;
}

struct GenfunRow {
  int n = 0;
  double x = 0.0;
  double value = 0.0;  // N^{-1/2} log sum_k p_{N,2k} x^k
  double limit = 0.0;
  double abs_err = 0.0;
};

struct GenfunTable {
  double tau = 0.0;
  std::vector<GenfunRow> rows;        // grouped by x, ascending n within each group
  bool errors_shrink = true;          // per-x error decreasing along the n grid
};

inline GenfunTable genfun_limit_check(
    const std::vector<int>& n_grid, double tau, const std::vector<double>& x_grid,
    const asymptotics::SpectrumProvider& provider = asymptotics::default_provider()) {
  for (double x : x_grid)
    if (!(x >= 0.05 && x <= 1.95)) throw argument_error("x grid must lie in [0.05, 1.95]");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw argument_error("n_grid must be ascending");
  GenfunTable table;
  table.tau = tau;
  std::vector<spectrum::Spectrum> spectra;
  spectra.reserve(n_grid.size());
  for (int n : n_grid) spectra.push_back(provider(n, tau));
  for (double x : x_grid) {
    const double limit = asymptotics::genfun_limit(tau, x);
    double prev_err = -1.0;
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      const double value =
          probabilities::log_generating(spectra[i], x) / std::sqrt(2.0 * n_grid[i]);
      const double err = std::abs(value - limit);
      table.rows.push_back({n_grid[i], x, value, limit, err});
      if (prev_err >= 0.0 && err > prev_err) table.errors_shrink = false;
      prev_err = err;
    }
  }
  return table;
}

}  // namespace eginoe::asymgap
