#pragma once

// Eigendecomposition of the generating matrix and trace powers, plus the
// exact combinatorial multi-sum oracle for Tr(M^m) used to cross-check the
// eigenvalue route.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eginoe/detail/numeric.hpp"
#include "eginoe/detail/symmetric_eigen.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/genmatrix.hpp"

namespace eginoe::spectrum {

struct Spectrum {
  int n = 0;
  double tau = 0.0;
  std::vector<double> lambdas;  // sorted descending; in (0,1) up to solver roundoff
};

namespace detail {

inline constexpr int kRefineMaxN = 24;

// Small-n spectra in 80-bit extended precision: entries from the terminating
// hypergeometric sum, then a long-double Jacobi solve.  Rounding the matrix
// itself to double already perturbs the smallest eigenvalue by ~1e-16
// absolute, which for n ~ 10 at tau = 0 is ~1e-8 relative -- too coarse for
// the closed-form det checks.  Extended precision pushes that to ~1e-12.
inline std::vector<double> refined_small_spectrum(int n, double tau) {
  using LD = long double;
  const LD t = static_cast<LD>(tau);
  std::vector<LD> a(static_cast<std::size_t>(n) * n);
  for (int j = 1; j <= n; ++j)
    for (int k = j; k <= n; ++k) {
      const LD aa = static_cast<LD>(k - j) + 0.5L;
      const LD cc = 2.5L - j - k;
      LD sum = 1.0L, term = 1.0L;
      for (int s = 0; s < 2 * j - 2; ++s) {
        term *= (aa + s) * (2.0L - 2.0L * j + s) / ((cc + s) * (s + 1.0L)) * t;
        sum += term;
      }
      const LD logpref = lgammal(static_cast<LD>(j + k) - 1.5L) -
                         0.5L * (lgammal(2.0L * j - 1.0L) + lgammal(2.0L * k - 1.0L)) +
                         (static_cast<LD>(k - j) + 0.5L) * log1pl(-t) +
                         0.5L * (log1pl(t) - log1pl(-t));
      const LD v = expl(logpref) / sqrtl(2.0L * static_cast<LD>(M_PI)) * sum;
      a[static_cast<std::size_t>(j - 1) * n + (k - 1)] = v;
      a[static_cast<std::size_t>(k - 1) * n + (j - 1)] = v;
    }
  std::vector<LD> lam = eginoe::detail::jacobi_eigenvalues(std::move(a), static_cast<std::size_t>(n));
  std::vector<double> out(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) out[lam.size() - 1 - i] = static_cast<double>(lam[i]);
  return out;
}

}  // namespace detail

// Full symmetric eigensolve (Householder tridiagonalization + implicit-shift
// QL), eigenvalues only, sorted descending.  For n <= 256 the extreme
// eigenpairs are spot-checked by inverse iteration.
inline Spectrum eigendecompose(const genmatrix::GeneratingMatrix& m) {
  Spectrum s;
  s.n = m.n;
  s.tau = m.tau;
  std::vector<double> dense = m.dense();
  if (m.n <= detail::kRefineMaxN && m.route != genmatrix::Route::identity) {
    s.lambdas = detail::refined_small_spectrum(m.n, m.tau);
  } else {
    std::vector<double> scratch = dense;
    s.lambdas = eginoe::detail::symmetric_eigenvalues_inplace(scratch, static_cast<std::size_t>(m.n));
    std::reverse(s.lambdas.begin(), s.lambdas.end());
  }
  // trace consistency
  double tr = 0.0;
  for (double l : s.lambdas) tr += l;
  const double mtr = m.trace();
  if (std::abs(tr - mtr) > 1e-10 * static_cast<double>(m.n) * std::max(1.0, std::abs(mtr)))
    throw numerical_error("eigenvalue sum deviates from matrix trace");
  if (m.n <= 256 && m.route != genmatrix::Route::identity) {
    for (double lam : {s.lambdas.front(), s.lambdas.back()}) {
      double res = eginoe::detail::eigen_residual(dense, static_cast<std::size_t>(m.n), lam);
      if (res > 1e-10) throw numerical_error("eigenpair residual " + std::to_string(res) + " too large");
    }
  }
  return s;
}

// Sum of lambda^m, accumulated ascending in magnitude (lambdas are sorted
// descending, so we add from the back).
inline double trace_power(const Spectrum& s, int m) {
  if (m < 1) throw argument_error("trace_power requires m >= 1");
  eginoe::detail::CompensatedSum acc;
  for (std::size_t i = s.lambdas.size(); i-- > 0;) acc.add(std::pow(s.lambdas[i], m));
  return acc.value();
}

inline constexpr int kOracleMaxM = 3;
inline constexpr int kOracleMaxN = 12;

// Exact finite multi-sum for Tr(M^m):
//   sum_{j_1..j_m=0}^{n-1} ((1+tau)/2)^{m/2 + 2 sum j_k}
//     prod_k sum_{l=0}^{j_{k-1}} (1-tau)^{2l} (1+tau)^{-2l} (2 j_k)! /
//                                (2^{2l} l! (l+j_k-j_{k-1})! (2 j_{k-1}-2l)!)
// with j_0 = j_m; summands with negative factorial arguments vanish.
// Cost O(n^{m+1}); oracle use only.
inline double trace_power_oracle(int n, double tau, int m) {
  if (m < 1 || m > kOracleMaxM || n < 1 || n > kOracleMaxN)
    throw argument_error("trace_power_oracle budget is m <= " + std::to_string(kOracleMaxM) +
                         ", n <= " + std::to_string(kOracleMaxN));
  if (!(tau > -1.0 && tau <= 1.0)) throw argument_error("tau must lie in (-1,1]");
  const double log_1m = tau < 1.0 ? std::log1p(-tau) : 0.0;  // unused at tau = 1
  const double log_1p = std::log1p(tau);
  const double log_half_1p = std::log((1.0 + tau) / 2.0);

  auto inner = [&](int jk, int jprev) {
    // sum over l of the bracketed factor, in log space per term
    eginoe::detail::CompensatedSum acc;
    for (int l = 0; l <= jprev; ++l) {
      if (l + jk - jprev < 0) continue;
      if (tau == 1.0 && l > 0) break;  // (1-tau)^{2l} = 0
      double lt = specfun::log_gamma(2.0 * jk + 1.0) - specfun::log_gamma(l + 1.0) -
                  specfun::log_gamma(l + jk - jprev + 1.0) - specfun::log_gamma(2.0 * jprev - 2.0 * l + 1.0);
      if (l > 0) lt += 2.0 * l * (log_1m - log_1p - std::log(2.0));
      acc.add(std::exp(lt));
    }
    return acc.value();
  };

  eginoe::detail::CompensatedSum total;
  std::vector<int> j(m, 0);
  while (true) {
    int jsum = 0;
    for (int v : j) jsum += v;
    double prod = std::exp((0.5 * m + 2.0 * jsum) * log_half_1p);
    for (int k = 0; k < m && prod != 0.0; ++k) prod *= inner(j[k], j[(k + m - 1) % m]);
    total.add(prod);
    int pos = 0;
    while (pos < m && ++j[pos] == n) j[pos++] = 0;
    if (pos == m) break;
  }
  return total.value();
}

}  // namespace eginoe::spectrum
