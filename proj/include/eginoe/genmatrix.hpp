#pragma once

// The generating matrix M_n^{(tau)}: the symmetric n x n matrix whose
// determinant identity det[I + (z-1) M] generates the real-eigenvalue count
// probabilities of the 2n x 2n real elliptic Ginibre ensemble.
//
// Two independent numerical routes are built and reconciled entry by entry:
//   quadrature      M(j,k) = (2 pi)^{-1/2} sqrt(1+tau) sum_q omega_q S_{2j-2}(x_q) S_{2k-2}(x_q)
//                   over a Gauss-Hermite rule, x_q = sqrt(1+tau) t_q (exact:
//                   the integrand is a polynomial of degree <= 4n-4)
//   hypergeometric  the closed form with a Pfaff-transformed, terminating
//                   2F1 sum (2 min(j,k) - 1 terms) and a log-space Gamma prefactor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "eginoe/detail/numeric.hpp"
#include "eginoe/detail/parallel.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/specfun.hpp"

namespace eginoe::genmatrix {

inline constexpr int kMaxN = 5000;

enum class Route { quadrature, hypergeometric, identity };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::quadrature: return "quadrature";
    case Route::hypergeometric: return "hypergeometric";
    default: return "identity";
  }
}

struct Tolerances {
  double route_rel = 1e-9;    // relative reconciliation tolerance
  double route_abs = 1e-12;   // absolute tolerance for entries below small_entry
  double small_entry = 1e-3;
  static Tolerances strict() { return {1e-10, 1e-13, 1e-3}; }
};

// Symmetric matrix, packed lower triangle, 1-based (j,k) accessors matching
// the j,k = 1..n convention used throughout.
struct GeneratingMatrix {
  int n = 0;
  double tau = 0.0;
  Route route = Route::quadrature;
  std::vector<double> packed;  // row-major lower triangle, n(n+1)/2 entries

  double entry(int j, int k) const {
    if (j < k) std::swap(j, k);
    return packed[static_cast<std::size_t>(j - 1) * j / 2 + (k - 1)];
  }
  double& entry_ref(int j, int k) {
    if (j < k) std::swap(j, k);
    return packed[static_cast<std::size_t>(j - 1) * j / 2 + (k - 1)];
  }
  double trace() const {
    eginoe::detail::CompensatedSum s;
    for (int j = 1; j <= n; ++j) s.add(entry(j, j));
    return s.value();
  }
  // dense row-major copy (scratch for the eigensolver)
  std::vector<double> dense() const {
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) a[static_cast<std::size_t>(j - 1) * n + (k - 1)] = entry(j, k);
    return a;
  }
};

// Closed-form entry via the terminating hypergeometric sum.  With j <= k the
// Pfaff transformation sends the 2F1 argument -tau/(1-tau) to tau and the
// upper parameter to 2-2j, so the Gauss series is an exact sum of 2j-1 terms
// (all positive for tau >= 0).
inline double entry_hypergeometric(int j, int k, double tau) {
  if (j < 1 || k < 1) throw argument_error("entry_hypergeometric requires j,k >= 1");
  if (!(tau > -1.0 && tau < 1.0)) throw argument_error("entry_hypergeometric requires tau in (-1,1)");
  if (j > k) std::swap(j, k);
  const double a = k - j + 0.5;
  const double c = 2.5 - j - k;
  eginoe::detail::CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  for (int s = 0; s < 2 * j - 2; ++s) {
    term *= (a + s) * (2.0 - 2.0 * j + s) / ((c + s) * (s + 1.0)) * tau;
    sum.add(term);
  }
  const double logpref = specfun::log_gamma(j + k - 1.5) -
                         0.5 * (specfun::log_gamma(2.0 * j - 1.0) + specfun::log_gamma(2.0 * k - 1.0)) +
                         (k - j + 0.5) * std::log1p(-tau) + 0.5 * (std::log1p(tau) - std::log1p(-tau));
  return std::exp(logpref) / specfun::kSqrt2Pi * sum.value();
}

namespace detail {

// B[j][q] = S_{2j}(x_q) for j = 0..n-1 over the rule's nodes.
inline std::vector<double> weighted_hermite_table(int n, double tau,
                                                  const std::vector<double>& x, unsigned workers) {
  const std::size_t Q = x.size();
  std::vector<double> B(static_cast<std::size_t>(n) * Q);
  eginoe::detail::parallel_for(
      Q,
      [&](std::size_t q) {
        std::vector<double> col(n);
        specfun::weighted_hermite_even_row(n, tau, x[q], col.data());
        for (int j = 0; j < n; ++j) B[static_cast<std::size_t>(j) * Q + q] = col[j];
      },
      workers);
  return B;
}

}  // namespace detail

// Build M_n^{(tau)}.  tau = 1 short-circuits to the identity (removable
// limit).  Otherwise the quadrature route fills the matrix and every entry is
// reconciled against the hypergeometric closed form; disagreement beyond
// tolerance aborts the build.
inline GeneratingMatrix build(int n, double tau, Tolerances tol = {}, unsigned workers = 0) {
  if (n < 1 || n > kMaxN) throw argument_error("build requires 1 <= n <= " + std::to_string(kMaxN));
  if (!(tau > -1.0 && tau <= 1.0)) throw argument_error("build requires tau in (-1,1]");
  GeneratingMatrix m;
  m.n = n;
  m.tau = tau;
  m.packed.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  if (tau == 1.0) {
    m.route = Route::identity;
    for (int j = 1; j <= n; ++j) m.entry_ref(j, j) = 1.0;
    return m;
  }
  m.route = Route::quadrature;
  const int Q = 2 * n + 8;
  specfun::QuadratureRule rule = specfun::quadrature(specfun::QuadKind::gauss_hermite, Q);
  const double scale = std::sqrt(1.0 + tau);
  std::vector<double> x(Q), wcol(Q);
  for (int q = 0; q < Q; ++q) {
    x[q] = scale * rule.nodes[q];
    wcol[q] = rule.scaled_weights[q];
  }
  std::vector<double> B = detail::weighted_hermite_table(n, tau, x, workers);
  // Bw[j][q] = omega_q * B[j][q], entries = (scale/sqrt(2pi)) * B * Bw^T
  std::vector<double> Bw(B.size());
  for (int j = 0; j < n; ++j)
    for (int q = 0; q < Q; ++q)
      Bw[static_cast<std::size_t>(j) * Q + q] = B[static_cast<std::size_t>(j) * Q + q] * wcol[q];

  const double front = scale / specfun::kSqrt2Pi;
  struct Worst {
    double err = 0.0;
    int j = 0, k = 0;
    double quad = 0.0, hyp = 0.0;
  };
  std::vector<Worst> row_worst(static_cast<std::size_t>(n));
  eginoe::detail::parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t row) {
        const int j = static_cast<int>(row) + 1;
        const double* bj = &B[row * Q];
        for (int k = 1; k <= j; ++k) {
          const double* bwk = &Bw[static_cast<std::size_t>(k - 1) * Q];
          double dot = 0.0;
          for (int q = 0; q < Q; ++q) dot += bj[q] * bwk[q];
          const double quad = front * dot;
          m.packed[row * (row + 1) / 2 + (k - 1)] = quad;
          const double hyp = entry_hypergeometric(k, j, tau);
          const double mag = std::max(std::abs(quad), std::abs(hyp));
          const double gate = (mag < tol.small_entry) ? tol.route_abs : mag * tol.route_rel;
          const double err = std::abs(quad - hyp) / gate;
          if (err > row_worst[row].err) row_worst[row] = {err, j, k, quad, hyp};
        }
      },
      workers);
  Worst w;
  for (const auto& cand : row_worst)
    if (cand.err > w.err) w = cand;
  if (w.err > 1.0)
    throw consistency_error("generating-matrix route disagreement at (j,k)=(" + std::to_string(w.j) +
                                "," + std::to_string(w.k) + "): quadrature=" + std::to_string(w.quad) +
                                " hypergeometric=" + std::to_string(w.hyp),
                            w.j, w.k);
  return m;
}

// K_n^{(tau)}(x,y) = (2 pi)^{-1/2} sum_{j=0}^{n-1} S_{2j}(x) S_{2j}(y)
// where S carries the e^{-x^2/(2(1+tau))} weight.
inline double kernel(int n, double tau, double x, double y) {
  if (n < 1) throw argument_error("kernel requires n >= 1");
  std::vector<double> sx(n), sy(n);
  specfun::weighted_hermite_even_row(n, tau, x, sx.data());
  specfun::weighted_hermite_even_row(n, tau, y, sy.data());
  eginoe::detail::CompensatedSum s;
  for (int j = 0; j < n; ++j) s.add(sx[j] * sy[j]);
  return s.value() / specfun::kSqrt2Pi;
}

}  // namespace eginoe::genmatrix
