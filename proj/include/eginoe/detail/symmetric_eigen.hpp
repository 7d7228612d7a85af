#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "eginoe/errors.hpp"

namespace eginoe::detail {

inline double hypot2(double a, double b) { return std::hypot(a, b); }

// Implicit-shift QL on a symmetric tridiagonal matrix, eigenvalues only.
// d: diagonal (length n), e: subdiagonal (length n, e[0] unused).
// On return d holds the eigenvalues in ascending order.
inline void tridiag_ql_implicit(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (++iter == 60) throw numerical_error("tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow_break = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow_break = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow_break) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
}

// Householder reduction of a symmetric matrix (full row-major storage,
// lower triangle referenced) to tridiagonal form; no transform accumulation.
// EISPACK tred1 layout: returns diagonal d and subdiagonal e (e[0] = 0).
inline void householder_tridiagonalize(std::vector<double>& a, std::size_t n,
                                       std::vector<double>& d, std::vector<double>& e) {
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 0) return;
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    double* ai = &a[i * n];
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(ai[k]);
      if (scale == 0.0) {
        e[i] = ai[l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          ai[k] /= scale;
          h += ai[k] * ai[k];
        }
        double f = ai[l];
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        ai[l] = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          // form element of A*u
          g = 0.0;
          const double* aj = &a[j * n];
          for (std::size_t k = 0; k <= j; ++k) g += aj[k] * ai[k];
          for (std::size_t k = j + 1; k <= l; ++k) g += a[k * n + j] * ai[k];
          e[j] = g / h;
          f += e[j] * ai[j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) e[j] -= hh * ai[j];
        // rank-2 update of the lower triangle
        for (std::size_t j = 0; j <= l; ++j) {
          const double fj = ai[j];
          const double gj = e[j];
          double* ajr = &a[j * n];
          for (std::size_t k = 0; k <= j; ++k) ajr[k] -= fj * e[k] + gj * ai[k];
        }
      }
    } else {
      e[i] = ai[l];
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
}

// Eigenvalues of a dense symmetric matrix (row-major, n x n), ascending.
// The input array is used as scratch.
inline std::vector<double> symmetric_eigenvalues_inplace(std::vector<double>& a, std::size_t n) {
  std::vector<double> d, e;
  householder_tridiagonalize(a, n, d, e);
  tridiag_ql_implicit(d, e);
  return d;
}

// Solve (A - lambda I) x = b by Gaussian elimination with partial pivoting,
// replacing exactly singular pivots with a tiny multiple of the scale.
// Used for inverse-iteration residual checks.
inline std::vector<double> shifted_solve(std::vector<double> a, std::size_t n, double lambda,
                                         std::vector<double> b) {
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] -= lambda;
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i * n + j]));
  }
  if (scale == 0.0) scale = 1.0;
  std::vector<std::size_t> piv(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
    piv[k] = p;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      std::swap(b[k], b[p]);
    }
    double pivval = a[k * n + k];
    if (std::abs(pivval) < 1e-40 * scale) {
      pivval = (pivval >= 0 ? 1.0 : -1.0) * 1e-40 * scale;
      a[k * n + k] = pivval;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double m = a[i * n + k] / pivval;
      if (m == 0.0) continue;
      a[i * n + k] = m;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
      b[i] -= m * b[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
    b[i] = s / a[i * n + i];
  }
  return b;
}

// Cyclic two-sided Jacobi eigensolve (eigenvalues only), templated so it can
// run in long double.  For positive definite graded matrices Jacobi attains
// far better relative accuracy on tiny eigenvalues than tridiagonal methods.
template <typename Real>
std::vector<Real> jacobi_eigenvalues(std::vector<Real> a, std::size_t n) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const Real apq = a[p * n + q];
        const Real gate = eps * std::sqrt(std::abs(a[p * n + p] * a[q * n + q]));
        if (std::abs(apq) <= gate) continue;
        rotated = true;
        const Real theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Real c = 1 / std::sqrt(t * t + 1);
        const Real s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const Real aip = a[i * n + p], aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[i * n + q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Real api = a[p * n + i], aqi = a[q * n + i];
          a[p * n + i] = c * api - s * aqi;
          a[q * n + i] = s * api + c * aqi;
        }
      }
    if (!rotated) break;
  }
  std::vector<Real> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
  std::sort(d.begin(), d.end());
  return d;
}

// Relative residual ||A v - lambda v|| / ||A||_F for the eigenvector obtained
// by two inverse-iteration steps at the given shift.
inline double eigen_residual(const std::vector<double>& a, std::size_t n, double lambda) {
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (int it = 0; it < 2; ++it) {
    v = shifted_solve(a, n, lambda, v);
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (double& x : v) x /= nrm;
  }
  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  double rnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = -lambda * v[i];
    const double* ai = &a[i * n];
    for (std::size_t j = 0; j < n; ++j) s += ai[j] * v[j];
    rnorm += s * s;
  }
  return std::sqrt(rnorm) / (frob > 0 ? frob : 1.0);
}

}  // namespace eginoe::detail
