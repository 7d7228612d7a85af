#pragma once

// Special functions and quadrature used by every other module: the monic
// variance-tau Hermite recurrence (exponent-tracked), erfc / log-gamma /
// scaled Bessel-I wrappers, zeta(3/2), the polylogarithm for s in {1/2, 3/2},
// and Gauss-Hermite / Gauss-Legendre rules via Golub-Welsch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eginoe/detail/numeric.hpp"
#include "eginoe/detail/symmetric_eigen.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/scaled_value.hpp"

namespace eginoe::specfun {

inline constexpr int kMaxHermiteDegree = 100000;
inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline constexpr double kLog2E = 1.4426950408889634;

namespace detail {

// One step of the monic recurrence C_{k+1} = x C_k - tau k C_{k-1} carried as
// (c_prev, c_cur) * 2^e2 with periodic renormalization.
struct TrackedPair {
  double lo = 0.0;  // value at degree k-1
  double hi = 1.0;  // value at degree k
  std::int64_t e2 = 0;

  void renorm() {
    double m = std::max(std::abs(lo), std::abs(hi));
    if (m > 3.3e150) {
      lo = std::ldexp(lo, -512);
      hi = std::ldexp(hi, -512);
      e2 += 512;
    } else if (m > 0.0 && m < 3.0e-151) {
      lo = std::ldexp(lo, 512);
      hi = std::ldexp(hi, 512);
      e2 -= 512;
    }
  }
};

inline void check_degree(int k) {
  if (k < 0 || k > kMaxHermiteDegree)
    throw config_error("Hermite degree " + std::to_string(k) + " exceeds configured maximum " +
                       std::to_string(kMaxHermiteDegree));
}

}  // namespace detail

// Monic Hermite polynomial with variance tau: C_{k+1} = x C_k - tau k C_{k-1},
// C_0 = 1, C_1 = x.  At tau = 0 this is exactly x^k.
inline ScaledValue scaled_hermite_tracked(int k, double tau, double x) {
  detail::check_degree(k);
  if (k == 0) return ScaledValue::from_double(1.0);
  detail::TrackedPair p;
  p.lo = 1.0;
  p.hi = x;
  for (int j = 1; j < k; ++j) {
    double next = x * p.hi - tau * static_cast<double>(j) * p.lo;
    p.lo = p.hi;
    p.hi = next;
    p.renorm();
  }
  return ScaledValue::normalized(p.hi, p.e2);
}

inline double scaled_hermite(int k, double tau, double x) {
  return scaled_hermite_tracked(k, tau, x).to_double();
}

// Degree-normalized, weight-folded value
//   S_k(x) = e^{-x^2/(2(1+tau))} C_k(x)/sqrt(k!)
// via D_{k+1} = (x D_k - tau sqrt(k) D_{k-1})/sqrt(k+1).  The Mehler identity
// sum_j S_j(x)^2 = (1-tau^2)^{-1/2} bounds |S_k| uniformly, so the result is
// always an ordinary double in magnitude; the recurrence itself is tracked.
inline ScaledValue normalized_hermite_weighted(int k, double tau, double x) {
  detail::check_degree(k);
  detail::TrackedPair p;
  p.lo = 1.0;  // D_0
  p.hi = x;    // D_1
  double dk;
  if (k == 0)
    dk = 1.0;
  else {
    for (int j = 1; j < k; ++j) {
      double next = (x * p.hi - tau * std::sqrt(static_cast<double>(j)) * p.lo) /
                    std::sqrt(static_cast<double>(j + 1));
      p.lo = p.hi;
      p.hi = next;
      p.renorm();
    }
    dk = p.hi;
  }
  ScaledValue weight = ScaledValue::from_log2(-x * x / (2.0 * (1.0 + tau)) * kLog2E);
  return ScaledValue::normalized(dk, k == 0 ? 0 : p.e2) * weight;
}

// All even-degree values S_0, S_2, ..., S_{2(count-1)} at one point, as
// doubles (deep underflow flushes to zero).  Workhorse of the matrix build.
inline void weighted_hermite_even_row(int count, double tau, double x, double* out) {
  if (count <= 0) return;
  detail::check_degree(2 * (count - 1));
  const double wlog2 = -x * x / (2.0 * (1.0 + tau)) * kLog2E;
  ScaledValue w = ScaledValue::from_log2(wlog2);
  out[0] = w.to_double();
  detail::TrackedPair p;
  p.lo = 1.0;
  p.hi = x;
  int k = 1;
  for (int j = 1; j < count; ++j) {
    while (k < 2 * j) {
      double next = (x * p.hi - tau * std::sqrt(static_cast<double>(k)) * p.lo) /
                    std::sqrt(static_cast<double>(k + 1));
      p.lo = p.hi;
      p.hi = next;
      p.renorm();
      ++k;
    }
    out[j] = (ScaledValue::normalized(p.hi, p.e2) * w).to_double();
  }
}

inline double erfc(double x) { return std::erfc(x); }

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw argument_error("log_gamma requires x > 0");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// e^{-x} I_nu(x) for nu in {0,1}: power series below x = 40, the large-x
// asymptotic expansion above (optimal truncation error < 1e-16 there).
inline double bessel_i_scaled(int nu, double x) {
  if (nu != 0 && nu != 1) throw argument_error("bessel_i_scaled supports nu in {0,1}");
  if (!(x >= 0.0)) throw argument_error("bessel_i_scaled requires x >= 0");
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  if (x <= 40.0) {
    const double h = x / 2.0;
    double term = nu == 0 ? 1.0 : h;
    eginoe::detail::CompensatedSum s;
    s.add(term);
    for (int k = 1; k < 400; ++k) {
      term *= h * h / (static_cast<double>(k) * (k + nu));
      s.add(term);
      if (term < 1e-20 * s.sum) break;
    }
    return s.value() * std::exp(-x);
  }
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  eginoe::detail::CompensatedSum s;
  s.add(term);
  double prev = std::abs(term);
  for (int k = 1; k < 50; ++k) {
    const double tk = 2.0 * k - 1.0;
    term *= -(mu - tk * tk) / (8.0 * k * x);
    if (std::abs(term) >= prev) break;  // asymptotic series started diverging
    prev = std::abs(term);
    s.add(term);
    if (std::abs(term) < 1e-18 * std::abs(s.sum)) break;
  }
  return s.value() / std::sqrt(2.0 * M_PI * x);
}

namespace detail {

// sum_{k=K+1}^infty e^{-a k} k^{-s} for s in {1/2, 3/2} by Euler-Maclaurin
// with the closed-form exponential-integral head.
inline double power_tail(double s, double a, double K) {
  const double A = K + 1.0;
  double integral;
  if (s == 1.5) {
    integral = a == 0.0 ? 2.0 / std::sqrt(A)
                        : 2.0 * std::exp(-a * A) / std::sqrt(A) -
                              2.0 * std::sqrt(M_PI * a) * std::erfc(std::sqrt(a * A));
  } else {
    // s = 1/2 only reachable with a > 0 (|z| < 1 enforced upstream)
    integral = std::sqrt(M_PI / a) * std::erfc(std::sqrt(a * A));
  }
  const double f = std::exp(-a * A) * std::pow(A, -s);
  const double fp = -std::exp(-a * A) * (a * std::pow(A, -s) + s * std::pow(A, -s - 1.0));
  return integral + f / 2.0 - fp / 12.0;
}

inline double polylog_positive(double s, double z) {
  // z in [0,1); direct ascending summation plus analytic tail
  if (z == 0.0) return 0.0;
  const double a = -std::log(z);
  std::int64_t K = 1000;
  if (a > 0.0) {
    double need = 44.0 / a;
    if (need > static_cast<double>(K)) K = static_cast<std::int64_t>(std::min(1.0e6, std::ceil(need)));
  } else {
    K = 1000000;
  }
  eginoe::detail::CompensatedSum acc;
  for (std::int64_t k = K; k >= 1; --k)
    acc.add(std::exp(-a * static_cast<double>(k)) * std::pow(static_cast<double>(k), -s));
  return acc.value() + power_tail(s, a, static_cast<double>(K));
}

}  // namespace detail

inline double zeta_three_halves() {
  static const double cached = [] {
    const double M = 1.0e6;
    eginoe::detail::CompensatedSum acc;
    for (std::int64_t k = 1000000; k >= 1; --k) acc.add(std::pow(static_cast<double>(k), -1.5));
    const double A = M + 1.0;
    // Euler-Maclaurin tail from k = M+1
    double tail = 2.0 / std::sqrt(A) + 0.5 * std::pow(A, -1.5) + 0.125 * std::pow(A, -2.5);
    return acc.value() + tail;
  }();
  return cached;
}

// Li_s(z) = sum_{k>=1} z^k / k^s for s in {1/2, 3/2}, z in [-1,1]
// (z = 1 excluded for s = 1/2).  Absolute accuracy ~1e-12.
inline double polylog(double s, double z) {
  if (s != 0.5 && s != 1.5) throw argument_error("polylog supports s in {1/2, 3/2}");
  if (z < -1.0 || z > 1.0) throw argument_error("polylog requires z in [-1,1]");
  if (s == 0.5 && z == 1.0) throw argument_error("Li_{1/2}(1) diverges");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return zeta_three_halves();
  if (z < 0.0) {
    // Li_s(z) + Li_s(-z) = 2^{1-s} Li_s(z^2)
    double pos = (z == -1.0 && s == 1.5) ? zeta_three_halves() : detail::polylog_positive(s, -z);
    double sq = (z == -1.0 && s == 1.5) ? zeta_three_halves() : detail::polylog_positive(s, z * z);
    return std::exp2(1.0 - s) * sq - pos;
  }
  return detail::polylog_positive(s, z);
}

// ---------------------------------------------------------------------------
// Quadrature

enum class QuadKind { gauss_hermite, gauss_legendre };

struct QuadratureRule {
  QuadKind kind = QuadKind::gauss_hermite;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;         // raw weights (may flush to zero at extreme
                                       // Gauss-Hermite nodes for very large Q)
  std::vector<double> scaled_weights;  // Gauss-Hermite: w_q e^{t_q^2}; Legendre: == weights
};

namespace detail {

// Orthonormal Hermite functions phi_k(t) = ptilde_k(t) e^{-t^2/2} w.r.t. e^{-t^2}dt,
// phi_0 = pi^{-1/4} e^{-t^2/2}, phi_{k+1} = t sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}.
// Returns sum_k phi_k^2 for k < Q and the final pair for Newton steps.
struct HermiteChristoffel {
  double sum_sq = 0.0;
  double ratio_last = 0.0;  // phi_Q / phi_{Q-1}
};

inline HermiteChristoffel hermite_christoffel(int Q, double t) {
  HermiteChristoffel r;
  const double seed_log2 = (-t * t / 2.0 - 0.25 * std::log(M_PI)) * kLog2E;
  ScaledValue base = ScaledValue::from_log2(seed_log2);
  TrackedPair p;
  p.lo = 0.0;
  p.hi = 1.0;  // phi_0 / base
  p.e2 = 0;
  double v = (ScaledValue::normalized(p.hi, p.e2) * base).to_double();
  r.sum_sq = v * v;
  for (int k = 0; k < Q; ++k) {
    double next = t * std::sqrt(2.0 / (k + 1)) * p.hi - std::sqrt(static_cast<double>(k) / (k + 1)) * p.lo;
    p.lo = p.hi;
    p.hi = next;
    p.renorm();
    if (k + 1 < Q) {
      v = (ScaledValue::normalized(p.hi, p.e2) * base).to_double();
      r.sum_sq += v * v;
    } else {
      r.ratio_last = p.lo != 0.0 ? p.hi / p.lo : 0.0;  // exponent cancels in the ratio
    }
  }
  return r;
}

inline QuadratureRule make_gauss_hermite(int Q) {
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_hermite;
  rule.order = Q;
  std::vector<double> d(Q, 0.0), e(Q, 0.0);
  for (int k = 1; k < Q; ++k) e[k] = std::sqrt(k / 2.0);
  eginoe::detail::tridiag_ql_implicit(d, e);
  rule.nodes = d;
  // Newton polish: t <- t - ptilde_Q / ptilde_Q' with ptilde_Q' = sqrt(2Q) ptilde_{Q-1}
  for (int it = 0; it < 2; ++it)
    for (int q = 0; q < Q; ++q) {
      auto hc = hermite_christoffel(Q, rule.nodes[q]);
      rule.nodes[q] -= hc.ratio_last / std::sqrt(2.0 * Q);
    }
  for (int q = 0; q < Q / 2; ++q) {
    double sym = 0.5 * (rule.nodes[q] - rule.nodes[Q - 1 - q]);
    rule.nodes[q] = sym;
    rule.nodes[Q - 1 - q] = -sym;
  }
  if (Q % 2 == 1) rule.nodes[Q / 2] = 0.0;
  rule.weights.resize(Q);
  rule.scaled_weights.resize(Q);
  for (int q = 0; q < Q; ++q) {
    auto hc = hermite_christoffel(Q, rule.nodes[q]);
    const double omega = 1.0 / hc.sum_sq;
    rule.scaled_weights[q] = omega;
    rule.weights[q] =
        (ScaledValue::from_double(omega) *
         ScaledValue::from_log2(-rule.nodes[q] * rule.nodes[q] * kLog2E))
            .to_double();
  }
  return rule;
}

inline QuadratureRule make_gauss_legendre(int Q) {
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_legendre;
  rule.order = Q;
  std::vector<double> d(Q, 0.0), e(Q, 0.0);
  for (int k = 1; k < Q; ++k) e[k] = k / std::sqrt(4.0 * k * k - 1.0);
  eginoe::detail::tridiag_ql_implicit(d, e);
  rule.nodes = d;
  rule.weights.resize(Q);
  for (int q = 0; q < Q; ++q) {
    double t = rule.nodes[q];
    double pq = 0.0, pqm1 = 0.0;
    for (int it = 0; it < 3; ++it) {
      // standard Legendre recurrence (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}
      double p0 = 1.0, p1 = t;
      for (int k = 1; k < Q; ++k) {
        double p2 = ((2.0 * k + 1.0) * t * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      pq = p1;
      pqm1 = p0;
      double deriv = Q * (t * pq - pqm1) / (t * t - 1.0);
      if (it < 2) t -= pq / deriv;
    }
    rule.nodes[q] = t;
    double deriv = Q * (t * pq - pqm1) / (t * t - 1.0);
    rule.weights[q] = 2.0 / ((1.0 - t * t) * deriv * deriv);
  }
  for (int q = 0; q < Q / 2; ++q) {
    double sym = 0.5 * (rule.nodes[q] - rule.nodes[Q - 1 - q]);
    rule.nodes[q] = sym;
    rule.nodes[Q - 1 - q] = -sym;
    double wsym = 0.5 * (rule.weights[q] + rule.weights[Q - 1 - q]);
    rule.weights[q] = wsym;
    rule.weights[Q - 1 - q] = wsym;
  }
  if (Q % 2 == 1) rule.nodes[Q / 2] = 0.0;
  rule.scaled_weights = rule.weights;
  return rule;
}

}  // namespace detail

inline void validate(const QuadratureRule& rule) {
  const int Q = rule.order;
  if (static_cast<int>(rule.nodes.size()) != Q || static_cast<int>(rule.weights.size()) != Q)
    throw invariant_error("quadrature rule has inconsistent sizes");
  for (int q = 0; q + 1 < Q; ++q)
    if (!(rule.nodes[q] < rule.nodes[q + 1])) throw invariant_error("quadrature nodes not strictly increasing");
  for (int q = 0; q < Q; ++q)
    if (!(rule.scaled_weights[q] > 0.0)) throw invariant_error("quadrature weight not positive");
  eginoe::detail::CompensatedSum s;
  for (double w : rule.weights) s.add(w);
  const double target = rule.kind == QuadKind::gauss_hermite ? std::sqrt(M_PI) : 2.0;
  if (std::abs(s.value() - target) > 1e-13 * std::max(1.0, target))
    throw invariant_error("quadrature weight sum off target");
}

inline QuadratureRule quadrature(QuadKind kind, int Q) {
  if (Q < 1 || Q > 10000) throw argument_error("quadrature order must be in [1, 10^4]");
  QuadratureRule rule = kind == QuadKind::gauss_hermite ? detail::make_gauss_hermite(Q)
                                                        : detail::make_gauss_legendre(Q);
  validate(rule);
  return rule;
}

}  // namespace eginoe::specfun
