#pragma once

// Limit constants and asymptotic predictions: interpolating constants c(alpha)
// and d(alpha) with independent representations, CLT variances, trace-power
// limits, large-deviation rates, the generating-function limit, exact finite-N
// cumulants, the combinatorial identities behind the weak-regime trace
// analysis, and convergence diagnostics against finite-N values.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eginoe/detail/numeric.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/probabilities.hpp"
#include "eginoe/specfun.hpp"
#include "eginoe/spectrum.hpp"

namespace eginoe::asymptotics {

enum class Regime { strong, weak };
enum class CAlphaMethod { bessel, erf_integral, series };
enum class DAlphaMethod { series, integral };

// c(alpha) = e^{-alpha^2/2} [I_0(alpha^2/2) + I_1(alpha^2/2)]
//          = 2/(alpha sqrt(pi)) int_0^1 erf(alpha sqrt(1-s^2)) ds
//          = sum_k binom(2k,k)/(4^k (k+1)!) (-alpha^2)^k
inline double c_alpha(double alpha, CAlphaMethod method = CAlphaMethod::bessel) {
  if (!(alpha >= 0.0)) throw argument_error("c_alpha requires alpha >= 0");
  switch (method) {
    case CAlphaMethod::bessel: {
      if (alpha == 0.0) return 1.0;
      const double x = alpha * alpha / 2.0;
      return specfun::bessel_i_scaled(0, x) + specfun::bessel_i_scaled(1, x);
    }
    case CAlphaMethod::erf_integral: {
      if (alpha == 0.0) return 1.0;
      static const specfun::QuadratureRule rule =
          specfun::quadrature(specfun::QuadKind::gauss_legendre, 200);
      // substitute s = sin(theta): int_0^{pi/2} erf(alpha cos t) cos t dt
      eginoe::detail::CompensatedSum acc;
      for (int q = 0; q < rule.order; ++q) {
        const double th = (rule.nodes[q] + 1.0) * M_PI / 4.0;
        acc.add(rule.weights[q] * std::erf(alpha * std::cos(th)) * std::cos(th));
      }
      return 2.0 / (alpha * std::sqrt(M_PI)) * acc.value() * M_PI / 4.0;
    }
    case CAlphaMethod::series: {
      if (alpha > 2.0) throw argument_error("c_alpha series method restricted to alpha <= 2");
      double term = 1.0;
      eginoe::detail::CompensatedSum acc;
      acc.add(term);
      const double a2 = alpha * alpha;
      for (int k = 0; k < 200; ++k) {
        term *= -a2 * (2.0 * k + 1.0) / (2.0 * (k + 1.0) * (k + 2.0));
        acc.add(term);
        if (std::abs(term) < 1e-17) break;
      }
      return acc.value();
    }
  }
  throw argument_error("unknown c_alpha method");
}

// d(alpha) = sum_m c(sqrt(m) alpha)/(2m)
//          = -(2/pi) int_0^1 log(1 - e^{-alpha^2 s^2}) sqrt(1-s^2) ds
inline double d_alpha(double alpha, DAlphaMethod method = DAlphaMethod::integral) {
  if (!(alpha > 0.0)) throw argument_error("d_alpha requires alpha > 0");
  if (method == DAlphaMethod::series) {
    const int M = 200000;
    eginoe::detail::CompensatedSum acc;
    for (int m = M; m >= 1; --m)
      acc.add(c_alpha(std::sqrt(static_cast<double>(m)) * alpha) / (2.0 * m));
    // analytic tail from c(a) ~ (2/(a sqrt(pi)))(1 - 1/(4a^2) - 3/(8a^4))
    auto hurwitz_tail = [&](double s) {
      const double Md = static_cast<double>(M);
      return std::pow(Md, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(Md, -s) +
             s / 12.0 * std::pow(Md, -s - 1.0);
    };
    const double a2 = alpha * alpha;
    const double tail = (hurwitz_tail(1.5) - hurwitz_tail(2.5) / (4.0 * a2) -
                         3.0 * hurwitz_tail(3.5) / (8.0 * a2 * a2)) /
                        (alpha * std::sqrt(M_PI));
    return acc.value() + tail;
  }
  // integral route with the log singularity at s = 0 subtracted:
  //   log(1-e^{-a^2 s^2}) = h(s) + 2 log(alpha s),  h smooth,
  //   int sqrt(1-s^2) ds = pi/4,  int sqrt(1-s^2) log s ds = -(pi/4) log2 - pi/8
  static const specfun::QuadratureRule rule =
      specfun::quadrature(specfun::QuadKind::gauss_legendre, 400);
  eginoe::detail::CompensatedSum acc;
  for (int q = 0; q < rule.order; ++q) {
    const double th = (rule.nodes[q] + 1.0) * M_PI / 4.0;
    const double s = std::sin(th);
    const double u = alpha * alpha * s * s;
    const double phi = u < 1e-8 ? 1.0 - u / 2.0 + u * u / 6.0 : -std::expm1(-u) / u;
    acc.add(rule.weights[q] * std::log(phi) * std::cos(th) * std::cos(th));
  }
  const double smooth = acc.value() * M_PI / 4.0;
  const double A = M_PI / 4.0;
  const double B = -(M_PI / 4.0) * std::log(2.0) - M_PI / 8.0;
  return -2.0 / M_PI * (smooth + 2.0 * std::log(alpha) * A + 2.0 * B);
}

// CLT variance of (N_N - E)/sqrt(E): 2 - sqrt(2) at fixed tau,
// 2 - 2 c(sqrt2 alpha)/c(alpha) in the weak regime.
inline double clt_sigma2(Regime regime, double param) {
  if (regime == Regime::strong) {
    if (!(param > -1.0 && param < 1.0)) throw argument_error("strong regime requires tau in (-1,1)");
    return 2.0 - std::sqrt(2.0);
  }
  if (!(param > 0.0)) throw argument_error("weak regime requires alpha > 0");
  return 2.0 - 2.0 * c_alpha(std::sqrt(2.0) * param) / c_alpha(param);
}

inline double strong_prefactor(double tau) { return std::sqrt((1.0 + tau) / (1.0 - tau)); }

// Limit of Tr(M^m)/sqrt(2n) (strong) or Tr(M^m)/(2n) (weak).
inline double trace_limit(Regime regime, double param, int m) {
  if (m < 1) throw argument_error("trace_limit requires m >= 1");
  if (regime == Regime::strong) return std::sqrt((1.0 + param) / (1.0 - param) / (2.0 * M_PI * m));
  return c_alpha(std::sqrt(static_cast<double>(m)) * param) / 2.0;
}

// Coefficient of E N_N: per sqrt(N) (strong) or per N (weak).
inline double mean_count_coefficient(Regime regime, double param) {
  if (regime == Regime::strong) return strong_prefactor(param) * std::sqrt(2.0 / M_PI);
  return c_alpha(param);
}

inline double var_count_coefficient(Regime regime, double param) {
  if (regime == Regime::strong)
    return (2.0 - std::sqrt(2.0)) * strong_prefactor(param) * std::sqrt(2.0 / M_PI);
  return 2.0 * (c_alpha(param) - c_alpha(std::sqrt(2.0) * param));
}

// Limit of N^{-1/2} log p_{N,0} (strong) or N^{-1} log p_{N,0} (weak; upper bound).
inline double ldp_rate(Regime regime, double param) {
  if (regime == Regime::strong)
    return -strong_prefactor(param) * specfun::zeta_three_halves() / specfun::kSqrt2Pi;
  return -d_alpha(param);
}

// Limit of N^{-1/2} log sum_k p_{N,2k} x^k, x in [0,2] (strong regime).
inline double genfun_limit(double tau, double x) {
  if (!(x >= 0.0 && x <= 2.0)) throw argument_error("genfun_limit requires x in [0,2]");
  return -strong_prefactor(tau) * specfun::polylog(1.5, 1.0 - x) / specfun::kSqrt2Pi;
}

enum class Quantity { trace_limit, mean_count, var_count, clt_sigma2, ldp_rate, genfun_limit };

struct AsymptoticPrediction {
  Regime regime = Regime::strong;
  double param = 0.0;  // tau (strong) or alpha (weak)
  Quantity quantity = Quantity::trace_limit;
  int m = 0;       // trace power, when applicable
  double x = 0.0;  // generating-function argument, when applicable
  double value = 0.0;
  int regime_exponent = 1;  // a in the lambda_1 <= 1 - mu/n^a bound
};

inline std::vector<AsymptoticPrediction> predictions(Regime regime, double param,
                                                     const std::vector<int>& ms = {1, 2, 3},
                                                     const std::vector<double>& xs = {0.25, 0.5,
                                                                                      1.5}) {
  std::vector<AsymptoticPrediction> out;
  const int a = regime == Regime::strong ? 1 : 2;
  auto push = [&](Quantity q, double value, int m = 0, double x = 0.0) {
    out.push_back({regime, param, q, m, x, value, a});
  };
  for (int m : ms) push(Quantity::trace_limit, trace_limit(regime, param, m), m);
  push(Quantity::mean_count, mean_count_coefficient(regime, param));
  push(Quantity::var_count, var_count_coefficient(regime, param));
  push(Quantity::clt_sigma2, clt_sigma2(regime, param));
  push(Quantity::ldp_rate, ldp_rate(regime, param));
  if (regime == Regime::strong)
    for (double x : xs) push(Quantity::genfun_limit, genfun_limit(param, x), 0, x);
  return out;
}

// Exact finite-N cumulants of the real-eigenvalue count from trace powers:
//   kappa_1 = 2 Tr M, kappa_2 = 4(Tr M - Tr M^2),
//   kappa_3 = 8(Tr M - 3 Tr M^2 + 2 Tr M^3)
inline double cumulants(const spectrum::Spectrum& s, int l) {
  if (l < 1 || l > 3) throw argument_error("cumulants supports l in {1,2,3}");
  const double t1 = spectrum::trace_power(s, 1);
  if (l == 1) return 2.0 * t1;
  const double t2 = spectrum::trace_power(s, 2);
  if (l == 2) return 4.0 * (t1 - t2);
  const double t3 = spectrum::trace_power(s, 3);
  return 8.0 * (t1 - 3.0 * t2 + 2.0 * t3);
}

// Exact integer check of the combinatorial identity behind the weak-regime
// trace limits: summing 2^s m^{s-k} k!/(l_1!..l_m!(l_1+M_1)!..(l_m+M_m)! s!)
// over M_1+..+M_m = 0, s+2l = k, l_1+..+l_m = l equals binom(2k,k).
// Reparametrized with a_i = l_i + M_i >= 0 (then sum a_i = l automatically);
// both sides are scaled by m^k so every quantity is a 64-bit integer.
inline bool combinatorial_identity_check(int m, int k) {
  if (m < 1 || m > 4 || k < 0 || k > 6) throw argument_error("identity budget is m <= 4, k <= 6");
  std::uint64_t fact[13];
  fact[0] = 1;
  for (int i = 1; i <= 12; ++i) fact[i] = fact[i - 1] * static_cast<std::uint64_t>(i);
  auto binom = [&](int a, int b) { return fact[a] / (fact[b] * fact[a - b]); };

  std::uint64_t total = 0;
  std::vector<int> ls(m, 0), as(m, 0);
  std::function<void(int, int, std::uint64_t)> loop_a = [&](int pos, int rem, std::uint64_t denom) {
    if (pos == m - 1) {
      as[pos] = rem;
      std::uint64_t d = denom * fact[rem];
      int l = 0, s;
      for (int v : ls) l += v;
      s = k - 2 * l;
      // term = 2^s m^s k! / (prod l_i! prod a_i! s!)
      std::uint64_t t = fact[k] / (d * fact[s]);
      std::uint64_t p2 = 1, pm = 1;
      for (int i = 0; i < s; ++i) {
        p2 *= 2;
        pm *= static_cast<std::uint64_t>(m);
      }
      total += t * p2 * pm;
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      as[pos] = v;
      loop_a(pos + 1, rem - v, denom * fact[v]);
    }
  };
  std::function<void(int, int, std::uint64_t)> loop_l = [&](int pos, int rem, std::uint64_t denom) {
    if (pos == m - 1) {
      ls[pos] = rem;
      int l = 0;
      for (int v : ls) l += v;
      loop_a(0, l, denom * fact[rem]);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      ls[pos] = v;
      loop_l(pos + 1, rem - v, denom * fact[v]);
    }
  };
  for (int l = 0; 2 * l <= k; ++l) loop_l(0, l, 1);

  std::uint64_t rhs = binom(2 * k, k);
  for (int i = 0; i < k; ++i) rhs *= static_cast<std::uint64_t>(m);
  return total == rhs;
}

// ---------------------------------------------------------------------------
// Convergence diagnostics

struct ConvergenceRow {
  int n = 0;
  double value = 0.0;
  double limit = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

struct ConvergenceReport {
  Quantity quantity = Quantity::trace_limit;
  Regime regime = Regime::strong;
  double param = 0.0;
  int m = 0;
  double x = 0.0;
  std::vector<ConvergenceRow> rows;
  bool monotone = true;  // abs_err non-increasing along the ascending n grid
};

using SpectrumProvider = std::function<spectrum::Spectrum(int n, double tau)>;

inline SpectrumProvider default_provider() {
  return [](int n, double tau) { return spectrum::eigendecompose(genmatrix::build(n, tau)); };
}

// tau of the weak regime at half-dimension n: tau = 1 - alpha^2/(2n) = 1 - alpha^2/N
inline double weak_tau(double alpha, int n) { return 1.0 - alpha * alpha / (2.0 * n); }

inline ConvergenceReport convergence_report(Quantity quantity, Regime regime, double param,
                                            const std::vector<int>& n_grid, int m = 1,
                                            double x = 0.5,
                                            const SpectrumProvider& provider = default_provider()) {
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw argument_error("n_grid must be ascending");
  ConvergenceReport rep;
  rep.quantity = quantity;
  rep.regime = regime;
  rep.param = param;
  rep.m = m;
  rep.x = x;
  for (int n : n_grid) {
    const double tau = regime == Regime::strong ? param : weak_tau(param, n);
    spectrum::Spectrum s = provider(n, tau);
    const double N = 2.0 * n;
    const double scale = regime == Regime::strong ? std::sqrt(N) : N;
    double value = 0.0, limit = 0.0;
    switch (quantity) {
      case Quantity::trace_limit:
        value = spectrum::trace_power(s, m) / scale;
        limit = trace_limit(regime, param, m);
        break;
      case Quantity::mean_count:
        value = 2.0 * spectrum::trace_power(s, 1) / scale;
        limit = mean_count_coefficient(regime, param);
        break;
      case Quantity::var_count:
        value = cumulants(s, 2) / scale;
        limit = var_count_coefficient(regime, param);
        break;
      case Quantity::clt_sigma2:
        value = cumulants(s, 2) / cumulants(s, 1);
        limit = clt_sigma2(regime, param);
        break;
      case Quantity::ldp_rate: {
        eginoe::detail::CompensatedSum lp;
        for (double lam : s.lambdas) lp.add(std::log1p(-std::min(lam, 1.0 - 1e-300)));
        value = lp.value() / scale;
        limit = ldp_rate(regime, param);
        break;
      }
      case Quantity::genfun_limit:
        value = probabilities::log_generating(s, x) / scale;
        limit = regime == Regime::strong ? genfun_limit(param, x)
                                         : throw argument_error("genfun limit is a strong-regime quantity");
        break;
    }
    ConvergenceRow row{n, value, limit, std::abs(value - limit),
                       limit != 0.0 ? std::abs(value - limit) / std::abs(limit) : std::abs(value)};
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].abs_err > rep.rows[i - 1].abs_err) rep.monotone = false;
  return rep;
}

}  // namespace eginoe::asymptotics
