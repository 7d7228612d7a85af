#pragma once

// Exact finite-N real-eigenvalue count distribution from the spectrum:
// coefficients of prod_i ((1-lambda_i) + lambda_i z) by nonnegative
// convolution over ScaledValue arrays, log-probabilities, the truncated
// log-series with exact remainder, and the Forrester-Nagao determinant as an
// independent oracle for p_{2n,0} at n = 1,2.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "eginoe/detail/numeric.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/scaled_value.hpp"
#include "eginoe/spectrum.hpp"

namespace eginoe::probabilities {

using specfun::ScaledValue;

inline constexpr double kLambdaSlack = 1e-12;

struct RealCountDistribution {
  int N = 0;       // matrix dimension, = 2n
  double tau = 0.0;
  std::vector<ScaledValue> probs;  // p_{N,2k}, k = 0..n
  double log_p_zero = 0.0;

  double prob(int k) const { return probs[static_cast<std::size_t>(k)].to_double(); }
};

// p_{N,2k} as coefficients of z^k in prod_i ((1-lambda_i) + lambda_i z).
// Every addend is nonnegative, so the convolution cannot cancel; tiny
// coefficients survive through ScaledValue.
inline RealCountDistribution distribution(const spectrum::Spectrum& s) {
  const int n = s.n;
  RealCountDistribution d;
  d.N = 2 * n;
  d.tau = s.tau;
  eginoe::detail::CompensatedSum logp0;
  std::vector<ScaledValue> c(static_cast<std::size_t>(n) + 1);
  c[0] = ScaledValue::from_double(1.0);
  int used = 0;
  for (double lam : s.lambdas) {
    if (lam < -kLambdaSlack || lam > 1.0 + kLambdaSlack)
      throw invariant_error("eigenvalue " + std::to_string(lam) + " outside (0,1) beyond slack");
    const double l = std::min(std::max(lam, 0.0), 1.0);
    logp0.add(std::log1p(-l));
    const ScaledValue sl = ScaledValue::from_double(l);
    const ScaledValue sm = ScaledValue::from_double(1.0 - l);
    for (int k = used + 1; k >= 1; --k) c[k] = c[k] * sm + c[k - 1] * sl;
    c[0] = c[0] * sm;
    ++used;
  }
  d.probs = std::move(c);
  d.log_p_zero = logp0.value();
  eginoe::detail::CompensatedSum total;
  for (const auto& p : d.probs) total.add(p.to_double());
  if (std::abs(total.value() - 1.0) > 1e-10)
    throw invariant_error("count probabilities sum to " + std::to_string(total.value()));
  const double p0 = d.probs[0].to_double();
  if (p0 > 0.0 && std::abs(std::exp(d.log_p_zero) - p0) > 1e-10 * p0)
    throw invariant_error("log_p_zero inconsistent with probs[0]");
  return d;
}

// log p_{2n,0} = -sum_{m<=K} Tr(M^m)/m - R_n(K), returned as the truncated
// series and the exact remainder R_n(K) = sum_i sum_{m>K} lambda_i^m / m
// (summed directly, all terms positive).
inline std::pair<double, double> log_p_zero_truncated(const spectrum::Spectrum& s, int K) {
  if (K < 1) throw argument_error("log_p_zero_truncated requires K >= 1");
  eginoe::detail::CompensatedSum truncated;
  eginoe::detail::CompensatedSum remainder;
  for (double lam : s.lambdas) {
    const double l = std::min(std::max(lam, 0.0), 1.0 - 1e-16);
    // partial sum over m = 1..K of l^m/m; the dropped tail past an early
    // break is bounded by the geometric estimate below 1e-18 relative
    eginoe::detail::CompensatedSum part;
    double term = l;
    for (int m = 1; m <= K && term > 0.0; ++m) {
      part.add(term / m);
      if (term * l / ((1.0 - l) * (m + 1)) < 1e-18 * part.sum) break;
      term *= l;
    }
    truncated.add(-part.value());
    // exact remainder: direct tail sum over m > K, all terms positive
    double tterm = std::pow(l, K + 1);
    eginoe::detail::CompensatedSum tail;
    for (long long m = K + 1; tterm > 0.0; ++m) {
      tail.add(tterm / static_cast<double>(m));
      if (tterm * l / ((1.0 - l) * static_cast<double>(m + 1)) < 1e-18 * tail.sum) break;
      tterm *= l;
    }
    remainder.add(tail.value());
  }
  return {truncated.value(), remainder.value()};
}

// log sum_k p_{N,2k} x^k = sum_i log(1 + (x-1) lambda_i), x in [0,2]
inline double log_generating(const spectrum::Spectrum& s, double x) {
  if (!(x >= 0.0 && x <= 2.0)) throw argument_error("log_generating requires x in [0,2]");
  if (x == 1.0) return 0.0;
  eginoe::detail::CompensatedSum acc;
  for (double lam : s.lambdas) {
    const double l = std::min(std::max(lam, 0.0), 1.0);
    acc.add(std::log1p((x - 1.0) * l));
  }
  return acc.value();
}

// Forrester-Nagao determinantal route for p_{2n,0}, n in {1,2}, using the
// closed-form beta values (s = sqrt(1+tau)):
//   beta_{1,2} = 2 sqrt(pi) (sqrt2 - s)/s
//   beta_{3,2} = -sqrt(pi) (2 sqrt2 - 2 sqrt2 s^2 + s^3)/s^3
//   beta_{1,4} = -sqrt(pi) (2 sqrt2 - 6 sqrt2 s^2 + 5 s^3)/s^3
//   beta_{3,4} = sqrt(pi) (12 sqrt2 - 16 sqrt2 s^2 + 12 sqrt2 s^4 - 7 s^5)/(2 s^5)
// each verified against the defining erfc double integral.
inline double prob_zero_forrester_nagao(int n, double tau) {
  if (n != 1 && n != 2) throw argument_error("prob_zero_forrester_nagao supports n in {1,2}");
  if (!(tau > -1.0 && tau < 1.0)) throw argument_error("tau must lie in (-1,1)");
  const double sq2 = std::sqrt(2.0);
  const double s = std::sqrt(1.0 + tau);
  const double rpi = std::sqrt(M_PI);
  const double b12 = 2.0 * rpi * (sq2 - s) / s;
  if (n == 1) {
    // ((1+tau)/2)^{1/2} / (2 Gamma(1/2) Gamma(1)) * b12
    return std::sqrt((1.0 + tau) / 2.0) / (2.0 * rpi) * b12;
  }
  const double s3 = s * s * s;
  const double s5 = s3 * s * s;
  const double b32 = -rpi * (2.0 * sq2 - 2.0 * sq2 * s * s + s3) / s3;
  const double b14 = -rpi * (2.0 * sq2 - 6.0 * sq2 * s * s + 5.0 * s3) / s3;
  const double b34 = rpi * (12.0 * sq2 - 16.0 * sq2 * s * s + 12.0 * sq2 * s * s * s * s - 7.0 * s5) / (2.0 * s5);
  const double det = b12 * b34 - b14 * b32;
  const double half = (1.0 + tau) / 2.0;
  // prefactor ((1+tau)/2)^{n(2n-1)/2} / (2^n prod_{l=1}^{2n} Gamma(l/2)), n = 2
  return half * half * half / (2.0 * M_PI) * det;
}

}  // namespace eginoe::probabilities
