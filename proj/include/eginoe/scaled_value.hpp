#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace eginoe::specfun {

// Base-2 exponent-tracked real number: value = mantissa * 2^exponent with
// mantissa in [1,2) u {0} u (-2,-1].  Used wherever intermediate magnitudes
// leave the double range (weighted Hermite recurrences, tiny probabilities).
struct ScaledValue {
  double mantissa = 0.0;
  std::int64_t exponent = 0;

  static ScaledValue normalized(double m, std::int64_t e) {
    ScaledValue v;
    if (m == 0.0 || !std::isfinite(m)) {
      v.mantissa = m == 0.0 ? 0.0 : m;
      v.exponent = 0;
      return v;
    }
    int k = 0;
    double f = std::frexp(m, &k);  // m = f * 2^k, |f| in [0.5,1)
    v.mantissa = 2.0 * f;
    v.exponent = e + k - 1;
    return v;
  }

  static ScaledValue from_double(double x) { return normalized(x, 0); }

  // exp2(l2) as a ScaledValue; safe for |l2| far beyond the double range.
  static ScaledValue from_log2(double l2) {
    double fl = std::floor(l2);
    ScaledValue v;
    v.mantissa = std::exp2(l2 - fl);  // in [1,2)
    v.exponent = static_cast<std::int64_t>(fl);
    if (v.mantissa >= 2.0) {  // guard the l2-fl == 1 rounding edge
      v.mantissa *= 0.5;
      ++v.exponent;
    }
    return v;
  }

  bool is_zero() const { return mantissa == 0.0; }

  double to_double() const {
    if (is_zero()) return 0.0;
    if (exponent > 1100) return mantissa > 0 ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity();
    if (exponent < -1140) return mantissa > 0 ? 0.0 : -0.0;
    return std::ldexp(mantissa, static_cast<int>(exponent));
  }

  // natural log; requires a positive value
  double log() const { return std::log(mantissa) + static_cast<double>(exponent) * 0.6931471805599453; }
  double log2() const { return std::log2(mantissa) + static_cast<double>(exponent); }

  friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return normalized(a.mantissa * b.mantissa, a.exponent + b.exponent);
  }

  friend ScaledValue operator*(const ScaledValue& a, double c) {
    if (a.is_zero() || c == 0.0) return {};
    return normalized(a.mantissa * c, a.exponent);
  }

  friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const ScaledValue& hi = (a.exponent >= b.exponent) ? a : b;
    const ScaledValue& lo = (a.exponent >= b.exponent) ? b : a;
    std::int64_t d = lo.exponent - hi.exponent;
    if (d < -1100) return hi;
    return normalized(hi.mantissa + std::ldexp(lo.mantissa, static_cast<int>(d)), hi.exponent);
  }

  friend ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) {
    ScaledValue nb = b;
    nb.mantissa = -nb.mantissa;
    return a + nb;
  }

  // three-way magnitude-aware compare of the represented values
  friend bool operator<(const ScaledValue& a, const ScaledValue& b) {
    return (b - a).mantissa > 0.0;
  }
};

}  // namespace eginoe::specfun
