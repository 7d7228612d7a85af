#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <random>

#include "eginoe/scaled_value.hpp"

using eginoe::specfun::ScaledValue;
using Catch::Approx;

namespace {

double random_finite_double(std::mt19937_64& rng) {
  for (;;) {
    std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    if (std::isfinite(v)) return v;
  }
}

}  // namespace

TEST_CASE("encode/decode is the identity for finite doubles") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200000; ++i) {
    const double v = random_finite_double(rng);
    const ScaledValue s = ScaledValue::from_double(v);
    REQUIRE(s.to_double() == v);
    if (v != 0.0) {
      REQUIRE(std::abs(s.mantissa) >= 1.0);
      REQUIRE(std::abs(s.mantissa) < 2.0);
    }
  }
  // denormals and edge cases
  for (double v : {5e-324, -5e-324, 1.7976931348623157e308, -1.7976931348623157e308, 0.0, -0.0}) {
    REQUIRE(ScaledValue::from_double(v).to_double() == v);
  }
}

TEST_CASE("arithmetic matches double arithmetic in range") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 20000; ++i) {
    const double a = u(rng), b = u(rng);
    const ScaledValue sa = ScaledValue::from_double(a), sb = ScaledValue::from_double(b);
    REQUIRE((sa * sb).to_double() == Approx(a * b).margin(1e-300));
    REQUIRE((sa + sb).to_double() == Approx(a + b).margin(1e-300));
    REQUIRE((sa - sb).to_double() == Approx(a - b).margin(1e-300));
  }
}

TEST_CASE("exponent tracking far beyond double range") {
  // (2^1000)^4 = 2^4000, then scaled back down
  ScaledValue big = ScaledValue::from_log2(1000.0);
  ScaledValue b4 = big * big * big * big;
  REQUIRE(b4.exponent == 4000);
  REQUIRE(b4.mantissa == Approx(1.0));
  ScaledValue tiny = ScaledValue::from_log2(-3990.0);
  REQUIRE((b4 * tiny).to_double() == Approx(1024.0));
  REQUIRE(big.log2() == Approx(1000.0));
  REQUIRE(ScaledValue::from_log2(-1e6).log2() == Approx(-1e6));
}

TEST_CASE("addition with mismatched exponents keeps the dominant term") {
  ScaledValue a = ScaledValue::from_log2(500.0);
  ScaledValue b = ScaledValue::from_log2(-2000.0);
  REQUIRE((a + b).log2() == Approx(500.0));
  REQUIRE((b + a).log2() == Approx(500.0));
  ScaledValue z;
  REQUIRE((z + a).log2() == Approx(500.0));
  REQUIRE((a - a).is_zero());
}

TEST_CASE("ordering") {
  REQUIRE(ScaledValue::from_double(1.0) < ScaledValue::from_log2(800.0));
  REQUIRE(!(ScaledValue::from_log2(800.0) < ScaledValue::from_double(1.0)));
  REQUIRE(ScaledValue::from_double(-3.0) < ScaledValue::from_double(2.0));
}
