#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "eginoe/detail/numeric.hpp"
#include "eginoe/specfun.hpp"

using namespace eginoe;
using namespace eginoe::specfun;
using Catch::Approx;

TEST_CASE("scaled Hermite: monomial limit, explicit polynomials, parity") {
  REQUIRE(scaled_hermite(2, 0.0, 3.0) == Approx(9.0));          // tau = 0 gives x^k
  REQUIRE(scaled_hermite(2, 1.0, 0.0) == Approx(-1.0));         // C_2 = x^2 - tau
  // (tau/2)^2 H_4(x/sqrt(2 tau)) expanded through H_4(y) = 16y^4 - 48y^2 + 12
  const double tau = 0.5, x = 1.25;
  const double y = x / std::sqrt(2.0 * tau);
  const double h4 = (tau / 2.0) * (tau / 2.0) * (16.0 * y * y * y * y - 48.0 * y * y + 12.0);
  REQUIRE(scaled_hermite(4, tau, x) == Approx(h4).epsilon(1e-12));
  REQUIRE(scaled_hermite(4, tau, x) == Approx(-1.49609375).epsilon(1e-14));
  REQUIRE(scaled_hermite(0, 0.7, 5.0) == 1.0);
  REQUIRE(scaled_hermite(1, 0.7, 5.0) == 5.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-8.0, 8.0), ut(-0.95, 0.999);
  for (int i = 0; i < 500; ++i) {
    const int k = static_cast<int>(rng() % 40);
    const double tt = ut(rng), xx = ux(rng);
    REQUIRE(scaled_hermite(k, tt, -xx) == (k % 2 ? -scaled_hermite(k, tt, xx) : scaled_hermite(k, tt, xx)));
  }
  REQUIRE_THROWS_AS(scaled_hermite(kMaxHermiteDegree + 1, 0.5, 0.0), config_error);
}

TEST_CASE("normalized weighted Hermite values") {
  REQUIRE(normalized_hermite_weighted(0, 0.5, 0.0).to_double() == Approx(1.0));
  // D_2 = x^2/sqrt(2) at tau = 0, weighted by e^{-x^2/2}
  REQUIRE(normalized_hermite_weighted(2, 0.0, 1.0).to_double() ==
          Approx(0.4288819424803534).epsilon(1e-13));
  // unnormalized-route oracle: S_k = C_k e^{-x^2/(2(1+tau))}/sqrt(k!)
  const double tau = 0.9, x = 2.0;
  const double oracle = scaled_hermite(6, tau, x) * std::exp(-x * x / (2.0 * (1.0 + tau))) /
                        std::sqrt(720.0);
  REQUIRE(normalized_hermite_weighted(6, tau, x).to_double() == Approx(oracle).epsilon(1e-12));
  // no overflow at extreme degree/argument (contract: k <= 1e4, |x| <= 1e3)
  const auto v = normalized_hermite_weighted(10000, 0.5, 1000.0);
  REQUIRE(std::isfinite(v.mantissa));
  // Mehler bound: |S_k| <= (1-tau^2)^{-1/4}
  for (int k : {0, 5, 40, 400}) {
    const auto s = normalized_hermite_weighted(k, 0.6, 7.0);
    REQUIRE(std::abs(s.to_double()) <= std::pow(1.0 - 0.36, -0.25) + 1e-12);
  }
}

TEST_CASE("weighted_hermite_even_row matches single evaluations") {
  std::vector<double> row(30);
  for (double tau : {-0.5, 0.0, 0.5, 0.99}) {
    weighted_hermite_even_row(30, tau, 1.7, row.data());
    for (int j : {0, 1, 7, 29})
      REQUIRE(row[j] == Approx(normalized_hermite_weighted(2 * j, tau, 1.7).to_double()).epsilon(1e-13));
  }
}

TEST_CASE("erfc, log_gamma, scaled Bessel") {
  REQUIRE(erfc(0.0) == 1.0);
  REQUIRE(erfc(1.0) == Approx(0.15729920705028513).epsilon(1e-13));
  REQUIRE(erfc(5.0) == Approx(1.5374597944280349e-12).epsilon(1e-13));
  REQUIRE(log_gamma(5.0) == Approx(std::log(24.0)).epsilon(1e-14));
  REQUIRE_THROWS_AS(log_gamma(0.0), argument_error);
  REQUIRE(bessel_i_scaled(0, 0.0) == 1.0);
  REQUIRE(bessel_i_scaled(1, 0.0) == 0.0);
  struct Ref {
    int nu;
    double x, v;
  };
  // reference values across the series/asymptotic seam at x = 40
  const Ref refs[] = {
      {0, 1.0, 0.46575960759364044},    {1, 1.0, 0.20791041534970845},
      {0, 10.0, 0.12783333716342861},   {1, 10.0, 0.12126268138445552},
      {0, 39.5, 0.063680100828389915},  {1, 39.5, 0.062868787292556939},
      {0, 40.5, 0.06288397125805982},   {1, 40.5, 0.062102710535787328},
      {0, 100.0, 0.039944379299096683}, {1, 100.0, 0.039744153025130253},
      {0, 700.0, 0.015081295651531358}, {1, 700.0, 0.015070519444716847},
      {0, 1350.0, 0.01085883937202692}, {1, 1350.0, 0.010854816834338222},
  };
  for (const auto& r : refs) REQUIRE(bessel_i_scaled(r.nu, r.x) == Approx(r.v).epsilon(1e-13));
  REQUIRE_THROWS_AS(bessel_i_scaled(2, 1.0), argument_error);
  REQUIRE_THROWS_AS(bessel_i_scaled(0, -1.0), argument_error);
}

TEST_CASE("zeta(3/2) reproduced by the summation oracle") {
  // oracle: direct sum to M = 10^6 plus the integral tail bound correction
  eginoe::detail::CompensatedSum acc;
  for (int k = 1000000; k >= 1; --k) acc.add(std::pow(static_cast<double>(k), -1.5));
  const double oracle = acc.value() + 2.0 / std::sqrt(1.0e6);
  REQUIRE(std::abs(zeta_three_halves() - oracle) < 1e-9);  // oracle itself is ~5e-10 coarse
  REQUIRE(zeta_three_halves() == Approx(2.6123753486854883).epsilon(1e-12));
  REQUIRE(polylog(1.5, 1.0) == zeta_three_halves());
  REQUIRE(zeta_three_halves() / kSqrt2Pi == Approx(1.0421869788690766).epsilon(1e-12));
}

TEST_CASE("polylog values and domain") {
  REQUIRE(polylog(1.5, 0.0) == 0.0);
  REQUIRE(polylog(1.5, -1.0) ==
          Approx(-(1.0 - std::exp2(-0.5)) * zeta_three_halves()).epsilon(1e-12));
  REQUIRE(polylog(1.5, -1.0) == Approx(-0.76514702462540795).epsilon(1e-12));
  REQUIRE(polylog(1.5, 0.5) == Approx(0.62483702081991385).epsilon(1e-12));
  REQUIRE(polylog(1.5, 0.75) == Approx(1.1226474407920957).epsilon(1e-12));
  REQUIRE(polylog(1.5, 0.9999) == Approx(2.5770714271060549).epsilon(1e-11));
  REQUIRE(polylog(1.5, 0.999999) == Approx(2.6088319004525849).epsilon(1e-11));
  REQUIRE(polylog(1.5, -0.3) == Approx(-0.27254108074465196).epsilon(1e-12));
  REQUIRE(polylog(0.5, 0.5) == Approx(0.80612672304285226).epsilon(1e-12));
  REQUIRE(polylog(0.5, 0.25) == Approx(0.30573493039929638).epsilon(1e-12));
  REQUIRE(polylog(0.5, -1.0) == Approx(-0.60489864342163037).epsilon(1e-12));
  REQUIRE(std::abs(polylog(0.5, 0.9999) - 175.78062010740096) < 1e-9);
  // direct-summation cross-check at a benign argument
  eginoe::detail::CompensatedSum direct;
  for (int k = 400; k >= 1; --k) direct.add(std::pow(-0.5, k) / std::sqrt(static_cast<double>(k)));
  REQUIRE(polylog(0.5, -0.5) == Approx(direct.value()).epsilon(1e-12));
  REQUIRE_THROWS_AS(polylog(0.5, 1.0), argument_error);
  REQUIRE_THROWS_AS(polylog(1.5, 1.5), argument_error);
  REQUIRE_THROWS_AS(polylog(1.0, 0.5), argument_error);
}

TEST_CASE("quadrature rules") {
  const auto gh1 = quadrature(QuadKind::gauss_hermite, 1);
  REQUIRE(gh1.nodes[0] == Approx(0.0).margin(1e-15));
  REQUIRE(gh1.weights[0] == Approx(std::sqrt(M_PI)).epsilon(1e-14));

  const auto gl2 = quadrature(QuadKind::gauss_legendre, 2);
  REQUIRE(gl2.nodes[0] == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  REQUIRE(gl2.nodes[1] == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  REQUIRE(gl2.weights[0] == Approx(1.0).epsilon(1e-14));
  REQUIRE(gl2.weights[1] == Approx(1.0).epsilon(1e-14));

  // GH20 integrates t^38 e^{-t^2} to Gamma(39/2)
  const auto gh20 = quadrature(QuadKind::gauss_hermite, 20);
  eginoe::detail::CompensatedSum mom;
  for (int q = 0; q < 20; ++q) mom.add(gh20.weights[q] * std::pow(gh20.nodes[q], 38));
  REQUIRE(mom.value() == Approx(27724322986333718.0).epsilon(1e-11));

  // moments of assorted even orders stay exact within tolerance
  for (int Q : {7, 16, 33}) {
    const auto r = quadrature(QuadKind::gauss_hermite, Q);
    for (int p = 0; 2 * p <= 2 * Q - 2; p += 3) {
      eginoe::detail::CompensatedSum s;
      for (int q = 0; q < Q; ++q) s.add(r.weights[q] * std::pow(r.nodes[q], 2 * p));
      const double exact = std::exp(log_gamma(p + 0.5));
      REQUIRE(s.value() == Approx(exact).epsilon(1e-11));
    }
  }

  // weight sums and positivity at large order (rule invariants)
  for (int Q : {150, 1024}) {
    const auto r = quadrature(QuadKind::gauss_hermite, Q);
    eginoe::detail::CompensatedSum s;
    for (double w : r.weights) s.add(w);
    REQUIRE(s.value() == Approx(std::sqrt(M_PI)).epsilon(1e-13));
    for (double w : r.scaled_weights) REQUIRE(w > 0.0);
    for (int q = 0; q + 1 < Q; ++q) REQUIRE(r.nodes[q] < r.nodes[q + 1]);
  }
  const auto gl = quadrature(QuadKind::gauss_legendre, 64);
  eginoe::detail::CompensatedSum s;
  for (double w : gl.weights) s.add(w);
  REQUIRE(s.value() == Approx(2.0).epsilon(1e-14));

  // determinism
  const auto a = quadrature(QuadKind::gauss_hermite, 37);
  const auto b = quadrature(QuadKind::gauss_hermite, 37);
  REQUIRE(a.nodes == b.nodes);
  REQUIRE(a.weights == b.weights);

  REQUIRE_THROWS_AS(quadrature(QuadKind::gauss_hermite, 0), argument_error);
  REQUIRE_THROWS_AS(quadrature(QuadKind::gauss_hermite, 10001), argument_error);
}

TEST_CASE("Mehler even-index identity") {
  for (double tau : {0.3, 0.6, 0.9})
    for (double x : {0.0, 0.5, 2.0})
      for (double y : {0.25, 1.0, 1.5}) {
        // J from the geometric tail bound |term_j| <= C e^{(x^2+y^2)/2} tau^{2j}
        const int J = static_cast<int>(std::ceil(
                          (std::log(1e-13) - (x * x + y * y) / 2.0) / (2.0 * std::log(tau)))) + 4;
        const double sq = std::sqrt(2.0 * tau);
        eginoe::detail::CompensatedSum sum;
        for (int j = 0; j <= J; ++j) {
          auto term = scaled_hermite_tracked(2 * j, tau, sq * x) *
                      scaled_hermite_tracked(2 * j, tau, sq * y) *
                      ScaledValue::from_log2(-log_gamma(2.0 * j + 1.0) * kLog2E);
          sum.add(term.to_double());
        }
        const double rhs = std::exp(-tau * tau * (x * x + y * y) / (1.0 - tau * tau)) *
                           std::cosh(2.0 * tau * x * y / (1.0 - tau * tau)) /
                           std::sqrt(1.0 - tau * tau);
        REQUIRE(sum.value() == Approx(rhs).epsilon(1e-9));
      }
}

TEST_CASE("Gaussian-cosh product integral identity, k = 2 and 3") {
  const auto rule = quadrature(QuadKind::gauss_hermite, 96);
  auto rhs = [](int k, double x0, double xk) {
    return std::pow(M_PI / 2.0, (k - 1) / 2.0) / std::sqrt(static_cast<double>(k)) *
           std::exp((k - 1.0) * (x0 * x0 + xk * xk) / (2.0 * k)) * std::cosh(x0 * xk / k);
  };
  for (double x0 : {0.3, 0.9, 1.7})
    for (double xk : {0.5, 1.3, 2.0}) {
      eginoe::detail::CompensatedSum l2;
      for (int q = 0; q < rule.order; ++q)
        l2.add(rule.weights[q] * std::cosh(x0 * rule.nodes[q]) * std::cosh(rule.nodes[q] * xk));
      REQUIRE(0.5 * l2.value() == Approx(rhs(2, x0, xk)).epsilon(1e-8));
      eginoe::detail::CompensatedSum l3;
      for (int qa = 0; qa < rule.order; ++qa)
        for (int qb = 0; qb < rule.order; ++qb)
          l3.add(rule.weights[qa] * rule.weights[qb] * std::cosh(x0 * rule.nodes[qa]) *
                 std::cosh(rule.nodes[qa] * rule.nodes[qb]) * std::cosh(rule.nodes[qb] * xk));
      REQUIRE(0.25 * l3.value() == Approx(rhs(3, x0, xk)).epsilon(1e-8));
    }
}
