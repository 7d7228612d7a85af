#pragma once

// Sampling of real elliptic Ginibre matrices, exact real-eigenvalue counting
// through the real Schur form (Householder Hessenberg reduction + Francis
// double-shift QR), and statistical validation against the exact results.
//
// Determinism contract: sample i (0-based), attempt a, derives its own RNG
// substream as
//     z = seed + (i+1) * 0x9E3779B97F4A7C15 + a * 0xD1B54A32D192ED03
// fed through SplitMix64 to initialize xoshiro256++.  Histograms therefore
// depend only on (seed, samples), never on the worker count or schedule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eginoe/asymptotics.hpp"
#include "eginoe/detail/numeric.hpp"
#include "eginoe/detail/parallel.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/spectrum.hpp"

namespace eginoe::montecarlo {

// ---------------------------------------------------------------------------
// RNG: SplitMix64 seeding, xoshiro256++ stream, polar-method Gaussians

struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }
  static Xoshiro256pp for_sample(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt) {
    return Xoshiro256pp(seed + (index + 1) * 0x9E3779B97F4A7C15ull + attempt * 0xD1B54A32D192ED03ull);
  }
  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }
  // uniform in (0,1): 53-bit mantissa
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }
  // standard normal via the Marsaglia polar method, spare value cached
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, r2;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// ---------------------------------------------------------------------------
// Sampling

struct SamplerConfig {
  int N = 0;
  double tau = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct EmpiricalCounts {
  std::map<int, std::uint64_t> histogram;  // even count -> occurrences
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int N = 0;
  double tau = 0.0;
};

// M = sqrt((1+tau)/2) S + sqrt((1-tau)/2) A with S GOE and A antisymmetric
// Gaussian, normalized to E M_ij^2 = 1/N, E M_ij M_ji = tau/N,
// E M_ii^2 = (1+tau)/N.  Draw order: for each row i, the diagonal Gaussian,
// then the (s, a) pair of each column j > i.
inline std::vector<double> sample_matrix(int N, double tau, Xoshiro256pp& rng) {
  if (N <= 0 || N % 2 != 0) throw argument_error("sample_matrix requires even N > 0");
  const double as = std::sqrt((1.0 + tau) / 2.0);
  const double ba = std::sqrt((1.0 - tau) / 2.0);
  const double istd = 1.0 / std::sqrt(static_cast<double>(N));
  std::vector<double> m(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i) {
    m[static_cast<std::size_t>(i) * N + i] = as * std::sqrt(2.0) * rng.gaussian() * istd;
    for (int j = i + 1; j < N; ++j) {
      const double s = rng.gaussian();
      const double a = rng.gaussian();
      m[static_cast<std::size_t>(i) * N + j] = (as * s + ba * a) * istd;
      m[static_cast<std::size_t>(j) * N + i] = (as * s - ba * a) * istd;
    }
  }
  return m;
}

namespace detail {

// Householder reduction to upper Hessenberg form, row-major, in place.
inline void hessenberg(std::vector<double>& a, int n) {
  std::vector<double> u(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k + 2 < n; ++k) {
    const int len = n - k - 1;
    double norm2 = 0.0;
    for (int i = 0; i < len; ++i) {
      u[i] = a[static_cast<std::size_t>(k + 1 + i) * n + k];
      norm2 += u[i] * u[i];
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double sigma = u[0] >= 0.0 ? norm : -norm;
    u[0] += sigma;
    const double c = 1.0 / (sigma * u[0]);  // 2/u^T u
    // left update: rows k+1..n-1, columns k..n-1
    for (int j = k; j < n; ++j) w[j] = 0.0;
    for (int i = 0; i < len; ++i) {
      const double* row = &a[static_cast<std::size_t>(k + 1 + i) * n];
      const double ui = u[i];
      for (int j = k; j < n; ++j) w[j] += ui * row[j];
    }
    for (int i = 0; i < len; ++i) {
      double* row = &a[static_cast<std::size_t>(k + 1 + i) * n];
      const double cu = c * u[i];
      for (int j = k; j < n; ++j) row[j] -= cu * w[j];
    }
    // right update: all rows, columns k+1..n-1
    for (int i = 0; i < n; ++i) {
      double* row = &a[static_cast<std::size_t>(i) * n];
      double s = 0.0;
      for (int j = 0; j < len; ++j) s += row[k + 1 + j] * u[j];
      const double cs = c * s;
      for (int j = 0; j < len; ++j) row[k + 1 + j] -= cs * u[j];
    }
    a[static_cast<std::size_t>(k + 1) * n + k] = -sigma;
    for (int i = k + 2; i < n; ++i) a[static_cast<std::size_t>(i) * n + k] = 0.0;
  }
}

inline constexpr double kSplitTol = 1e-11;

// Francis double-shift QR on an upper Hessenberg matrix; returns the number
// of real eigenvalues.  A deflated 2x2 block with discriminant
// q = p^2 + w >= -kSplitTol * (p^2 + |w|) counts as a real pair.
// Iteration budget: 30 n double-shift sweeps in total.
inline int hqr_count_real(std::vector<double>& a, int n, std::uint64_t payload_hash) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  int real_count = 0;
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));
  if (anorm == 0.0) return n;
  const int max_total_iters = 30 * n;
  int total_iters = 0;
  int nn = n - 1;
  double t = 0.0;
  const double eps = 2.220446049250313e-16;
  while (nn >= 0) {
    int its = 0;
    int l;
    for (;;) {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) <= eps * s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      const double x = at(nn, nn);
      if (l == nn) {  // one real root
        ++real_count;
        --nn;
        break;
      }
      const double y = at(nn - 1, nn - 1);
      const double w = at(nn, nn - 1) * at(nn - 1, nn);
      if (l == nn - 1) {  // 2x2 block
        const double p = 0.5 * (y - x);
        const double q = p * p + w;
        const double scale = p * p + std::abs(w);
        if (q >= -kSplitTol * scale) real_count += 2;
        nn -= 2;
        break;
      }
      if (total_iters++ >= max_total_iters)
        throw numerical_error("Francis QR exceeded 30N sweeps", payload_hash);
      double sx = at(nn, nn), sy = y, sw = w;
      if (its == 10 || its == 20) {  // exceptional shift
        t += sx;
        for (int i = 0; i <= nn; ++i) at(i, i) -= sx;
        double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
        sx = sy = 0.75 * s;
        sw = -0.4375 * s * s;
      }
      ++its;
      int m;
      double p = 0.0, q = 0.0, r = 0.0;
      for (m = nn - 2; m >= l; --m) {
        const double z = at(m, m);
        const double rr = sx - z;
        const double ss = sy - z;
        p = (rr * ss - sw) / at(m + 1, m) + at(m, m + 1);
        q = at(m + 1, m + 1) - z - rr - ss;
        r = at(m + 2, m + 1);
        const double s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v =
            std::abs(z) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
        if (u <= eps * v) break;
      }
      for (int i = m + 2; i <= nn; ++i) {
        at(i, i - 2) = 0.0;
        if (i != m + 2) at(i, i - 3) = 0.0;
      }
      for (int k = m; k <= nn - 1; ++k) {  // double-shift sweep
        double xnorm = 0.0;
        if (k != m) {
          p = at(k, k - 1);
          q = at(k + 1, k - 1);
          r = k != nn - 1 ? at(k + 2, k - 1) : 0.0;
          xnorm = std::abs(p) + std::abs(q) + std::abs(r);
          if (xnorm != 0.0) {
            p /= xnorm;
            q /= xnorm;
            r /= xnorm;
          }
        }
        double s = std::sqrt(p * p + q * q + r * r);
        if (p < 0.0) s = -s;
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) at(k, k - 1) = -at(k, k - 1);
        } else {
          at(k, k - 1) = -s * xnorm;
        }
        p += s;
        const double xx = p / s;
        const double yy = q / s;
        const double zz = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {  // row modification
          double pp = at(k, j) + q * at(k + 1, j);
          if (k != nn - 1) {
            pp += r * at(k + 2, j);
            at(k + 2, j) -= pp * zz;
          }
          at(k + 1, j) -= pp * yy;
          at(k, j) -= pp * xx;
        }
        const int mmin = std::min(nn, k + 3);
        for (int i = l; i <= mmin; ++i) {  // column modification
          double pp = xx * at(i, k) + yy * at(i, k + 1);
          if (k != nn - 1) {
            pp += zz * at(i, k + 2);
            at(i, k + 2) -= pp * r;
          }
          at(i, k + 1) -= pp * q;
          at(i, k) -= pp;
        }
      }
    }
  }
  return real_count;
}

}  // namespace detail

// Number of real eigenvalues of a square real matrix via the real Schur form.
inline int count_real_eigenvalues(std::vector<double> matrix, int n) {
  if (n <= 0 || matrix.size() != static_cast<std::size_t>(n) * n)
    throw argument_error("count_real_eigenvalues requires a square matrix");
  const std::uint64_t h = eginoe::detail::fnv1a(matrix.data(), matrix.size() * sizeof(double));
  detail::hessenberg(matrix, n);
  return detail::hqr_count_real(matrix, n, h);
}

inline EmpiricalCounts run(const SamplerConfig& config) {
  if (config.N <= 0 || config.N % 2 != 0) throw argument_error("run requires even N > 0");
  if (config.samples == 0) throw argument_error("run requires samples >= 1");
  if (!(config.tau > -1.0 && config.tau <= 1.0)) throw argument_error("tau must lie in (-1,1]");
  const unsigned workers = std::max(1u, config.workers);
  const std::uint64_t S = config.samples;
  std::vector<int> counts(S);
  std::vector<std::uint64_t> failures_by_worker(workers, 0);
  const std::uint64_t chunk = (S + workers - 1) / workers;
  eginoe::detail::parallel_for(
      workers,
      [&](std::size_t w) {
        const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
        const std::uint64_t hi = std::min<std::uint64_t>(S, lo + chunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
          int count = -1;
          for (std::uint64_t attempt = 0; attempt < 4; ++attempt) {
            Xoshiro256pp rng = Xoshiro256pp::for_sample(config.seed, i, attempt);
            std::vector<double> m = sample_matrix(config.N, config.tau, rng);
            try {
              count = count_real_eigenvalues(std::move(m), config.N);
              break;
            } catch (const numerical_error&) {
              ++failures_by_worker[w];
            }
          }
          if (count < 0) throw numerical_error("sample failed after retries");
          if (count % 2 != config.N % 2) throw invariant_error("count parity violates N parity");
          counts[i] = count;
        }
      },
      workers);
  std::uint64_t failures = 0;
  for (auto f : failures_by_worker) failures += f;
  if (static_cast<double>(failures) > 1e-4 * static_cast<double>(S))
    throw numerical_error("QR failure rate above 0.01% of samples");
  EmpiricalCounts out;
  out.samples = S;
  out.seed = config.seed;
  out.N = config.N;
  out.tau = config.tau;
  for (std::uint64_t i = 0; i < S; ++i) ++out.histogram[counts[i]];
  return out;
}

struct CltReport {
  double mean_exact = 0.0;     // E N = 2 Tr M from the spectrum route
  double sample_mean = 0.0;
  double sample_var = 0.0;     // variance of (k - E)/sqrt(E)
  double ks_distance = 0.0;    // continuity-corrected Kolmogorov distance
  double sigma2_pred = 0.0;
  std::uint64_t samples = 0;
};

// Standardize counts with the exact mean and compare against N(0, sigma2_pred).
inline CltReport clt_check(const EmpiricalCounts& counts, double sigma2_pred) {
  if (counts.samples < 1000) throw argument_error("clt_check requires at least 10^3 samples");
  spectrum::Spectrum s = spectrum::eigendecompose(genmatrix::build(counts.N / 2, counts.tau));
  const double mean = 2.0 * spectrum::trace_power(s, 1);
  CltReport rep;
  rep.mean_exact = mean;
  rep.sigma2_pred = sigma2_pred;
  rep.samples = counts.samples;
  const double scale = std::sqrt(mean);
  double m1 = 0.0, m2 = 0.0;
  for (const auto& [k, c] : counts.histogram) {
    const double z = (static_cast<double>(k) - mean) / scale;
    m1 += z * static_cast<double>(c);
    m2 += z * z * static_cast<double>(c);
  }
  const double S = static_cast<double>(counts.samples);
  rep.sample_mean = m1 / S;
  rep.sample_var = (m2 - m1 * m1 / S) / (S - 1.0);
  if (sigma2_pred <= 0.0) {
    rep.ks_distance = (counts.histogram.size() == 1 &&
                       std::abs(counts.histogram.begin()->first - mean) < 1e-9)
                          ? 0.0
                          : 1.0;
    return rep;
  }
  const double sd = std::sqrt(sigma2_pred);
  double cdf = 0.0, ks = 0.0;
  for (const auto& [k, c] : counts.histogram) {
    cdf += static_cast<double>(c) / S;
    // half-lattice continuity correction: the count lattice has spacing 2
    const double z = (static_cast<double>(k) + 1.0 - mean) / scale / sd;
    const double model = 0.5 * std::erfc(-z / std::sqrt(2.0));
    ks = std::max(ks, std::abs(cdf - model));
  }
  rep.ks_distance = ks;
  return rep;
}

}  // namespace eginoe::montecarlo
