#pragma once

// Serialization and the on-disk spectra cache used by the CLI.  All floating
// output is formatted with 17 significant digits so doubles round-trip
// exactly; CSV uses '.' decimal, ',' separator, a header row and LF endings.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eginoe/detail/numeric.hpp"
#include "eginoe/errors.hpp"
#include "eginoe/genmatrix.hpp"
#include "eginoe/spectrum.hpp"

namespace eginoe::io {

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_double_list(const std::vector<double>& vs) {
  std::string out = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += format_double(vs[i]);
  }
  out += "]";
  return out;
}

inline std::uint64_t double_bits(double v) {
  std::uint64_t b;
  static_assert(sizeof(b) == sizeof(v));
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

inline std::string tau_bits_hex(double tau) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, double_bits(tau));
  return buf;
}

// ---------------------------------------------------------------------------
// Spectra cache

struct CacheEntry {
  int schema_version = kSchemaVersion;
  int n = 0;
  double tau = 0.0;
  std::string build_route;
  std::vector<double> lambdas;
  std::uint64_t checksum = 0;
};

inline std::uint64_t cache_checksum(const CacheEntry& e) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const std::uint64_t nn = static_cast<std::uint64_t>(e.n);
  h = eginoe::detail::fnv1a(&nn, sizeof(nn), h);
  const std::uint64_t tb = double_bits(e.tau);
  h = eginoe::detail::fnv1a(&tb, sizeof(tb), h);
  h = eginoe::detail::fnv1a(e.build_route.data(), e.build_route.size(), h);
  for (double l : e.lambdas) {
    const std::uint64_t lb = double_bits(l);
    h = eginoe::detail::fnv1a(&lb, sizeof(lb), h);
  }
  return h;
}

inline std::filesystem::path cache_path(const std::filesystem::path& dir, int n, double tau) {
  return dir / ("spec_n" + std::to_string(n) + "_tau" + tau_bits_hex(tau) + "_v" +
                std::to_string(kSchemaVersion) + ".json");
}

inline void cache_store(const std::filesystem::path& dir, const CacheEntry& entry) {
  std::filesystem::create_directories(dir);
  const auto path = cache_path(dir, entry.n, entry.tau);
  std::ostringstream os;
  os << "{\"schema_version\":" << entry.schema_version << ",\"n\":" << entry.n
     << ",\"tau\":" << format_double(entry.tau) << ",\"build_route\":\"" << entry.build_route
     << "\",\"lambdas\":" << format_double_list(entry.lambdas) << ",\"checksum\":\""
     << std::to_string(cache_checksum(entry)) << "\"}\n";
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw error("cannot write cache file " + tmp, "io");
    f << os.str();
  }
  std::filesystem::rename(tmp, path);  // atomic publish
}

inline bool cache_load(const std::filesystem::path& dir, int n, double tau, CacheEntry& out) {
  const auto path = cache_path(dir, n, tau);
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  nlohmann::json j;
  try {
    f >> j;
    out.schema_version = j.at("schema_version").get<int>();
    if (out.schema_version != kSchemaVersion) return false;
    out.n = j.at("n").get<int>();
    out.tau = j.at("tau").get<double>();
    out.build_route = j.at("build_route").get<std::string>();
    out.lambdas = j.at("lambdas").get<std::vector<double>>();
    out.checksum = std::stoull(j.at("checksum").get<std::string>());
  } catch (const std::exception&) {
    return false;
  }
  return out.checksum == cache_checksum(out) && out.n == n && double_bits(out.tau) == double_bits(tau);
}

// Cached build + eigendecompose keyed on (n, tau, route, schema version).
inline spectrum::Spectrum cached_spectrum(const std::string& cache_dir, int n, double tau,
                                          genmatrix::Tolerances tol = {}) {
  if (!cache_dir.empty()) {
    CacheEntry e;
    if (cache_load(cache_dir, n, tau, e)) {
      spectrum::Spectrum s;
      s.n = n;
      s.tau = tau;
      s.lambdas = e.lambdas;
      return s;
    }
  }
  genmatrix::GeneratingMatrix m = genmatrix::build(n, tau, tol);
  spectrum::Spectrum s = spectrum::eigendecompose(m);
  if (!cache_dir.empty()) {
    CacheEntry e;
    e.n = n;
    e.tau = tau;
    e.build_route = genmatrix::route_name(m.route);
    e.lambdas = s.lambdas;
    e.checksum = cache_checksum(e);
    cache_store(cache_dir, e);
  }
  return s;
}

}  // namespace eginoe::io
