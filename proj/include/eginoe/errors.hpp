#pragma once

#include <stdexcept>
#include <string>

namespace eginoe {

// Error hierarchy. Everything thrown by the library derives from error, so
// callers (notably the CLI) can map failures to structured diagnostics.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what_arg, std::string kind)
      : std::runtime_error(what_arg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Bad user-supplied argument (domain violation, out-of-range parameter).
class argument_error : public error {
 public:
  explicit argument_error(const std::string& w) : error(w, "argument") {}
};

// Static configuration limit exceeded (e.g. Hermite degree cap).
class config_error : public error {
 public:
  explicit config_error(const std::string& w) : error(w, "configuration") {}
};

// Two independent numerical routes disagreed beyond tolerance.
class consistency_error : public error {
 public:
  consistency_error(const std::string& w, int j, int k)
      : error(w, "internal-consistency"), worst_j(j), worst_k(k) {}
  int worst_j = 0;
  int worst_k = 0;
};

// Iterative numerical procedure failed to converge.
class numerical_error : public error {
 public:
  explicit numerical_error(const std::string& w, unsigned long long payload_hash = 0)
      : error(w, "numerical"), hash(payload_hash) {}
  unsigned long long hash = 0;
};

// A stated data invariant failed to hold.
class invariant_error : public error {
 public:
  explicit invariant_error(const std::string& w) : error(w, "invariant") {}
};

}  // namespace eginoe
