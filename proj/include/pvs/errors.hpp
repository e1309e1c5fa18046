#pragma once
// Exception hierarchy shared by every module. Each error carries a kind so
// the CLI can map failures onto its exit codes without string matching.

#include <stdexcept>
#include <string>

namespace pvs {

enum class ErrorKind {
  invalid_modulus,
  non_invariant_support,
  bad_prime,
  not_in_dual_lattice,
  resource_limit,
  invalid_group_element,
  classifier_incomplete,
  invalid_label,
  domain,
  quadrature,
  parse,
  config,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_modulus: return "invalid-modulus";
    case ErrorKind::non_invariant_support: return "non-invariant-support";
    case ErrorKind::bad_prime: return "bad-prime";
    case ErrorKind::not_in_dual_lattice: return "not-in-dual-lattice";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::invalid_group_element: return "invalid-group-element";
    case ErrorKind::classifier_incomplete: return "classifier-incomplete";
    case ErrorKind::invalid_label: return "invalid-label";
    case ErrorKind::domain: return "domain-error";
    case ErrorKind::quadrature: return "quadrature-failure";
    case ErrorKind::parse: return "parse-error";
    case ErrorKind::config: return "config-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace pvs
