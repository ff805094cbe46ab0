#pragma once

#include <stdexcept>
#include <string>

namespace partlat {

enum class ErrorKind {
  invalid_ground_set,
  ground_set_mismatch,
  invalid_atom,
  invalid_argument,
  invalid_bridge,
  invalid_permutation,
  invalid_pivot,
  parse,
  resource_limit,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_ground_set: return "invalid-ground-set";
    case ErrorKind::ground_set_mismatch: return "ground-set-mismatch";
    case ErrorKind::invalid_atom: return "invalid-atom";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_bridge: return "invalid-bridge";
    case ErrorKind::invalid_permutation: return "invalid-permutation";
    case ErrorKind::invalid_pivot: return "invalid-pivot";
    case ErrorKind::parse: return "parse";
    case ErrorKind::resource_limit: return "resource-limit";
  }
  return "unknown";
}

/// All library failures are reported through this type; `kind()` lets callers
/// (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace partlat
