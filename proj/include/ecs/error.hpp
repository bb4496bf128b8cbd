// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_ERROR_HPP
#define ECS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ecs {

enum class ErrorKind {
  invalid_argument,
  admissibility,
  resonance,
  convergence,
  singularity,
  domain,
  branch,
  mixed_order,
  size_overflow,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind; the
/// CLI turns the kind into an exit status and an `error.kind` JSON field.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::resonance: return "resonance";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::domain: return "domain";
    case ErrorKind::branch: return "branch";
    case ErrorKind::mixed_order: return "mixed_order";
    case ErrorKind::size_overflow: return "size_overflow";
  }
  return "unknown";
}

}  // namespace ecs

#endif  // ECS_ERROR_HPP
