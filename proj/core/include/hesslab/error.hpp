#pragma once

#include <stdexcept>
#include <string>

namespace hesslab {

/// Raised when an argument lies outside the domain of an operation
/// (index out of range, vector outside a cone, non-Hermitian input, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when an iterative method cannot make progress, e.g. when
/// backtracking cannot restore admissibility of a Newton iterate.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hesslab
