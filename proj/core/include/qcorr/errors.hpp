#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

// A value failed one of its type invariants (non-Hermitian density matrix,
// non-unit Bloch vector, unnormalized weights, ...).
class InvariantError : public std::domain_error {
 public:
  explicit InvariantError(const std::string& what) : std::domain_error(what) {}
};

// Operands have incompatible dimensions or setting counts.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace qcorr
