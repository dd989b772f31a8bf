#pragma once

#include <stdexcept>
#include <string>

namespace qeomx {

/// Raised when a numerical contract is violated (non-Hermitian input where
/// Hermitian is required, stale ansatz energy, imaginary residue, ...).
/// The CLI maps this to exit code 3; plain std::invalid_argument maps to 2.
class ContractViolation : public std::runtime_error {
 public:
  explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qeomx
