#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qeomx/fermion.hpp"

namespace qeomx {

/// Weighted sum of Pauli strings on n qubits. Terms are stored in the
/// symplectic form coeff * X^x * Z^z (X factors left of Z factors per
/// qubit); a qubit with both bits set is an XZ product, i.e. -iY. The named
/// per-qubit I/X/Y/Z view is available through named_terms().
class PauliSum {
 public:
  struct Term {
    std::complex<double> coeff;
    std::uint64_t x = 0;
    std::uint64_t z = 0;
  };

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
  static PauliSum identity(int n_qubits, std::complex<double> coeff = 1.0);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add_xz_term(std::complex<double> coeff, std::uint64_t x, std::uint64_t z);
  /// `paulis` has one of IXYZ per qubit, qubit 0 first.
  void add_named_term(std::complex<double> coeff, const std::string& paulis);
  /// Terms in the named convention: (coefficient, per-qubit letters).
  std::vector<std::pair<std::complex<double>, std::string>> named_terms() const;

  PauliSum operator*(const PauliSum& rhs) const;
  PauliSum operator+(const PauliSum& rhs) const;
  PauliSum operator-(const PauliSum& rhs) const;
  PauliSum& operator*=(std::complex<double> scalar);
  PauliSum adjoint() const;

  /// Merges equal strings and prunes |coeff| <= tol.
  void simplify(double tol = 1e-14);

  bool is_hermitian(double tol = 1e-10) const;
  bool is_anti_hermitian(double tol = 1e-10) const;
  /// Max |coeff| deviation from the identity (for operator-identity checks).
  double distance_to_identity(std::complex<double> scale) const;

 private:
  int n_qubits_ = 0;
  std::vector<Term> terms_;
};

/// Jordan-Wigner transform: a†_p -> 1/2 (X_p - iY_p) ⊗ Z_{p-1}...Z_0.
PauliSum jordan_wigner(const FermionSum& op, int n_qubits);

}  // namespace qeomx
