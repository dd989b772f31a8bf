#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qeomx/fermion.hpp"
#include "qeomx/pauli.hpp"

namespace qeomx {

/// Dense complex amplitudes over 2^n_qubits basis states, little-endian:
/// bit q of the basis index is qubit q (= spin orbital q under the global
/// interleaved convention). Hard qubit ceiling of 26.
class Statevector {
 public:
  Statevector() = default;
  explicit Statevector(int n_qubits);
  static Statevector basis_state(int n_qubits, std::uint64_t mask);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amp_.size(); }

  std::complex<double>& operator[](std::size_t i) { return amp_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return amp_[i]; }
  std::span<std::complex<double>> amplitudes() { return amp_; }
  std::span<const std::complex<double>> amplitudes() const { return amp_; }

  double norm() const;
  void scale(std::complex<double> s);
  void set_zero();

  static std::complex<double> inner(const Statevector& bra, const Statevector& ket);

  /// Raw little-endian float64 (re,im) pair dump for debugging.
  std::vector<unsigned char> to_bytes() const;

 private:
  int n_qubits_ = 0;
  std::vector<std::complex<double>> amp_;
};

struct DeterminantRef {
  std::vector<int> occupied;
  std::uint64_t mask() const;
};

Statevector prepare_determinant(const DeterminantRef& det, int n_qubits);

/// Exact linear action; output is not normalized.
Statevector apply_pauli_sum(const PauliSum& op, const Statevector& psi);

/// psi -> exp(theta * tau) psi by a Taylor series iterated until the
/// appended term's norm drops below `term_cutoff`. tau must be
/// anti-Hermitian (checked to 1e-10).
Statevector apply_exp_generator(const PauliSum& tau, double theta, const Statevector& psi,
                                double term_cutoff = 1e-13);

/// Re <psi|op|psi> / <psi|psi>; op must be Hermitian and the imaginary
/// residue below 1e-10, else ContractViolation.
double expectation(const PauliSum& op, const Statevector& psi);

std::complex<double> transition_element(const Statevector& bra, const PauliSum& op,
                                        const Statevector& ket);

/// Jordan-Wigner action of a FermionSum compiled to occupation masks and
/// parity masks; exactly equal to applying jordan_wigner(op) as a PauliSum.
class CompiledFermionOp {
 public:
  CompiledFermionOp() = default;
  CompiledFermionOp(const FermionSum& op, int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t term_count() const { return terms_.size(); }

  /// out += op * in (sizes must match; out must be distinct from in).
  void accumulate(const Statevector& in, Statevector& out) const;
  Statevector apply(const Statevector& in) const;

 private:
  struct Term {
    std::uint64_t need = 0;   // bits that must be occupied
    std::uint64_t avoid = 0;  // bits that must be empty
    std::uint64_t flip = 0;   // output index = input ^ flip
    std::uint64_t pmask = 0;  // sign = base * (-1)^popcount(index & pmask)
    std::complex<double> coeff;
  };
  int n_qubits_ = 0;
  std::vector<Term> terms_;
};

Statevector apply_fermion_sum(const FermionSum& op, const Statevector& psi);

/// In-place exp(theta * tau) with tau given in compiled form; same series
/// contract as apply_exp_generator. Anti-Hermiticity is the caller's
/// responsibility here (generators are built as T - T†).
void apply_exp_inplace(const CompiledFermionOp& tau, double theta, Statevector& psi,
                       double term_cutoff = 1e-13);

double expectation(const CompiledFermionOp& op, const Statevector& psi);
std::complex<double> transition_element(const Statevector& bra, const CompiledFermionOp& op,
                                        const Statevector& ket);

/// Squared norm of the component of psi inside the irrep sector `label`
/// (determinant irrep = XOR of occupied so labels).
double irrep_sector_weight(const Statevector& psi, std::span<const Irrep> so_irrep, Irrep label);

}  // namespace qeomx
