#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qeomx/hamiltonian.hpp"
#include "qeomx/matrix.hpp"
#include "qeomx/statevector.hpp"

namespace qeomx {

struct SectorBasis {
  int n_so = 0;
  int n_electrons = 0;
  int sz2 = 0;
  std::optional<Irrep> irrep;
  std::vector<std::uint64_t> dets;  // ascending bitmasks

  std::size_t dim() const { return dets.size(); }
};

/// All determinants with the given electron count and 2*Sz, optionally
/// filtered to one irrep (XOR over occupied labels). Infeasible sectors
/// yield an empty basis.
SectorBasis sector_basis(int n_so, int n_electrons, int sz2, std::optional<Irrep> irrep,
                         std::span<const Irrep> so_irrep);

/// <bra|H|ket> by the Slater-Condon rules, evaluated directly from the
/// integral tensors. Deliberately independent of the Jordan-Wigner /
/// statevector path so the two can cross-validate each other.
double slater_condon(const MolecularHamiltonian& mh, std::uint64_t bra, std::uint64_t ket);

struct FciResult {
  std::vector<double> energies;  // ascending, includes mh.constant
  RealMatrix vectors;            // dim x n_roots, columns are eigenvectors
};

enum class FciMethod { Auto, Dense, Lanczos };

/// Lowest n_roots eigenpairs of H in the sector. Auto: dense up to dim 5000,
/// Lanczos with full reorthogonalization above; hard guard at dim 2e5.
FciResult fci_solve(const MolecularHamiltonian& mh, const SectorBasis& basis, int n_roots,
                    FciMethod method = FciMethod::Auto);
std::vector<double> fci_spectrum(const MolecularHamiltonian& mh, const SectorBasis& basis,
                                 int n_roots);

/// Lifts an eigenvector column into the 2^n_qubits statevector (determinant
/// masks are basis indices under the little-endian convention).
Statevector embed_fci_vector(const SectorBasis& basis, std::span<const double> column,
                             int n_qubits);

}  // namespace qeomx
