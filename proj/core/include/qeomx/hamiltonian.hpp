#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qeomx/fermion.hpp"
#include "qeomx/integrals.hpp"

namespace qeomx {

/// Second-quantized Hamiltonian over interleaved spin orbitals (2p = alpha
/// of spatial p, 2p+1 = beta). `constant` carries nuclear repulsion plus any
/// frozen-core energy. two_body is chemists' (PQ|RS) over spin orbitals.
struct MolecularHamiltonian {
  int n_so = 0;
  int n_electrons = 0;
  double constant = 0.0;
  std::vector<double> one_body;  // n_so^2
  std::vector<double> two_body;  // n_so^4
  PointGroup group;
  std::vector<Irrep> so_irrep;

  double h1(int p, int q) const {
    return one_body[static_cast<std::size_t>(p) * static_cast<std::size_t>(n_so) +
                    static_cast<std::size_t>(q)];
  }
  double g2(int p, int q, int r, int s) const {
    const std::size_t n = static_cast<std::size_t>(n_so);
    return two_body[((static_cast<std::size_t>(p) * n + static_cast<std::size_t>(q)) * n +
                     static_cast<std::size_t>(r)) * n + static_cast<std::size_t>(s)];
  }

  /// Aufbau reference determinant: lowest n_electrons spin orbitals.
  std::uint64_t hf_mask() const;
  Irrep hf_irrep() const;
};

/// Folds frozen doubly-occupied orbitals into the constant and the one-body
/// part, keeps `active` spatial orbitals (default: everything not frozen),
/// and expands to spin orbitals. Values below 1e-12 are dropped.
MolecularHamiltonian assemble_hamiltonian(const IntegralSet& ints,
                                          const std::vector<int>& frozen = {},
                                          std::optional<std::vector<int>> active = std::nullopt);

/// H = constant + sum h1[PQ] a†_P a_Q + 1/2 sum (PQ|RS) a†_P a†_R a_S a_Q.
FermionSum to_fermion_sum(const MolecularHamiltonian& mh, double threshold = 1e-12);

/// <HF|H|HF> evaluated directly from the integrals.
double hf_energy(const MolecularHamiltonian& mh);

}  // namespace qeomx
