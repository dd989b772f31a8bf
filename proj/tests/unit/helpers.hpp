#pragma once

#include <random>
#include <vector>

#include "qeomx/fci.hpp"
#include "qeomx/hamiltonian.hpp"
#include "qeomx/sbasis.hpp"

namespace qeomx::testing {

/// Random Hermitian spin-orbital Hamiltonian over n_sp spatial orbitals,
/// diagonally dominant enough that the aufbau determinant is a sensible
/// reference.
inline MolecularHamiltonian random_system(int n_sp, int n_elec, unsigned seed,
                                          std::vector<Irrep> orb_labels = {}) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto group = PointGroup::from_name("d2h");
  IntegralSet ints(static_cast<std::size_t>(n_sp), group);
  ints.n_electrons = n_elec;
  if (!orb_labels.empty()) ints.orb_irrep = std::move(orb_labels);
  ints.e_nuclear = 0.5 * dist(rng);
  for (int p = 0; p < n_sp; ++p) {
    ints.set_h(static_cast<std::size_t>(p), static_cast<std::size_t>(p), -2.0 + 0.8 * p + 0.1 * dist(rng));
    for (int q = 0; q < p; ++q) {
      ints.set_h(static_cast<std::size_t>(p), static_cast<std::size_t>(q), 0.2 * dist(rng));
    }
  }
  const std::size_t n = static_cast<std::size_t>(n_sp);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          ints.set_g2(p, q, r, s, 0.25 * dist(rng));
        }
  return assemble_hamiltonian(ints);
}

/// D2h rectangle of hydrogens in the xy plane (a along x, b along y).
inline SOrbitalBasis h4_rectangle(double a, double b) {
  SOrbitalBasis basis;
  auto con = default_hydrogen_contraction();
  for (double sx : {+1.0, -1.0})
    for (double sy : {+1.0, -1.0})
      basis.atoms.push_back({1.0, {sx * a / 2, sy * b / 2, 0.0}, {con}});
  return basis;
}

/// Symmetry-labeled molecular Hamiltonian for the H4 rectangle.
inline MolecularHamiltonian h4_system(double a = 2.0, double b = 3.0) {
  ScfSystem sys = scf_system(h4_rectangle(a, b), PointGroup::from_name("d2h"));
  return assemble_hamiltonian(sys.ints);
}

}  // namespace qeomx::testing
