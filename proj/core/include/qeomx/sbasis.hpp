#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qeomx/integrals.hpp"
#include "qeomx/matrix.hpp"
#include "qeomx/point_group.hpp"

namespace qeomx {

struct GaussianPrimitive {
  double exponent;     // 1/bohr^2
  double coefficient;  // w.r.t. the normalized primitive
};

/// Atom-centered contracted s-type Gaussian basis. Coordinates in bohr.
struct SOrbitalBasis {
  struct Atom {
    double charge = 1.0;
    std::array<double, 3> position{0.0, 0.0, 0.0};
    std::vector<std::vector<GaussianPrimitive>> contractions;
  };
  std::vector<Atom> atoms;

  std::size_t n_functions() const;
  int n_electrons() const;  // neutral molecule
};

/// The 3-primitive hydrogen s contraction used by the builtin model systems.
std::vector<GaussianPrimitive> default_hydrogen_contraction();

/// Two hydrogens on the z axis separated by r bohr.
SOrbitalBasis h2_molecule(double r_bohr);

/// Loads a layout file: lines `Z x y z [dx dy dz]`, `#` comments. The atom
/// position is (x,y,z) + b*(dx,dy,dz). Every atom gets `contraction`.
SOrbitalBasis load_layout_file(const std::string& path, double b,
                               const std::vector<GaussianPrimitive>& contraction);
SOrbitalBasis parse_layout(const std::string& text, double b,
                           const std::vector<GaussianPrimitive>& contraction);

double nuclear_repulsion(const SOrbitalBasis& basis);

/// Raw AO-basis matrices (overlap, core Hamiltonian, ERI chemists' order).
struct AoIntegrals {
  std::size_t n = 0;
  RealMatrix overlap;
  RealMatrix hcore;
  std::vector<double> eri;  // n^4
  double e_nuclear = 0.0;
};
AoIntegrals compute_ao_integrals(const SOrbitalBasis& basis);

/// IntegralSet in an orthonormal one-particle basis: the symmetrically
/// orthogonalized AOs by default, or the supplied rotation (AO x MO columns,
/// must satisfy C^T S C = 1). Irrep labels are not assigned here (group c1);
/// use scf_system() for a symmetry-labeled molecular-orbital set.
IntegralSet build_s_integrals(const SOrbitalBasis& basis,
                              std::optional<RealMatrix> rotation = std::nullopt);

struct ScfOptions {
  int max_iterations = 200;
  double density_tol = 1e-8;
  std::size_t diis_depth = 8;
};

struct ScfResult {
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;        // total RHF energy incl. nuclear repulsion
  RealMatrix mo_coeff;        // AO x MO
  std::vector<double> mo_energy;
};

ScfResult run_rhf(const SOrbitalBasis& basis, const ScfOptions& opt = {});

/// Assigns point-group irrep labels to molecular orbitals by projecting the
/// group operations (atom permutations) onto each orbital. Degenerate
/// orbitals are rotated within their energy cluster until every column is a
/// character eigenvector; `mo_coeff` and `mo_energy` are updated in place.
std::vector<Irrep> detect_orbital_irreps(const SOrbitalBasis& basis, const PointGroup& group,
                                         const RealMatrix& overlap, RealMatrix& mo_coeff,
                                         const std::vector<double>& mo_energy);

/// Full internal pipeline: RHF, symmetry labeling, MO-basis integrals.
struct ScfSystem {
  IntegralSet ints;       // MO basis, irrep-labeled
  double e_scf = 0.0;
  bool scf_converged = false;
  std::vector<double> mo_energy;
};
ScfSystem scf_system(const SOrbitalBasis& basis, const PointGroup& group,
                     const ScfOptions& opt = {});

}  // namespace qeomx
