#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qeomx/adapt.hpp"
#include "qeomx/matrix.hpp"
#include "qeomx/qeom.hpp"

namespace qeomx {

/// S_IJ = <psi0|r_I† r_J|psi0>, H_IJ = <psi0|r_I† H r_J|psi0> with
/// psi0 = U|HF> and r_0 = identity (the ground state is basis row 0; the
/// excitation list starts at row 1).
struct QseMatrices {
  RealMatrix S;
  RealMatrix H;
  std::size_t measured_elements = 0;
};
QseMatrices build_S_H(const std::vector<Excitation>& basis, const PauliSum& H,
                      const AdaptAnsatz& ansatz, ElementSet element_set = ElementSet::All);
QseMatrices build_S_H(const std::vector<Excitation>& basis, const CompiledFermionOp& H,
                      const AdaptAnsatz& ansatz, ElementSet element_set = ElementSet::All);

struct GeneralizedSolve {
  std::vector<double> eigenvalues;  // ascending, absolute energies
  RealMatrix eigenvectors;          // columns, in the original basis
  std::size_t discarded = 0;        // overlap directions below the threshold
  std::vector<double> overlap_spectrum;
};

/// Canonical orthogonalization: diagonalize S, drop directions with
/// eigenvalue < lindep_threshold, solve the ordinary problem in the
/// surviving subspace and back-transform.
GeneralizedSolve solve_generalized(const RealMatrix& H, const RealMatrix& S,
                                   double lindep_threshold = 1e-8);

struct QseScreeningReport {
  int target_root = 0;
  double e0_target = 0.0;
  double e1_target = 0.0;  // expected 0
  bool e1_violation = false;
  double e2_target = 0.0;
  double c_mm = 0.0;
  std::vector<WEntry> entries;  // F in w_abs, signed second-order term in w_signed
  std::vector<double> a_mi, b_mi;  // audit intermediates, aligned with entries
  std::vector<std::pair<std::size_t, double>> coverage_curve;
  std::string mode;
  double threshold = 0.0;
  double coverage_fraction = 0.0;
  std::size_t top_k = 0;
  std::size_t n_raw = 0, n_sz = 0, n_symmetry = 0, n_selected = 0;
  std::string to_json() const;
};

/// Second-order importance of each triple for the generalized problem:
/// F_i = |(2 E_m A_mi B_mi - |A_mi|^2 - E_m^2 |B_mi|^2) / (E_i - E_m)| with
/// A/B the H'/S' couplings between the SD-level root m and the triple's
/// unit direction. Rows of H/S follow build_S_H (ground state at 0).
QseScreeningReport qse_importance(const RealMatrix& H, const RealMatrix& S,
                                  const std::vector<Excitation>& basis, int target_root,
                                  double lindep_threshold = 1e-8);

std::vector<std::size_t> screen_qse_triples(QseScreeningReport& report, const ScreenMode& mode);

/// E = E' + sum of the signed discarded second-order terms.
double qse_correction(double e_prime, std::span<const double> discarded_signed);

/// Physical state (d_0 + sum_I d_I r_I) U|HF> for an eigenvector column
/// (row 0 = ground coefficient).
Statevector qse_root_state(const AdaptAnsatz& ansatz, const std::vector<Excitation>& basis,
                           std::span<const double> d);

struct QseBlock {
  Irrep irrep = kTotallySymmetric;
  std::vector<Excitation> basis;  // excitations only; ground state is row 0
  RealMatrix Hmat, Smat;
  double lindep_threshold = 1e-8;
  std::vector<double> eigenvalues;
  RealMatrix eigenvectors;
  std::size_t discarded_directions = 0;
  std::vector<double> overlap_spectrum;
  std::size_t measured_elements = 0;
  std::string to_json() const;
};

}  // namespace qeomx
