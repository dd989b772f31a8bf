#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "qeomx/adapt.hpp"
#include "qeomx/matrix.hpp"

namespace qeomx {

enum class ElementSet { All, ScreeningSubset };

/// Ordered excitation basis for one irrep block: singles, then doubles,
/// then triples, lexicographic within each rank. `target_irrep` is the
/// irrep of the operators r_I themselves.
std::vector<Excitation> build_basis(const MolecularHamiltonian& mh, Irrep target_irrep,
                                    const std::vector<int>& ranks);

/// M[I][J] = <HF| r_I† U† H U r_J |HF> - e0 δ_IJ, evaluated as transition
/// elements between the states U r_J|HF>. With ScreeningSubset only the
/// SD x SD block, the full diagonal and the triple x SD couplings are
/// evaluated (the triple-triple off-diagonal stays a structural zero);
/// `measured` receives the count of independent evaluated elements.
/// Throws ContractViolation when e0 is stale w.r.t. the ansatz (1e-8).
RealMatrix build_M(const std::vector<Excitation>& basis, const PauliSum& H,
                   const AdaptAnsatz& ansatz, double e0,
                   ElementSet element_set = ElementSet::All, std::size_t* measured = nullptr);
RealMatrix build_M(const std::vector<Excitation>& basis, const CompiledFermionOp& H,
                   const AdaptAnsatz& ansatz, double e0,
                   ElementSet element_set = ElementSet::All, std::size_t* measured = nullptr);

/// Splits M into M0 (SD block + every diagonal) and M' (all couplings that
/// involve a triple, off-diagonal only). M0 + M' == M exactly.
std::pair<RealMatrix, RealMatrix> partition_M(const RealMatrix& M,
                                              const std::vector<Excitation>& basis);

enum class ImportanceMethod { RayleighSchroedinger, DiagonalClosedForm };

struct WEntry {
  Excitation excitation;
  std::size_t basis_index = 0;  // position in the block basis
  double w_signed = 0.0;        // |c_I|^2 / (E_m - E_I)
  double w_abs = 0.0;           // ranking key; +inf on a degenerate denominator
  bool degenerate = false;
};

struct ScreeningReport {
  ImportanceMethod method = ImportanceMethod::DiagonalClosedForm;
  int target_root = 0;     // root of the SD sub-block
  double e0_target = 0.0;  // E_m^(0)
  double e1_target = 0.0;  // first-order shift; expected 0
  bool e1_violation = false;
  double e2_target = 0.0;  // sum of signed second-order contributions
  std::vector<WEntry> entries;  // sorted by |W| descending
  std::vector<std::pair<std::size_t, double>> coverage_curve;  // (k, cumulative |W| fraction)
  // screening metadata, filled by screen_triples / the driver
  std::string mode;
  double threshold = 0.0;
  double coverage_fraction = 0.0;
  std::size_t top_k = 0;
  std::size_t n_raw = 0;        // all index combinations of rank 3
  std::size_t n_sz = 0;         // after Sz conservation
  std::size_t n_symmetry = 0;   // after the irrep filter (= triples in block)
  std::size_t n_selected = 0;

  std::string to_json() const;
};

/// Ranks the block's triples by second-order importance for the SD-level
/// root `target_root` (0-based, ascending order of the SD sub-block).
/// Both methods use the SD eigenpair as the zeroth order; the
/// Rayleigh-Schroedinger route works through the explicit M0/M' partition,
/// the closed form contracts the triple x SD couplings directly.
ScreeningReport importance_indicators(const RealMatrix& M, const std::vector<Excitation>& basis,
                                      int target_root, ImportanceMethod method);

struct ScreenMode {
  enum Kind { Coverage, Threshold, TopK } kind = Coverage;
  double f = 0.90;
  double eps_t = 2.2e-5;
  std::size_t k = 0;
};

/// Selected triple basis indices (deterministic: report order, ties by
/// basis position). Updates the report's screening metadata.
std::vector<std::size_t> screen_triples(ScreeningReport& report, const ScreenMode& mode);

/// Dense Hermitian eigendecomposition; input checked Hermitian to 1e-10.
std::pair<std::vector<double>, RealMatrix> solve_block(const RealMatrix& M);

/// w = w' + sum of the signed indicators of the discarded triples.
double perturbative_correction(double omega_prime, std::span<const double> discarded_signed);

/// Solved block bundle.
struct EomBlock {
  Irrep irrep = kTotallySymmetric;            // irrep of the operators r_I
  std::vector<Excitation> basis;
  RealMatrix M;
  double e0 = 0.0;
  std::vector<double> eigenvalues;             // ascending; excitation energies
  RealMatrix eigenvectors;                     // columns
  std::size_t measured_elements = 0;
  std::string to_json() const;
};

struct RootSelector {
  enum Kind { Ordinal, Overlap } kind = Ordinal;
  int ordinal = 1;                    // 1-based within the block
  std::vector<double> reference;      // Γ over a prefix of the block basis
};

struct RootChoice {
  int index = -1;
  double overlap = 0.0;
  bool ambiguous = false;  // best overlap below 0.5
};

RootChoice target_root(const EomBlock& block, const RootSelector& selector);

/// || U r_I† |HF> ||; exactly zero for every proper excitation.
double killer_condition_residual(const AdaptAnsatz& ansatz, const Excitation& exc);

/// Physical state U (sum_I gamma_I r_I)|HF> for an eigenvector column.
Statevector eom_root_state(const AdaptAnsatz& ansatz, const std::vector<Excitation>& basis,
                           std::span<const double> gamma);

}  // namespace qeomx
