#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qeomx/hamiltonian.hpp"
#include "qeomx/statevector.hpp"

namespace qeomx {

struct PoolOperator {
  std::string label;
  FermionSum excitation;  // T
  FermionSum generator;   // T - T†
  Irrep irrep = kTotallySymmetric;
};

enum class PoolKind { SpinAdapted, SpinOrbitalSD };

std::vector<PoolOperator> make_pool(PoolKind kind, const MolecularHamiltonian& mh);

/// Retains the elements whose excitation irrep is totally symmetric, so the
/// ansatz preserves the reference irrep.
std::vector<PoolOperator> filter_pool_by_symmetry(const std::vector<PoolOperator>& pool,
                                                  Irrep hf_irrep,
                                                  std::span<const Irrep> so_irrep);

/// <psi|[H, tau]|psi>, the energy derivative along tau at theta = 0.
double pool_gradient(const Statevector& psi, const PauliSum& H, const PauliSum& tau);

struct AdaptOptions {
  double gradient_eps = 1e-3;   // pool-gradient-norm stopping threshold
  int max_iterations = 200;
  double optimizer_tol = 1e-3;  // BFGS gradient-norm convergence
  int optimizer_max_iter = 500;
};

struct AdaptAnsatz {
  std::vector<PoolOperator> operators;  // selection order; operator 0 acts first
  std::vector<double> theta;
  DeterminantRef reference;
  int n_qubits = 0;
  double energy = 0.0;
};

struct AdaptIterationRecord {
  int pool_index = -1;
  std::string op_label;
  double selected_gradient = 0.0;
  double pool_gradient_norm = 0.0;
  double energy = 0.0;
};

struct AdaptReport {
  std::vector<AdaptIterationRecord> iterations;
  double final_pool_gradient_norm = 0.0;
  std::size_t pool_size_before_filter = 0;
  std::size_t pool_size_after_filter = 0;
  bool converged = false;
  std::string to_json() const;
};

/// Grows the ansatz one largest-gradient pool operator at a time (ties break
/// to the lowest pool index), re-optimizing every parameter from the warm
/// start after each addition, until the pool gradient norm drops below
/// gradient_eps or max_iterations is hit (flagged in the report).
std::pair<AdaptAnsatz, AdaptReport> run_adapt(const MolecularHamiltonian& mh,
                                              const std::vector<PoolOperator>& pool,
                                              const AdaptOptions& opt = {});

/// Applies the ansatz product to its reference (or to an arbitrary state).
class AnsatzApplier {
 public:
  explicit AnsatzApplier(const AdaptAnsatz& ansatz);
  void apply(Statevector& psi) const;
  void apply_adjoint(Statevector& psi) const;
  Statevector ground_state() const;

 private:
  const AdaptAnsatz* ansatz_;
  std::vector<CompiledFermionOp> taus_;
};

/// Rayleigh quotient of the ansatz at its stored parameters.
double vqe_energy(const AdaptAnsatz& ansatz, const MolecularHamiltonian& mh);
double vqe_energy(const AdaptAnsatz& ansatz, const PauliSum& h_pauli);

}  // namespace qeomx
