#include "qeomx/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qeomx/errors.hpp"
#include "qeomx/minimize.hpp"

namespace qeomx {

namespace {

std::string pool_label(const FermionSum& op) {
  // First canonical string: creations then annihilations.
  const auto& t = op.terms().front();
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (const auto& l : t.ops) {
    if (l.create) {
      os << (first ? "" : ",") << l.index;
      first = false;
    }
  }
  os << ")<-(";
  first = true;
  for (const auto& l : t.ops) {
    if (!l.create) {
      os << (first ? "" : ",") << l.index;
      first = false;
    }
  }
  os << ")";
  return os.str();
}

}  // namespace

std::vector<PoolOperator> make_pool(PoolKind kind, const MolecularHamiltonian& mh) {
  const int n_occ_so = mh.n_electrons;
  const int n_virt_so = mh.n_so - mh.n_electrons;
  std::vector<FermionSum> raw;
  if (kind == PoolKind::SpinAdapted) {
    raw = spin_adapted_pool(n_occ_so / 2, n_virt_so / 2);
  } else {
    raw = spin_orbital_sd_pool(n_occ_so, n_virt_so);
  }
  std::vector<PoolOperator> pool;
  pool.reserve(raw.size());
  for (auto& t : raw) {
    PoolOperator op;
    op.irrep = fermion_sum_irrep(t, mh.so_irrep);
    op.label = pool_label(t);
    FermionSum gen = t;
    gen -= t.adjoint();
    gen.simplify();
    op.excitation = std::move(t);
    op.generator = std::move(gen);
    pool.push_back(std::move(op));
  }
  return pool;
}

std::vector<PoolOperator> filter_pool_by_symmetry(const std::vector<PoolOperator>& pool,
                                                  Irrep hf_irrep,
                                                  std::span<const Irrep> so_irrep) {
  (void)so_irrep;  // labels are precomputed on the pool
  std::vector<PoolOperator> out;
  for (const auto& op : pool) {
    // Irrep(T|ref>) = irrep(T) x irrep(ref); equality with irrep(ref) means
    // the operator itself must be totally symmetric.
    if (irrep_product(op.irrep, hf_irrep) == hf_irrep) out.push_back(op);
  }
  return out;
}

double pool_gradient(const Statevector& psi, const PauliSum& H, const PauliSum& tau) {
  if (!tau.is_anti_hermitian(1e-10)) throw ContractViolation("pool generator must be anti-Hermitian");
  Statevector hpsi = apply_pauli_sum(H, psi);
  Statevector tpsi = apply_pauli_sum(tau, psi);
  return 2.0 * Statevector::inner(hpsi, tpsi).real();
}

namespace {

struct VqeProblem {
  const CompiledFermionOp* ham;
  std::vector<const CompiledFermionOp*> taus;  // selection order
  Statevector reference;

  Statevector build_state(std::span<const double> theta) const {
    Statevector psi = reference;
    for (std::size_t k = 0; k < taus.size(); ++k) {
      apply_exp_inplace(*taus[k], theta[k], psi);
    }
    return psi;
  }

  double energy(std::span<const double> theta) const {
    Statevector psi = build_state(theta);
    Statevector hpsi = ham->apply(psi);
    return Statevector::inner(psi, hpsi).real();
  }

  // Energy and analytic gradient via one backward sweep.
  double energy_gradient(std::span<const double> theta, std::span<double> grad) const {
    Statevector ket = build_state(theta);
    Statevector bra = ham->apply(ket);
    const double e = Statevector::inner(ket, bra).real();
    Statevector tk(ket.n_qubits());
    for (std::size_t k = taus.size(); k-- > 0;) {
      tk.set_zero();
      taus[k]->accumulate(ket, tk);
      grad[k] = 2.0 * Statevector::inner(bra, tk).real();
      if (k > 0) {
        apply_exp_inplace(*taus[k], -theta[k], ket);
        apply_exp_inplace(*taus[k], -theta[k], bra);
      }
    }
    return e;
  }
};

}  // namespace

std::pair<AdaptAnsatz, AdaptReport> run_adapt(const MolecularHamiltonian& mh,
                                              const std::vector<PoolOperator>& pool,
                                              const AdaptOptions& opt) {
  if (pool.empty()) throw std::invalid_argument("empty operator pool");
  if (opt.gradient_eps <= 0.0) throw std::invalid_argument("gradient_eps must be positive");

  const int n_qubits = mh.n_so;
  CompiledFermionOp ham(to_fermion_sum(mh), n_qubits);
  std::vector<CompiledFermionOp> pool_taus;
  pool_taus.reserve(pool.size());
  for (const auto& op : pool) pool_taus.emplace_back(op.generator, n_qubits);

  AdaptAnsatz ansatz;
  ansatz.n_qubits = n_qubits;
  for (int p = 0; p < mh.n_electrons; ++p) ansatz.reference.occupied.push_back(p);

  VqeProblem problem;
  problem.ham = &ham;
  problem.reference = prepare_determinant(ansatz.reference, n_qubits);

  AdaptReport report;
  report.pool_size_before_filter = pool.size();
  report.pool_size_after_filter = pool.size();

  std::vector<int> selected;  // pool indices, selection order
  std::vector<double> theta;
  double energy = problem.energy(theta);

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    Statevector psi = problem.build_state(theta);
    Statevector hpsi = ham.apply(psi);

    double norm2 = 0.0;
    double best = 0.0;
    int best_idx = -1;
    Statevector tpsi(n_qubits);
    for (std::size_t mu = 0; mu < pool.size(); ++mu) {
      tpsi.set_zero();
      pool_taus[mu].accumulate(psi, tpsi);
      double g = 2.0 * Statevector::inner(hpsi, tpsi).real();
      norm2 += g * g;
      if (std::abs(g) > best) {  // strict: ties keep the lowest index
        best = std::abs(g);
        best_idx = static_cast<int>(mu);
      }
    }
    double pool_norm = std::sqrt(norm2);
    report.final_pool_gradient_norm = pool_norm;
    if (pool_norm < opt.gradient_eps || best_idx < 0) {
      report.converged = true;
      break;
    }

    selected.push_back(best_idx);
    problem.taus.push_back(&pool_taus[static_cast<std::size_t>(best_idx)]);
    theta.push_back(0.0);

    BfgsOptions bopt;
    bopt.gradient_tol = opt.optimizer_tol;
    bopt.max_iterations = opt.optimizer_max_iter;
    auto res = minimize_bfgs(
        [&problem](std::span<const double> x, std::span<double> g) {
          return g.empty() ? problem.energy(x) : problem.energy_gradient(x, g);
        },
        theta, bopt);
    theta = res.x;
    energy = res.f;

    report.iterations.push_back({best_idx, pool[static_cast<std::size_t>(best_idx)].label, best,
                                 pool_norm, energy});
  }

  for (int idx : selected) ansatz.operators.push_back(pool[static_cast<std::size_t>(idx)]);
  ansatz.theta = theta;
  ansatz.energy = energy;
  return {std::move(ansatz), std::move(report)};
}

std::string AdaptReport::to_json() const {
  nlohmann::json j;
  j["converged"] = converged;
  j["final_pool_gradient_norm"] = final_pool_gradient_norm;
  j["pool_size_before_filter"] = pool_size_before_filter;
  j["pool_size_after_filter"] = pool_size_after_filter;
  j["iterations"] = nlohmann::json::array();
  for (const auto& it : iterations) {
    j["iterations"].push_back({{"pool_index", it.pool_index},
                               {"operator", it.op_label},
                               {"selected_gradient", it.selected_gradient},
                               {"pool_gradient_norm", it.pool_gradient_norm},
                               {"energy", it.energy}});
  }
  return j.dump(2);
}

AnsatzApplier::AnsatzApplier(const AdaptAnsatz& ansatz) : ansatz_(&ansatz) {
  taus_.reserve(ansatz.operators.size());
  for (const auto& op : ansatz.operators) taus_.emplace_back(op.generator, ansatz.n_qubits);
}

void AnsatzApplier::apply(Statevector& psi) const {
  for (std::size_t k = 0; k < taus_.size(); ++k) {
    apply_exp_inplace(taus_[k], ansatz_->theta[k], psi);
  }
}

void AnsatzApplier::apply_adjoint(Statevector& psi) const {
  for (std::size_t k = taus_.size(); k-- > 0;) {
    apply_exp_inplace(taus_[k], -ansatz_->theta[k], psi);
  }
}

Statevector AnsatzApplier::ground_state() const {
  Statevector psi = prepare_determinant(ansatz_->reference, ansatz_->n_qubits);
  apply(psi);
  return psi;
}

double vqe_energy(const AdaptAnsatz& ansatz, const MolecularHamiltonian& mh) {
  CompiledFermionOp ham(to_fermion_sum(mh), ansatz.n_qubits);
  Statevector psi = AnsatzApplier(ansatz).ground_state();
  return expectation(ham, psi);
}

double vqe_energy(const AdaptAnsatz& ansatz, const PauliSum& h_pauli) {
  Statevector psi = AnsatzApplier(ansatz).ground_state();
  return expectation(h_pauli, psi);
}

}  // namespace qeomx
