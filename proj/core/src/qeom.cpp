#include "qeomx/qeom.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "qeomx/errors.hpp"

namespace qeomx {

namespace {

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(static_cast<long>(i), static_cast<long>(j)) = m(i, j);
  return out;
}

RealMatrix from_eigen(const Eigen::MatrixXd& m) {
  RealMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

void check_hermitian(const RealMatrix& m, double tol, const char* what) {
  if (m.rows != m.cols) throw ContractViolation(std::string(what) + ": not square");
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) {
        throw ContractViolation(std::string(what) + ": not Hermitian within tolerance");
      }
}

double real_checked(std::complex<double> v, const char* what) {
  if (std::abs(v.imag()) > 1e-10) {
    throw ContractViolation(std::string(what) + ": imaginary residue " + std::to_string(v.imag()));
  }
  return v.real();
}

}  // namespace

std::vector<Excitation> build_basis(const MolecularHamiltonian& mh, Irrep target_irrep,
                                    const std::vector<int>& ranks) {
  if (!mh.group.valid_label(target_irrep)) throw std::invalid_argument("irrep label not in group");
  std::vector<int> sorted_ranks = ranks;
  std::sort(sorted_ranks.begin(), sorted_ranks.end());
  const int n_occ_so = mh.n_electrons;
  const int n_virt_so = mh.n_so - mh.n_electrons;
  std::vector<Excitation> basis;
  ExcitationConstraints c;
  c.irrep = target_irrep;
  for (int rank : sorted_ranks) {
    auto excs = enumerate_excitations(rank, n_occ_so, n_virt_so, c, mh.so_irrep);
    basis.insert(basis.end(), excs.begin(), excs.end());
  }
  return basis;
}

namespace {

template <typename ApplyH>
RealMatrix build_M_impl(const std::vector<Excitation>& basis, const ApplyH& apply_h,
                        const AdaptAnsatz& ansatz, double e0, ElementSet element_set,
                        std::size_t* measured) {
  const int n_qubits = ansatz.n_qubits;
  const std::size_t n = basis.size();
  const std::uint64_t hf = ansatz.reference.mask();

  AnsatzApplier applier(ansatz);
  {
    Statevector ground = applier.ground_state();
    double e_check = real_checked(Statevector::inner(ground, apply_h(ground)), "vqe energy");
    if (std::abs(e_check - e0) > 1e-8) {
      throw ContractViolation("stale ansatz: |<HF|U†HU|HF> - e0| = " +
                              std::to_string(std::abs(e_check - e0)));
    }
  }

  std::vector<Statevector> chi(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < n; ++j) {
    auto img = determinant_image(basis[j], hf);
    if (img.sign == 0) {
      throw std::invalid_argument("excitation " + basis[j].to_string() +
                                  " does not act on the reference determinant");
    }
    Statevector psi = Statevector::basis_state(n_qubits, img.mask);
    if (img.sign < 0) psi.scale(-1.0);
    applier.apply(psi);
    chi[j] = std::move(psi);
  }

  RealMatrix M(n, n);
  std::size_t count = 0;

  std::vector<std::size_t> sd_idx, t_idx;
  for (std::size_t j = 0; j < n; ++j) (basis[j].rank() <= 2 ? sd_idx : t_idx).push_back(j);

  if (element_set == ElementSet::All) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < n; ++j) {
      Statevector hchi = apply_h(chi[j]);
      for (std::size_t i = 0; i < n; ++i) {
        M(i, j) = real_checked(Statevector::inner(chi[i], hchi), "M element");
      }
      M(j, j) -= e0;
    }
    count = n * n;
  } else {
    // SD columns give the SD block and the triple x SD rectangle; the
    // triple rows are mirrored from the measured rectangle.
#pragma omp parallel for schedule(dynamic)
    for (std::size_t jj = 0; jj < sd_idx.size(); ++jj) {
      const std::size_t j = sd_idx[jj];
      Statevector hchi = apply_h(chi[j]);
      for (std::size_t i = 0; i < n; ++i) {
        double v = real_checked(Statevector::inner(chi[i], hchi), "M element");
        M(i, j) = v;
        if (basis[i].rank() == 3) M(j, i) = v;
      }
      M(j, j) -= e0;
    }
    // Triple diagonals.
#pragma omp parallel for schedule(dynamic)
    for (std::size_t tt = 0; tt < t_idx.size(); ++tt) {
      const std::size_t i = t_idx[tt];
      Statevector hchi = apply_h(chi[i]);
      M(i, i) = real_checked(Statevector::inner(chi[i], hchi), "M element") - e0;
    }
    count = sd_idx.size() * (sd_idx.size() + 1) / 2 + t_idx.size() * sd_idx.size() + t_idx.size();
  }
  if (measured) *measured = count;
  return M;
}

}  // namespace

RealMatrix build_M(const std::vector<Excitation>& basis, const PauliSum& H,
                   const AdaptAnsatz& ansatz, double e0, ElementSet element_set,
                   std::size_t* measured) {
  return build_M_impl(
      basis, [&H](const Statevector& psi) { return apply_pauli_sum(H, psi); }, ansatz, e0,
      element_set, measured);
}

RealMatrix build_M(const std::vector<Excitation>& basis, const CompiledFermionOp& H,
                   const AdaptAnsatz& ansatz, double e0, ElementSet element_set,
                   std::size_t* measured) {
  return build_M_impl(
      basis, [&H](const Statevector& psi) { return H.apply(psi); }, ansatz, e0, element_set,
      measured);
}

std::pair<RealMatrix, RealMatrix> partition_M(const RealMatrix& M,
                                              const std::vector<Excitation>& basis) {
  const std::size_t n = basis.size();
  if (M.rows != n || M.cols != n) throw std::invalid_argument("matrix/basis size mismatch");
  RealMatrix m0(n, n), mp(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool primed = (i != j) && (basis[i].rank() == 3 || basis[j].rank() == 3);
      (primed ? mp : m0)(i, j) = M(i, j);
    }
  }
  return {std::move(m0), std::move(mp)};
}

ScreeningReport importance_indicators(const RealMatrix& M, const std::vector<Excitation>& basis,
                                      int target_root, ImportanceMethod method) {
  const std::size_t n = basis.size();
  if (M.rows != n || M.cols != n) throw std::invalid_argument("matrix/basis size mismatch");
  std::vector<std::size_t> sd_idx, t_idx;
  for (std::size_t j = 0; j < n; ++j) (basis[j].rank() <= 2 ? sd_idx : t_idx).push_back(j);
  if (sd_idx.empty()) throw std::invalid_argument("block has no SD sub-block");

  // Zeroth order: the SD sub-block eigenproblem.
  const std::size_t nsd = sd_idx.size();
  Eigen::MatrixXd msd(nsd, nsd);
  for (std::size_t a = 0; a < nsd; ++a)
    for (std::size_t b = 0; b < nsd; ++b) msd(static_cast<long>(a), static_cast<long>(b)) = M(sd_idx[a], sd_idx[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (msd + msd.transpose()));
  if (target_root < 0 || target_root >= static_cast<int>(nsd)) {
    throw std::invalid_argument("target root outside the SD spectrum");
  }
  const double e_m = es.eigenvalues()(target_root);
  Eigen::VectorXd gamma_sd = es.eigenvectors().col(target_root);

  ScreeningReport report;
  report.method = method;
  report.target_root = target_root;
  report.e0_target = e_m;
  report.n_symmetry = t_idx.size();

  // Zero-padded target vector for the partitioned route.
  Eigen::VectorXd gamma_full = Eigen::VectorXd::Zero(static_cast<long>(n));
  for (std::size_t a = 0; a < nsd; ++a) gamma_full(static_cast<long>(sd_idx[a])) = gamma_sd(static_cast<long>(a));

  auto [m0, mp] = partition_M(M, basis);
  Eigen::MatrixXd mp_e = to_eigen(mp);
  Eigen::VectorXd coupling = mp_e * gamma_full;  // (M' Γ_m)
  report.e1_target = gamma_full.dot(coupling);
  report.e1_violation = std::abs(report.e1_target) > 1e-10;

  for (std::size_t i : t_idx) {
    double c_i;
    if (method == ImportanceMethod::RayleighSchroedinger) {
      c_i = coupling(static_cast<long>(i));  // Γ_i^(0)† M' Γ_m^(0) with Γ_i = e_i
    } else {
      // Diagonal closed form: contract the triple row of the measured
      // couplings with the SD target coefficients directly.
      c_i = 0.0;
      for (std::size_t a = 0; a < nsd; ++a) c_i += M(i, sd_idx[a]) * gamma_sd(static_cast<long>(a));
    }
    const double e_i = M(i, i);
    const double denom = e_m - e_i;
    WEntry entry;
    entry.excitation = basis[i];
    entry.basis_index = i;
    if (std::abs(denom) < 1e-10) {
      entry.w_signed = 0.0;
      entry.w_abs = std::numeric_limits<double>::infinity();
      entry.degenerate = true;
    } else {
      entry.w_signed = c_i * c_i / denom;
      entry.w_abs = std::abs(entry.w_signed);
    }
    report.e2_target += entry.degenerate ? 0.0 : entry.w_signed;
    report.entries.push_back(std::move(entry));
  }

  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const WEntry& a, const WEntry& b) { return a.w_abs > b.w_abs; });

  double total = 0.0;
  for (const auto& e : report.entries)
    if (!e.degenerate) total += e.w_abs;
  double cum = 0.0;
  report.coverage_curve.reserve(report.entries.size() + 1);
  report.coverage_curve.emplace_back(0, 0.0);
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    if (!report.entries[k].degenerate) cum += report.entries[k].w_abs;
    report.coverage_curve.emplace_back(k + 1, total > 0.0 ? cum / total : 1.0);
  }
  return report;
}

std::vector<std::size_t> screen_triples(ScreeningReport& report, const ScreenMode& mode) {
  std::vector<std::size_t> selected;
  switch (mode.kind) {
    case ScreenMode::Coverage: {
      if (!(mode.f > 0.0 && mode.f <= 1.0)) {
        throw std::invalid_argument("coverage fraction must lie in (0, 1]");
      }
      report.mode = "coverage";
      report.coverage_fraction = mode.f;
      if (mode.f >= 1.0) {
        for (const auto& e : report.entries) selected.push_back(e.basis_index);
        break;
      }
      double total = 0.0;
      for (const auto& e : report.entries)
        if (!e.degenerate) total += e.w_abs;
      const double target = mode.f * total;
      double cum = 0.0;
      for (const auto& e : report.entries) {
        if (e.degenerate) {  // always selected; sorted first
          selected.push_back(e.basis_index);
          continue;
        }
        if (total == 0.0 || cum >= target) break;
        selected.push_back(e.basis_index);
        cum += e.w_abs;
      }
      break;
    }
    case ScreenMode::Threshold: {
      report.mode = "threshold";
      report.threshold = mode.eps_t;
      for (const auto& e : report.entries) {
        if (e.w_abs > mode.eps_t) selected.push_back(e.basis_index);
      }
      break;
    }
    case ScreenMode::TopK: {
      report.mode = "top_k";
      report.top_k = mode.k;
      for (std::size_t i = 0; i < std::min(mode.k, report.entries.size()); ++i) {
        selected.push_back(report.entries[i].basis_index);
      }
      break;
    }
  }
  report.n_selected = selected.size();
  return selected;
}

std::pair<std::vector<double>, RealMatrix> solve_block(const RealMatrix& M) {
  check_hermitian(M, 1e-10, "solve_block");
  Eigen::MatrixXd m = to_eigen(M);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  std::vector<double> evals(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return {std::move(evals), from_eigen(es.eigenvectors())};
}

double perturbative_correction(double omega_prime, std::span<const double> discarded_signed) {
  double w = omega_prime;
  for (double v : discarded_signed) w += v;
  return w;
}

RootChoice target_root(const EomBlock& block, const RootSelector& selector) {
  RootChoice choice;
  const std::size_t n_roots = block.eigenvalues.size();
  if (n_roots == 0) throw std::invalid_argument("block is not solved");
  if (selector.kind == RootSelector::Ordinal) {
    if (selector.ordinal < 1 || static_cast<std::size_t>(selector.ordinal) > n_roots) {
      throw std::invalid_argument("root ordinal outside block");
    }
    choice.index = selector.ordinal - 1;
    choice.overlap = 1.0;
    return choice;
  }
  if (selector.reference.empty() || selector.reference.size() > block.basis.size()) {
    throw std::invalid_argument("overlap selector needs a reference over a basis prefix");
  }
  double best = -1.0;
  for (std::size_t r = 0; r < n_roots; ++r) {
    double ov = 0.0;
    for (std::size_t i = 0; i < selector.reference.size(); ++i) {
      ov += selector.reference[i] * block.eigenvectors(i, r);
    }
    ov = std::abs(ov);
    if (ov > best) {
      best = ov;
      choice.index = static_cast<int>(r);
    }
  }
  choice.overlap = best;
  choice.ambiguous = best < 0.5;
  return choice;
}

Statevector eom_root_state(const AdaptAnsatz& ansatz, const std::vector<Excitation>& basis,
                           std::span<const double> gamma) {
  if (gamma.size() != basis.size()) throw std::invalid_argument("gamma/basis size mismatch");
  Statevector psi(ansatz.n_qubits);
  const std::uint64_t hf = ansatz.reference.mask();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto img = determinant_image(basis[i], hf);
    if (img.sign == 0) continue;
    psi[img.mask] += gamma[i] * static_cast<double>(img.sign);
  }
  AnsatzApplier(ansatz).apply(psi);
  return psi;
}

double killer_condition_residual(const AdaptAnsatz& ansatz, const Excitation& exc) {
  FermionSum r_dag = excitation_operator(exc).adjoint();
  CompiledFermionOp op(r_dag, ansatz.n_qubits);
  Statevector hf = prepare_determinant(ansatz.reference, ansatz.n_qubits);
  Statevector v = op.apply(hf);
  AnsatzApplier(ansatz).apply(v);
  return v.norm();
}

std::string ScreeningReport::to_json() const {
  nlohmann::json j;
  j["method"] = method == ImportanceMethod::RayleighSchroedinger ? "rayleigh-schroedinger"
                                                                 : "diagonal-closed-form";
  j["target_root"] = target_root;
  j["e0_target"] = e0_target;
  j["e1_target"] = e1_target;
  j["e1_violation"] = e1_violation;
  j["e2_target"] = e2_target;
  j["mode"] = mode;
  j["threshold"] = threshold;
  j["coverage_fraction"] = coverage_fraction;
  j["top_k"] = top_k;
  j["counts"] = {{"raw", n_raw}, {"sz", n_sz}, {"symmetry", n_symmetry}, {"selected", n_selected}};
  char buf[40];
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.12g", e.w_signed);
    j["entries"].push_back({{"excitation", e.excitation.to_string()},
                            {"basis_index", e.basis_index},
                            {"w_signed", std::string(buf)},
                            {"degenerate", e.degenerate}});
  }
  j["coverage_curve"] = nlohmann::json::array();
  for (const auto& [k, frac] : coverage_curve) j["coverage_curve"].push_back({k, frac});
  return j.dump(2);
}

std::string EomBlock::to_json() const {
  nlohmann::json j;
  j["irrep"] = irrep;
  j["e0"] = e0;
  j["measured_elements"] = measured_elements;
  j["basis"] = nlohmann::json::array();
  for (const auto& exc : basis) j["basis"].push_back(exc.to_string());
  j["eigenvalues"] = eigenvalues;
  return j.dump(2);
}

}  // namespace qeomx
