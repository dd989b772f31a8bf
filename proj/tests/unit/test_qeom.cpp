#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "qeomx/errors.hpp"
#include "qeomx/fci.hpp"
#include "qeomx/qeom.hpp"

using namespace qeomx;

namespace {

AdaptAnsatz identity_ansatz(const MolecularHamiltonian& mh) {
  AdaptAnsatz ansatz;
  ansatz.n_qubits = mh.n_so;
  for (int p = 0; p < mh.n_electrons; ++p) ansatz.reference.occupied.push_back(p);
  ansatz.energy = hf_energy(mh);
  return ansatz;
}

AdaptAnsatz optimized_ansatz(const MolecularHamiltonian& mh, double eps = 1e-6) {
  auto pool = filter_pool_by_symmetry(make_pool(PoolKind::SpinAdapted, mh), mh.hf_irrep(),
                                      mh.so_irrep);
  if (pool.empty()) pool = make_pool(PoolKind::SpinAdapted, mh);
  AdaptOptions opt;
  opt.gradient_eps = eps;
  opt.optimizer_tol = std::min(1e-7, eps);
  return run_adapt(mh, pool, opt).first;
}

std::vector<double> column(const RealMatrix& m, std::size_t j) {
  std::vector<double> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out[i] = m(i, j);
  return out;
}

}  // namespace

TEST_CASE("basis ordering is rank-major then lexicographic") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 1);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  int last_rank = 0;
  for (const auto& e : basis) {
    CHECK(e.rank() >= last_rank);
    last_rank = e.rank();
    CHECK(e.irrep == kTotallySymmetric);
  }
  // with trivial labels the symmetric block is every Sz-conserving excitation
  std::vector<Irrep> trivial(static_cast<std::size_t>(mh.n_so), 0);
  std::size_t expected = 0;
  for (int r : {1, 2, 3})
    expected += enumerate_excitations(r, mh.n_electrons, mh.n_so - mh.n_electrons, {}, trivial).size();
  CHECK(basis.size() == expected);
}

TEST_CASE("with the identity ansatz, M reduces to slater-condon CI elements") {
  MolecularHamiltonian mh = qeomx::testing::random_system(4, 4, 2024);
  AdaptAnsatz ansatz = identity_ansatz(mh);
  const double e0 = ansatz.energy;
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  RealMatrix M = build_M(basis, ham, ansatz, e0);
  const std::uint64_t hf = mh.hf_mask();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto di = determinant_image(basis[i], hf);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      auto dj = determinant_image(basis[j], hf);
      double expected = di.sign * dj.sign * slater_condon(mh, di.mask, dj.mask);
      if (i == j) expected -= e0;
      CHECK(std::abs(M(i, j) - expected) < 1e-10);
    }
  }
}

TEST_CASE("pauli-surface build agrees with the compiled fermionic build") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 44);
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-4);
  const double e0 = vqe_energy(ansatz, mh);
  ansatz.energy = e0;
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2});
  PauliSum hp = jordan_wigner(to_fermion_sum(mh), mh.n_so);
  CompiledFermionOp hf_op(to_fermion_sum(mh), mh.n_so);
  RealMatrix a = build_M(basis, hp, ansatz, e0);
  RealMatrix b = build_M(basis, hf_op, ansatz, e0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) CHECK(std::abs(a(i, j) - b(i, j)) < 1e-11);
}

TEST_CASE("M is hermitian and the stale-ansatz check fires") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 3);
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-5);
  const double e0 = ansatz.energy;
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  RealMatrix M = build_M(basis, ham, ansatz, e0);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.cols; ++j) CHECK(std::abs(M(i, j) - M(j, i)) < 1e-10);
  CHECK_THROWS_AS(build_M(basis, ham, ansatz, e0 + 1e-3), ContractViolation);
}

TEST_CASE("cross-irrep elements of the unfiltered M vanish") {
  MolecularHamiltonian mh = qeomx::testing::h4_system();
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-5);
  const double e0 = ansatz.energy;
  // full Sz-conserving SD manifold, no irrep filter
  std::vector<Excitation> basis;
  for (int r : {1, 2}) {
    auto part = enumerate_excitations(r, mh.n_electrons, mh.n_so - mh.n_electrons, {}, mh.so_irrep);
    basis.insert(basis.end(), part.begin(), part.end());
  }
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  RealMatrix M = build_M(basis, ham, ansatz, e0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (basis[i].irrep != basis[j].irrep) CHECK(std::abs(M(i, j)) < 1e-10);
}

TEST_CASE("block-diagonal solve equals the unfiltered spectrum") {
  MolecularHamiltonian mh = qeomx::testing::h4_system();
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-5);
  const double e0 = ansatz.energy;
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  std::vector<Excitation> all;
  for (int r : {1, 2}) {
    auto part = enumerate_excitations(r, mh.n_electrons, mh.n_so - mh.n_electrons, {}, mh.so_irrep);
    all.insert(all.end(), part.begin(), part.end());
  }
  auto [full_evals, full_vecs] = solve_block(build_M(all, ham, ansatz, e0));
  std::vector<double> merged;
  for (Irrep lab = 0; lab < mh.group.order(); ++lab) {
    auto blk = build_basis(mh, lab, {1, 2});
    if (blk.empty()) continue;
    auto [evals, vecs] = solve_block(build_M(blk, ham, ansatz, e0));
    merged.insert(merged.end(), evals.begin(), evals.end());
  }
  std::sort(merged.begin(), merged.end());
  REQUIRE(merged.size() == full_evals.size());
  for (std::size_t i = 0; i < merged.size(); ++i)
    CHECK(merged[i] == doctest::Approx(full_evals[i]).epsilon(1e-9));
}

TEST_CASE("partition reconstructs M exactly with the right sparsity") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 10);
  AdaptAnsatz ansatz = identity_ansatz(mh);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  RealMatrix M = build_M(basis, ham, ansatz, ansatz.energy);
  auto [m0, mp] = partition_M(M, basis);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(mp(i, i) == 0.0);  // diagonal stays in M0
    for (std::size_t j = 0; j < basis.size(); ++j) {
      CHECK(m0(i, j) + mp(i, j) == M(i, j));  // bit-exact split
      if (basis[i].rank() < 3 && basis[j].rank() < 3) CHECK(mp(i, j) == 0.0);
      if (i != j && (basis[i].rank() == 3 || basis[j].rank() == 3)) CHECK(m0(i, j) == 0.0);
    }
  }
  // no triples: M' is identically zero
  auto sd = build_basis(mh, kTotallySymmetric, {1, 2});
  RealMatrix Msd = build_M(sd, ham, ansatz, ansatz.energy);
  auto [sd0, sdp] = partition_M(Msd, sd);
  for (double v : sdp.data) CHECK(v == 0.0);
}

TEST_CASE("screening-subset build reproduces the measured region and zeroes the rest") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 11);
  AdaptAnsatz ansatz = identity_ansatz(mh);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  std::size_t measured_full = 0, measured_subset = 0;
  RealMatrix full = build_M(basis, ham, ansatz, ansatz.energy, ElementSet::All, &measured_full);
  RealMatrix sub =
      build_M(basis, ham, ansatz, ansatz.energy, ElementSet::ScreeningSubset, &measured_subset);
  CHECK(measured_subset < measured_full);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      bool triple_pair = basis[i].rank() == 3 && basis[j].rank() == 3 && i != j;
      if (triple_pair) CHECK(sub(i, j) == 0.0);
      else CHECK(std::abs(sub(i, j) - full(i, j)) < 1e-10);
    }
  }
}

TEST_CASE("importance indicators: both methods agree and rank sensibly") {
  MolecularHamiltonian mh = qeomx::testing::random_system(4, 4, 31);
  AdaptAnsatz ansatz = identity_ansatz(mh);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  RealMatrix sub = build_M(basis, ham, ansatz, ansatz.energy, ElementSet::ScreeningSubset);
  auto rs = importance_indicators(sub, basis, 0, ImportanceMethod::RayleighSchroedinger);
  auto cf = importance_indicators(sub, basis, 0, ImportanceMethod::DiagonalClosedForm);
  REQUIRE(rs.entries.size() == cf.entries.size());
  for (std::size_t k = 0; k < rs.entries.size(); ++k) {
    CHECK(rs.entries[k].basis_index == cf.entries[k].basis_index);
    CHECK(rs.entries[k].w_signed == doctest::Approx(cf.entries[k].w_signed).epsilon(1e-10));
  }
  CHECK(std::abs(rs.e1_target) < 1e-10);  // first-order shift vanishes
  // sorted descending by |W|
  for (std::size_t k = 1; k < rs.entries.size(); ++k) {
    CHECK(rs.entries[k - 1].w_abs >= rs.entries[k].w_abs);
  }
  // coverage curve is non-decreasing to one
  for (std::size_t k = 1; k < rs.coverage_curve.size(); ++k) {
    CHECK(rs.coverage_curve[k].second >= rs.coverage_curve[k - 1].second - 1e-14);
  }
  CHECK(rs.coverage_curve.back().second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a triple with no coupling has zero importance") {
  // synthetic block: 1 single + 2 triples, one of them decoupled
  std::vector<Excitation> basis(3);
  basis[0].ann = {0};
  basis[0].cre = {2};
  basis[1].ann = {0, 1, 2};
  basis[1].cre = {4, 5, 6};
  basis[2].ann = {0, 1, 3};
  basis[2].cre = {4, 5, 7};
  RealMatrix M(3, 3);
  M(0, 0) = 1.0;
  M(1, 1) = 3.0;
  M(2, 2) = 5.0;
  M(0, 1) = M(1, 0) = 0.2;  // coupled triple
  auto report = importance_indicators(M, basis, 0, ImportanceMethod::DiagonalClosedForm);
  REQUIRE(report.entries.size() == 2);
  CHECK(report.entries[0].basis_index == 1);
  CHECK(report.entries[0].w_signed == doctest::Approx(0.2 * 0.2 / (1.0 - 3.0)).epsilon(1e-12));
  CHECK(report.entries[1].w_abs == 0.0);
}

TEST_CASE("degenerate denominator yields an always-selected sentinel") {
  std::vector<Excitation> basis(2);
  basis[0].ann = {0};
  basis[0].cre = {2};
  basis[1].ann = {0, 1, 2};
  basis[1].cre = {4, 5, 6};
  RealMatrix M(2, 2);
  M(0, 0) = 1.0;
  M(1, 1) = 1.0;  // degenerate with the target
  M(0, 1) = M(1, 0) = 0.1;
  auto report = importance_indicators(M, basis, 0, ImportanceMethod::DiagonalClosedForm);
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].degenerate);
  CHECK(std::isinf(report.entries[0].w_abs));
  ScreenMode mode;
  mode.kind = ScreenMode::Threshold;
  mode.eps_t = 1e9;
  auto selected = screen_triples(report, mode);
  REQUIRE(selected.size() == 1);  // infinity beats any threshold
}

TEST_CASE("screen modes: coverage, threshold, top-k") {
  std::vector<Excitation> basis(5);
  basis[0].ann = {0};
  basis[0].cre = {2};
  for (int t = 1; t < 5; ++t) {
    basis[static_cast<std::size_t>(t)].ann = {0, 1, 2};
    basis[static_cast<std::size_t>(t)].cre = {4 + t, 8, 9};
  }
  RealMatrix M(5, 5);
  M(0, 0) = 0.0;
  double couplings[4] = {0.4, 0.2, 0.1, 0.05};
  for (int t = 1; t < 5; ++t) {
    M(static_cast<std::size_t>(t), static_cast<std::size_t>(t)) = 2.0;
    M(0, static_cast<std::size_t>(t)) = M(static_cast<std::size_t>(t), 0) = couplings[t - 1];
  }
  auto report = importance_indicators(M, basis, 0, ImportanceMethod::DiagonalClosedForm);
  // |W| = c^2/2, ranked 0.08, 0.02, 0.005, 0.00125; total 0.10625
  ScreenMode cov;
  cov.kind = ScreenMode::Coverage;
  cov.f = 0.90;
  auto sel = screen_triples(report, cov);
  CHECK(sel.size() == 2);  // 0.08 + 0.02 = 0.1 >= 0.9 * 0.10625
  ScreenMode cov_all;
  cov_all.kind = ScreenMode::Coverage;
  cov_all.f = 1.0;
  CHECK(screen_triples(report, cov_all).size() == 4);
  ScreenMode thr;
  thr.kind = ScreenMode::Threshold;
  thr.eps_t = 0.01;
  CHECK(screen_triples(report, thr).size() == 2);
  ScreenMode thr_inf;
  thr_inf.kind = ScreenMode::Threshold;
  thr_inf.eps_t = std::numeric_limits<double>::infinity();
  CHECK(screen_triples(report, thr_inf).empty());
  ScreenMode top;
  top.kind = ScreenMode::TopK;
  top.k = 3;
  auto sel3 = screen_triples(report, top);
  REQUIRE(sel3.size() == 3);
  CHECK(sel3[0] == 1);  // strongest coupling first
  ScreenMode bad;
  bad.kind = ScreenMode::Coverage;
  bad.f = 0.0;
  CHECK_THROWS_AS(screen_triples(report, bad), std::invalid_argument);
}

TEST_CASE("solve_block basics") {
  RealMatrix one(1, 1);
  one(0, 0) = -0.3;
  auto [e1, v1] = solve_block(one);
  CHECK(e1[0] == doctest::Approx(-0.3));
  RealMatrix two(2, 2);
  two(0, 0) = 1.0;
  two(1, 1) = 3.0;
  two(0, 1) = two(1, 0) = 0.5;
  auto [e2, v2] = solve_block(two);
  double mid = 2.0, rad = std::sqrt(1.0 + 0.25);
  CHECK(e2[0] == doctest::Approx(mid - rad).epsilon(1e-12));
  CHECK(e2[1] == doctest::Approx(mid + rad).epsilon(1e-12));
  // eigen residual as the refinement oracle
  for (int k = 0; k < 2; ++k) {
    double r0 = two(0, 0) * v2(0, static_cast<std::size_t>(k)) + two(0, 1) * v2(1, static_cast<std::size_t>(k)) -
                e2[static_cast<std::size_t>(k)] * v2(0, static_cast<std::size_t>(k));
    CHECK(std::abs(r0) < 1e-12);
  }
  RealMatrix bad(2, 2);
  bad(0, 1) = 0.2;  // not symmetric
  CHECK_THROWS_AS(solve_block(bad), ContractViolation);
}

TEST_CASE("eigenvalues are invariant under a basis permutation") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 55);
  AdaptAnsatz ansatz = identity_ansatz(mh);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  RealMatrix M = build_M(basis, ham, ansatz, ansatz.energy);
  auto [evals, vecs] = solve_block(M);
  // reverse the basis order
  const std::size_t n = basis.size();
  RealMatrix P(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) P(i, j) = M(n - 1 - i, n - 1 - j);
  auto [evals_p, vecs_p] = solve_block(P);
  for (std::size_t i = 0; i < n; ++i) CHECK(evals[i] == doctest::Approx(evals_p[i]).epsilon(1e-10));
}

TEST_CASE("perturbative correction sums the signed discards") {
  CHECK(perturbative_correction(0.5, {}) == 0.5);
  std::vector<double> ws{0.01, -0.002};
  CHECK(perturbative_correction(0.5, ws) == doctest::Approx(0.508).epsilon(1e-14));
}

TEST_CASE("target_root ordinal and overlap modes") {
  EomBlock block;
  block.basis.resize(3);
  block.eigenvalues = {0.1, 0.2, 0.3};
  block.eigenvectors = RealMatrix(3, 3);
  block.eigenvectors(0, 0) = 1.0;
  block.eigenvectors(1, 1) = 1.0;
  block.eigenvectors(2, 2) = 1.0;
  RootSelector ord;
  ord.kind = RootSelector::Ordinal;
  ord.ordinal = 2;
  CHECK(target_root(block, ord).index == 1);
  RootSelector over;
  over.kind = RootSelector::Overlap;
  over.reference = {0.0, 1.0};  // prefix of length 2
  auto choice = target_root(block, over);
  CHECK(choice.index == 1);
  CHECK_FALSE(choice.ambiguous);
  over.reference = {0.3, 0.3};  // weak overlap with everything
  CHECK(target_root(block, over).ambiguous);
  RootSelector bad;
  bad.ordinal = 9;
  CHECK_THROWS_AS(target_root(block, bad), std::invalid_argument);
}

TEST_CASE("killer condition holds exactly for every block excitation") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 77);
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-4);
  for (const auto& exc : build_basis(mh, kTotallySymmetric, {1, 2, 3})) {
    CHECK(killer_condition_residual(ansatz, exc) == 0.0);
  }
}

TEST_CASE("shift invariance: constant offsets move e0 and nothing else") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 88);
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-5);
  double e0 = ansatz.energy;
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  auto [ev, vecs] = solve_block(build_M(basis, ham, ansatz, e0));
  MolecularHamiltonian shifted = mh;
  shifted.constant += 0.5;
  CompiledFermionOp ham2(to_fermion_sum(shifted), mh.n_so);
  auto [ev2, vecs2] = solve_block(build_M(basis, ham2, ansatz, e0 + 0.5));
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - ev2[i]) < 1e-10);
}

TEST_CASE("two-electron systems: SD excitation energies equal the fci gaps") {
  for (double r : {1.0, 1.4, 2.0}) {
    ScfSystem sys = scf_system(h2_molecule(r), PointGroup::from_name("d2h"));
    MolecularHamiltonian mh = assemble_hamiltonian(sys.ints);
    auto pool = filter_pool_by_symmetry(make_pool(PoolKind::SpinAdapted, mh), mh.hf_irrep(),
                                        mh.so_irrep);
    AdaptOptions opt;
    opt.gradient_eps = 1e-9;
    opt.optimizer_tol = 1e-11;
    auto [ansatz, report] = run_adapt(mh, pool, opt);
    CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
    auto sector = sector_basis(mh.n_so, mh.n_electrons, 0, std::nullopt, mh.so_irrep);
    auto fci = fci_spectrum(mh, sector, static_cast<int>(sector.dim()));
    std::vector<double> gaps;
    for (std::size_t i = 1; i < fci.size(); ++i) gaps.push_back(fci[i] - fci[0]);
    std::vector<double> omegas;
    for (Irrep lab = 0; lab < mh.group.order(); ++lab) {
      auto blk = build_basis(mh, lab, {1, 2});
      if (blk.empty()) continue;
      auto [ev, vecs] = solve_block(build_M(blk, ham, ansatz, ansatz.energy));
      omegas.insert(omegas.end(), ev.begin(), ev.end());
    }
    std::sort(omegas.begin(), omegas.end());
    REQUIRE(omegas.size() == gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      CHECK(std::abs(omegas[i] - gaps[i]) < 1e-8);
    }
  }
}

TEST_CASE("epsilon zero keeps everything: screened block equals the full block") {
  MolecularHamiltonian mh = qeomx::testing::random_system(4, 4, 91);
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-4);
  const double e0 = ansatz.energy;
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  auto sdt = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  auto [full_evals, full_vecs] = solve_block(build_M(sdt, ham, ansatz, e0));

  RealMatrix sub = build_M(sdt, ham, ansatz, e0, ElementSet::ScreeningSubset);
  auto report = importance_indicators(sub, sdt, 0, ImportanceMethod::DiagonalClosedForm);
  ScreenMode mode;
  mode.kind = ScreenMode::Threshold;
  mode.eps_t = 0.0;
  auto selected = screen_triples(report, mode);
  std::sort(selected.begin(), selected.end());
  std::vector<Excitation> reduced = build_basis(mh, kTotallySymmetric, {1, 2});
  for (auto idx : selected) reduced.push_back(sdt[idx]);
  REQUIRE(reduced.size() == sdt.size());  // nothing has exactly zero weight here
  auto [evals, vecs] = solve_block(build_M(reduced, ham, ansatz, e0));
  for (std::size_t i = 0; i < evals.size(); ++i)
    CHECK(evals[i] == doctest::Approx(full_evals[i]).epsilon(1e-10));
}

TEST_CASE("root state for an eigenvector is normalized and reproduces omega") {
  MolecularHamiltonian mh = qeomx::testing::random_system(3, 2, 101);
  AdaptAnsatz ansatz = optimized_ansatz(mh, 1e-5);
  const double e0 = ansatz.energy;
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  auto [evals, vecs] = solve_block(build_M(basis, ham, ansatz, e0));
  Statevector psi = eom_root_state(ansatz, basis, column(vecs, 0));
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(expectation(ham, psi) == doctest::Approx(e0 + evals[0]).epsilon(1e-8));
}

TEST_CASE("block and screening reports serialize to json") {
  MolecularHamiltonian mh = qeomx::testing::random_system(4, 4, 120);
  AdaptAnsatz ansatz = identity_ansatz(mh);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  EomBlock block;
  block.irrep = kTotallySymmetric;
  block.basis = basis;
  block.e0 = ansatz.energy;
  block.M = build_M(basis, ham, ansatz, ansatz.energy, ElementSet::All, &block.measured_elements);
  auto [ev, vecs] = solve_block(block.M);
  block.eigenvalues = ev;
  block.eigenvectors = vecs;
  std::string js = block.to_json();
  CHECK(js.find("\"eigenvalues\"") != std::string::npos);
  CHECK(js.find("\"measured_elements\"") != std::string::npos);
  CHECK(js.find("1: (") != std::string::npos);  // excitation text form

  auto report = importance_indicators(block.M, basis, 0, ImportanceMethod::DiagonalClosedForm);
  ScreenMode mode;
  mode.kind = ScreenMode::Coverage;
  mode.f = 0.9;
  screen_triples(report, mode);
  std::string rs = report.to_json();
  CHECK(rs.find("\"coverage_curve\"") != std::string::npos);
  CHECK(rs.find("\"w_signed\"") != std::string::npos);
  CHECK(rs.find("\"mode\": \"coverage\"") != std::string::npos);
}
