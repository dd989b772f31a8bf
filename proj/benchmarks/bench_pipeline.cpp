#include <benchmark/benchmark.h>

#include "qeomx/fci.hpp"
#include "qeomx/qeom.hpp"
#include "qeomx/sbasis.hpp"

using namespace qeomx;

namespace {

// H4 rectangle keeps the block sizes small enough for tight timing loops.
MolecularHamiltonian h4() {
  SOrbitalBasis basis;
  auto con = default_hydrogen_contraction();
  for (double sx : {+1.0, -1.0})
    for (double sy : {+1.0, -1.0}) basis.atoms.push_back({1.0, {sx, sy * 1.5, 0.0}, {con}});
  ScfSystem sys = scf_system(basis, PointGroup::from_name("d2h"));
  return assemble_hamiltonian(sys.ints);
}

AdaptAnsatz short_ansatz(const MolecularHamiltonian& mh) {
  auto pool = filter_pool_by_symmetry(make_pool(PoolKind::SpinAdapted, mh), mh.hf_irrep(),
                                      mh.so_irrep);
  AdaptOptions opt;
  opt.gradient_eps = 1e-4;
  opt.max_iterations = 8;
  return run_adapt(mh, pool, opt).first;
}

}  // namespace

static void BM_BuildM_Full(benchmark::State& state) {
  MolecularHamiltonian mh = h4();
  AdaptAnsatz ansatz = short_ansatz(mh);
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  for (auto _ : state) {
    RealMatrix M = build_M(basis, ham, ansatz, ansatz.energy);
    benchmark::DoNotOptimize(M.data.data());
  }
  state.counters["basis"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_BuildM_Full)->Unit(benchmark::kMillisecond);

static void BM_BuildM_ScreeningSubset(benchmark::State& state) {
  MolecularHamiltonian mh = h4();
  AdaptAnsatz ansatz = short_ansatz(mh);
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  auto basis = build_basis(mh, kTotallySymmetric, {1, 2, 3});
  for (auto _ : state) {
    RealMatrix M = build_M(basis, ham, ansatz, ansatz.energy, ElementSet::ScreeningSubset);
    benchmark::DoNotOptimize(M.data.data());
  }
}
BENCHMARK(BM_BuildM_ScreeningSubset)->Unit(benchmark::kMillisecond);

static void BM_AdaptIteration(benchmark::State& state) {
  MolecularHamiltonian mh = h4();
  auto pool = filter_pool_by_symmetry(make_pool(PoolKind::SpinAdapted, mh), mh.hf_irrep(),
                                      mh.so_irrep);
  AdaptOptions opt;
  opt.gradient_eps = 1e-3;
  opt.max_iterations = 4;
  for (auto _ : state) {
    auto result = run_adapt(mh, pool, opt);
    benchmark::DoNotOptimize(result.first.energy);
  }
}
BENCHMARK(BM_AdaptIteration)->Unit(benchmark::kMillisecond);

static void BM_FciSector(benchmark::State& state) {
  MolecularHamiltonian mh = h4();
  auto sector = sector_basis(mh.n_so, mh.n_electrons, 0, std::nullopt, mh.so_irrep);
  for (auto _ : state) {
    auto energies = fci_spectrum(mh, sector, 4);
    benchmark::DoNotOptimize(energies.data());
  }
  state.counters["dim"] = static_cast<double>(sector.dim());
}
BENCHMARK(BM_FciSector)->Unit(benchmark::kMillisecond);
