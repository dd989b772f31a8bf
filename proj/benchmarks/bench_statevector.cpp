#include <benchmark/benchmark.h>

#include <random>

#include "qeomx/hamiltonian.hpp"
#include "qeomx/pauli.hpp"
#include "qeomx/statevector.hpp"

using namespace qeomx;

namespace {

MolecularHamiltonian dense_system(int n_sp) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  IntegralSet ints(static_cast<std::size_t>(n_sp), PointGroup::from_name("c1"));
  ints.n_electrons = n_sp;  // half filling
  const std::size_t n = static_cast<std::size_t>(n_sp);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) ints.set_h(p, q, dist(rng));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          ints.set_g2(p, q, r, s, 0.3 * dist(rng));
        }
  return assemble_hamiltonian(ints);
}

Statevector haar_like_state(int n_qubits) {
  std::mt19937 rng(21);
  std::normal_distribution<double> dist;
  Statevector psi(n_qubits);
  for (std::size_t i = 0; i < psi.dim(); ++i) psi[i] = {dist(rng), dist(rng)};
  psi.scale(1.0 / psi.norm());
  return psi;
}

FermionSum double_generator(int n_occ) {
  FermionSum t;
  t.add_normal_term(1.0, std::array{n_occ, n_occ + 1}, std::array{0, 1});
  FermionSum tau = t;
  tau -= t.adjoint();
  tau.simplify();
  return tau;
}

}  // namespace

static void BM_HamiltonianApplyFermionic(benchmark::State& state) {
  const int n_sp = static_cast<int>(state.range(0));
  MolecularHamiltonian mh = dense_system(n_sp);
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);
  Statevector psi = haar_like_state(mh.n_so);
  for (auto _ : state) {
    Statevector out = ham.apply(psi);
    benchmark::DoNotOptimize(out.amplitudes().data());
  }
  state.counters["terms"] = static_cast<double>(ham.term_count());
}
BENCHMARK(BM_HamiltonianApplyFermionic)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_HamiltonianApplyPauli(benchmark::State& state) {
  const int n_sp = static_cast<int>(state.range(0));
  MolecularHamiltonian mh = dense_system(n_sp);
  PauliSum ham = jordan_wigner(to_fermion_sum(mh), mh.n_so);
  Statevector psi = haar_like_state(mh.n_so);
  for (auto _ : state) {
    Statevector out = apply_pauli_sum(ham, psi);
    benchmark::DoNotOptimize(out.amplitudes().data());
  }
  state.counters["terms"] = static_cast<double>(ham.size());
}
BENCHMARK(BM_HamiltonianApplyPauli)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ExpGenerator(benchmark::State& state) {
  const int n_qubits = static_cast<int>(state.range(0));
  CompiledFermionOp tau(double_generator(n_qubits / 2), n_qubits);
  Statevector psi = haar_like_state(n_qubits);
  for (auto _ : state) {
    Statevector work = psi;
    apply_exp_inplace(tau, 0.17, work);
    benchmark::DoNotOptimize(work.amplitudes().data());
  }
}
BENCHMARK(BM_ExpGenerator)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_InnerProduct(benchmark::State& state) {
  const int n_qubits = static_cast<int>(state.range(0));
  Statevector a = haar_like_state(n_qubits);
  Statevector b = haar_like_state(n_qubits);
  for (auto _ : state) {
    auto v = Statevector::inner(a, b);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_InnerProduct)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
