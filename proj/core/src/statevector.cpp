#include "qeomx/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_map>

#include "qeomx/errors.hpp"

namespace qeomx {

namespace {

constexpr int kMaxQubits = 26;

void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
}

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

}  // namespace

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  check_qubits(n_qubits);
  amp_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
}

Statevector Statevector::basis_state(int n_qubits, std::uint64_t mask) {
  Statevector psi(n_qubits);
  if (mask >= psi.dim()) throw std::out_of_range("basis state outside register");
  psi.amp_[mask] = 1.0;
  return psi;
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

void Statevector::scale(std::complex<double> s) {
  for (auto& a : amp_) a *= s;
}

void Statevector::set_zero() { std::fill(amp_.begin(), amp_.end(), std::complex<double>{0.0, 0.0}); }

std::complex<double> Statevector::inner(const Statevector& bra, const Statevector& ket) {
  if (bra.dim() != ket.dim()) throw std::invalid_argument("statevector size mismatch");
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < bra.dim(); ++i) s += std::conj(bra.amp_[i]) * ket.amp_[i];
  return s;
}

std::vector<unsigned char> Statevector::to_bytes() const {
  std::vector<unsigned char> out(amp_.size() * 2 * sizeof(double));
  std::memcpy(out.data(), amp_.data(), out.size());
  return out;
}

std::uint64_t DeterminantRef::mask() const {
  std::uint64_t m = 0;
  for (int i : occupied) m |= std::uint64_t{1} << i;
  return m;
}

Statevector prepare_determinant(const DeterminantRef& det, int n_qubits) {
  for (int i : det.occupied) {
    if (i < 0 || i >= n_qubits) throw std::out_of_range("occupied index outside register");
  }
  return Statevector::basis_state(n_qubits, det.mask());
}

Statevector apply_pauli_sum(const PauliSum& op, const Statevector& psi) {
  if (op.n_qubits() != psi.n_qubits()) throw std::invalid_argument("operator/state size mismatch");
  Statevector out(psi.n_qubits());
  const std::size_t dim = psi.dim();
  for (const auto& t : op.terms()) {
    for (std::size_t i = 0; i < dim; ++i) {
      double sign = parity(i & t.z) ? -1.0 : 1.0;
      out[i ^ t.x] += t.coeff * sign * psi[i];
    }
  }
  return out;
}

Statevector apply_exp_generator(const PauliSum& tau, double theta, const Statevector& psi,
                                double term_cutoff) {
  if (!tau.is_anti_hermitian(1e-10)) {
    throw ContractViolation("exp generator is not anti-Hermitian");
  }
  // Large angles are split into unit-sized chunks so the series never has
  // to fight cancellation.
  const int chunks = std::max(1, static_cast<int>(std::ceil(std::abs(theta))));
  const double step = theta / chunks;
  Statevector out = psi;
  for (int c = 0; c < chunks; ++c) {
    Statevector v = out;
    for (int k = 1; k <= 400; ++k) {
      Statevector w = apply_pauli_sum(tau, v);
      w.scale(step / static_cast<double>(k));
      for (std::size_t i = 0; i < out.dim(); ++i) out[i] += w[i];
      double n = w.norm();
      v = std::move(w);
      if (n < term_cutoff) break;
      if (k == 400) throw ContractViolation("exp series did not converge");
    }
  }
  return out;
}

double expectation(const PauliSum& op, const Statevector& psi) {
  if (!op.is_hermitian(1e-10)) throw ContractViolation("expectation of a non-Hermitian operator");
  std::complex<double> num = Statevector::inner(psi, apply_pauli_sum(op, psi));
  double den = psi.norm();
  den *= den;
  std::complex<double> val = num / den;
  if (std::abs(val.imag()) > 1e-10) {
    throw ContractViolation("expectation has imaginary residue " + std::to_string(val.imag()));
  }
  return val.real();
}

std::complex<double> transition_element(const Statevector& bra, const PauliSum& op,
                                        const Statevector& ket) {
  if (bra.dim() != ket.dim()) throw std::invalid_argument("statevector size mismatch");
  return Statevector::inner(bra, apply_pauli_sum(op, ket));
}

CompiledFermionOp::CompiledFermionOp(const FermionSum& op, int n_qubits) : n_qubits_(n_qubits) {
  check_qubits(n_qubits);
  struct Key {
    std::uint64_t need, avoid, flip, pmask;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = k.need * 0x9e3779b97f4a7c15ull;
      h ^= k.avoid + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h ^= k.flip + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h ^= k.pmask + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<Key, std::complex<double>, KeyHash> merged;
  std::vector<Key> order;  // deterministic output order

  for (const auto& term : op.terms()) {
    std::uint64_t need = 0, avoid = 0, flips = 0, pmask = 0;
    int static_parity = 0;
    bool dead = false;
    for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it) {
      if (it->index < 0 || it->index >= n_qubits) {
        throw std::out_of_range("fermionic mode index outside register");
      }
      std::uint64_t bit = std::uint64_t{1} << it->index;
      std::uint64_t low = bit - 1;
      static_parity ^= parity(flips & low);
      pmask ^= low;
      bool flipped = flips & bit;
      // Intermediate occupation at this mode is input ^ flips.
      bool want_occupied = !it->create;
      bool input_must_be_one = want_occupied != flipped;
      if (input_must_be_one) {
        if (avoid & bit) { dead = true; break; }
        need |= bit;
      } else {
        if (need & bit) {
          // Already required occupied: consistent only if a flip separates
          // the two uses, which `flipped` accounted for; reaching here means
          // the same input condition contradicts itself.
          dead = true;
          break;
        }
        avoid |= bit;
      }
      flips ^= bit;
    }
    if (dead) continue;
    // need/avoid may overlap-check: a bit can be in need and later the
    // intermediate condition may be satisfied via flips, handled above.
    Key key{need, avoid, flips, pmask};
    std::complex<double> c = term.coeff * (static_parity ? -1.0 : 1.0);
    auto [it2, inserted] = merged.emplace(key, c);
    if (!inserted) it2->second += c;
    else order.push_back(key);
  }
  for (const auto& key : order) {
    auto c = merged[key];
    if (std::abs(c) > 1e-15) {
      terms_.push_back({key.need, key.avoid, key.flip, key.pmask, c});
    }
  }
}

void CompiledFermionOp::accumulate(const Statevector& in, Statevector& out) const {
  if (in.n_qubits() != n_qubits_ || out.n_qubits() != n_qubits_) {
    throw std::invalid_argument("operator/state size mismatch");
  }
  const std::uint64_t full = (std::uint64_t{1} << n_qubits_) - 1;
  for (const auto& t : terms_) {
    const std::uint64_t free = full & ~(t.need | t.avoid);
    const std::complex<double> c = t.coeff;
    std::uint64_t sub = free;
    while (true) {
      const std::uint64_t m = sub | t.need;
      const double sign = parity(m & t.pmask) ? -1.0 : 1.0;
      out[m ^ t.flip] += c * sign * in[m];
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }
}

Statevector CompiledFermionOp::apply(const Statevector& in) const {
  Statevector out(n_qubits_);
  accumulate(in, out);
  return out;
}

Statevector apply_fermion_sum(const FermionSum& op, const Statevector& psi) {
  return CompiledFermionOp(op, psi.n_qubits()).apply(psi);
}

void apply_exp_inplace(const CompiledFermionOp& tau, double theta, Statevector& psi,
                       double term_cutoff) {
  if (theta == 0.0) return;
  const int chunks = std::max(1, static_cast<int>(std::ceil(std::abs(theta))));
  const double step = theta / chunks;
  Statevector v(psi.n_qubits());
  Statevector w(psi.n_qubits());
  for (int c = 0; c < chunks; ++c) {
    v = psi;
    for (int k = 1; k <= 400; ++k) {
      w.set_zero();
      tau.accumulate(v, w);
      const double scale = step / static_cast<double>(k);
      double n2 = 0.0;
      for (std::size_t i = 0; i < psi.dim(); ++i) {
        w[i] *= scale;
        psi[i] += w[i];
        n2 += std::norm(w[i]);
      }
      std::swap(v, w);
      if (std::sqrt(n2) < term_cutoff) break;
      if (k == 400) throw ContractViolation("exp series did not converge");
    }
  }
}

double expectation(const CompiledFermionOp& op, const Statevector& psi) {
  std::complex<double> num = Statevector::inner(psi, op.apply(psi));
  double den = psi.norm();
  den *= den;
  std::complex<double> val = num / den;
  if (std::abs(val.imag()) > 1e-10) {
    throw ContractViolation("expectation has imaginary residue");
  }
  return val.real();
}

std::complex<double> transition_element(const Statevector& bra, const CompiledFermionOp& op,
                                        const Statevector& ket) {
  if (bra.dim() != ket.dim()) throw std::invalid_argument("statevector size mismatch");
  return Statevector::inner(bra, op.apply(ket));
}

double irrep_sector_weight(const Statevector& psi, std::span<const Irrep> so_irrep, Irrep label) {
  if (so_irrep.size() < static_cast<std::size_t>(psi.n_qubits())) {
    throw std::invalid_argument("so_irrep shorter than register");
  }
  // Basis-index irrep via incremental XOR table over qubits.
  const std::size_t dim = psi.dim();
  std::vector<Irrep> sector(dim, kTotallySymmetric);
  for (int q = 0; q < psi.n_qubits(); ++q) {
    const std::size_t bit = std::size_t{1} << q;
    const Irrep lab = so_irrep[static_cast<std::size_t>(q)];
    if (lab == kTotallySymmetric) continue;
    for (std::size_t i = bit; i < dim; i = (i + 1) | bit) {
      sector[i] = irrep_product(sector[i], lab);
    }
  }
  double w = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (sector[i] == label) w += std::norm(psi[i]);
  }
  return w;
}

}  // namespace qeomx
