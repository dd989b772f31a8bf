#include "qeomx/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qeomx {

namespace {

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

using Cx = std::complex<double>;

// (-i)^k
Cx minus_i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

PauliSum PauliSum::identity(int n_qubits, Cx coeff) {
  PauliSum p(n_qubits);
  p.add_xz_term(coeff, 0, 0);
  return p;
}

void PauliSum::add_xz_term(Cx coeff, std::uint64_t x, std::uint64_t z) {
  terms_.push_back({coeff, x, z});
}

void PauliSum::add_named_term(Cx coeff, const std::string& paulis) {
  if (static_cast<int>(paulis.size()) != n_qubits_) {
    throw std::invalid_argument("pauli string length must equal qubit count");
  }
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n_qubits_; ++q) {
    std::uint64_t bit = std::uint64_t{1} << q;
    switch (paulis[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Z': z |= bit; break;
      case 'Y':
        // Y = i X Z
        x |= bit;
        z |= bit;
        coeff *= Cx{0.0, 1.0};
        break;
      default: throw std::invalid_argument("pauli letters must be I, X, Y or Z");
    }
  }
  add_xz_term(coeff, x, z);
}

std::vector<std::pair<Cx, std::string>> PauliSum::named_terms() const {
  std::vector<std::pair<Cx, std::string>> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    std::string s(static_cast<std::size_t>(n_qubits_), 'I');
    for (int q = 0; q < n_qubits_; ++q) {
      bool xb = t.x >> q & 1, zb = t.z >> q & 1;
      if (xb && zb) s[static_cast<std::size_t>(q)] = 'Y';
      else if (xb) s[static_cast<std::size_t>(q)] = 'X';
      else if (zb) s[static_cast<std::size_t>(q)] = 'Z';
    }
    out.emplace_back(t.coeff * minus_i_pow(std::popcount(t.x & t.z)), s);
  }
  return out;
}

PauliSum PauliSum::operator*(const PauliSum& rhs) const {
  if (n_qubits_ != rhs.n_qubits_) throw std::invalid_argument("qubit count mismatch");
  PauliSum out(n_qubits_);
  out.terms_.reserve(terms_.size() * rhs.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : rhs.terms_) {
      // X^xa Z^za X^xb Z^zb = (-1)^{za & xb} X^{xa^xb} Z^{za^zb}
      double sign = parity(a.z & b.x) ? -1.0 : 1.0;
      out.terms_.push_back({a.coeff * b.coeff * sign, a.x ^ b.x, a.z ^ b.z});
    }
  }
  out.simplify();
  return out;
}

PauliSum PauliSum::operator+(const PauliSum& rhs) const {
  if (n_qubits_ != rhs.n_qubits_) throw std::invalid_argument("qubit count mismatch");
  PauliSum out = *this;
  out.terms_.insert(out.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  out.simplify();
  return out;
}

PauliSum PauliSum::operator-(const PauliSum& rhs) const {
  if (n_qubits_ != rhs.n_qubits_) throw std::invalid_argument("qubit count mismatch");
  PauliSum out = *this;
  for (const auto& t : rhs.terms_) out.terms_.push_back({-t.coeff, t.x, t.z});
  out.simplify();
  return out;
}

PauliSum& PauliSum::operator*=(Cx scalar) {
  for (auto& t : terms_) t.coeff *= scalar;
  return *this;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    double sign = parity(t.x & t.z) ? -1.0 : 1.0;
    out.terms_.push_back({std::conj(t.coeff) * sign, t.x, t.z});
  }
  return out;
}

void PauliSum::simplify(double tol) {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return a.x != b.x ? a.x < b.x : a.z < b.z;
  });
  std::vector<Term> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().x == t.x && merged.back().z == t.z) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  terms_.clear();
  for (const auto& t : merged) {
    if (std::abs(t.coeff) > tol) terms_.push_back(t);
  }
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& t : terms_) {
    double sign = parity(t.x & t.z) ? -1.0 : 1.0;
    if (std::abs(std::conj(t.coeff) * sign - t.coeff) > tol) return false;
  }
  return true;
}

bool PauliSum::is_anti_hermitian(double tol) const {
  for (const auto& t : terms_) {
    double sign = parity(t.x & t.z) ? -1.0 : 1.0;
    if (std::abs(std::conj(t.coeff) * sign + t.coeff) > tol) return false;
  }
  return true;
}

double PauliSum::distance_to_identity(Cx scale) const {
  double d = 0.0;
  bool saw_identity = false;
  for (const auto& t : terms_) {
    if (t.x == 0 && t.z == 0) {
      saw_identity = true;
      d = std::max(d, std::abs(t.coeff - scale));
    } else {
      d = std::max(d, std::abs(t.coeff));
    }
  }
  if (!saw_identity) d = std::max(d, std::abs(scale));
  return d;
}

PauliSum jordan_wigner(const FermionSum& op, int n_qubits) {
  PauliSum out(n_qubits);
  for (const auto& term : op.terms()) {
    PauliSum acc = PauliSum::identity(n_qubits, term.coeff);
    for (const auto& lop : term.ops) {
      if (lop.index < 0 || lop.index >= n_qubits) {
        throw std::out_of_range("fermionic mode index " + std::to_string(lop.index) +
                                " not below qubit count " + std::to_string(n_qubits));
      }
      std::uint64_t bit = std::uint64_t{1} << lop.index;
      std::uint64_t zlow = bit - 1;
      PauliSum single(n_qubits);
      // a†_p = 1/2 (X_p - iY_p) Z_<p = 1/2 [X Z_<p] + 1/2 [XZ Z_<p]
      // a_p  = 1/2 (X_p + iY_p) Z_<p = 1/2 [X Z_<p] - 1/2 [XZ Z_<p]
      single.add_xz_term(0.5, bit, zlow);
      single.add_xz_term(lop.create ? 0.5 : -0.5, bit, zlow | bit);
      acc = acc * single;
    }
    for (const auto& t : acc.terms()) out.add_xz_term(t.coeff, t.x, t.z);
  }
  out.simplify();
  return out;
}

}  // namespace qeomx
