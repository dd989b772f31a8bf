#include "qeomx/fermion.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qeomx {

namespace {

// Sorts `v`, returning the sign of the permutation, or 0 on duplicates.
int sort_with_sign(std::vector<int>& v, bool descending) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      bool swap = descending ? v[j] > v[j - 1] : v[j] < v[j - 1];
      if (swap) {
        std::swap(v[j], v[j - 1]);
        sign = -sign;
      } else {
        break;
      }
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == v[i - 1]) return 0;
  }
  return sign;
}

bool term_less(const FermionTerm& a, const FermionTerm& b) {
  if (a.ops.size() != b.ops.size()) return a.ops.size() < b.ops.size();
  for (std::size_t i = 0; i < a.ops.size(); ++i) {
    if (a.ops[i].create != b.ops[i].create) return a.ops[i].create > b.ops[i].create;
    if (a.ops[i].index != b.ops[i].index) return a.ops[i].index < b.ops[i].index;
  }
  return false;
}

bool same_ops(const FermionTerm& a, const FermionTerm& b) { return a.ops == b.ops; }

}  // namespace

void FermionSum::add_normal_term(std::complex<double> coeff, std::span<const int> cre,
                                 std::span<const int> ann) {
  std::vector<int> c(cre.begin(), cre.end());
  std::vector<int> a(ann.begin(), ann.end());
  int sc = sort_with_sign(c, /*descending=*/true);
  int sa = sort_with_sign(a, /*descending=*/false);
  if (sc == 0 || sa == 0) return;
  FermionTerm term;
  term.coeff = coeff * static_cast<double>(sc * sa);
  term.ops.reserve(c.size() + a.size());
  for (int idx : c) term.ops.push_back({idx, true});
  for (int idx : a) term.ops.push_back({idx, false});
  terms_.push_back(std::move(term));
}

void FermionSum::add_identity(std::complex<double> coeff) {
  terms_.push_back({coeff, {}});
}

FermionSum FermionSum::adjoint() const {
  FermionSum out;
  for (const auto& t : terms_) {
    FermionTerm adj;
    adj.coeff = std::conj(t.coeff);
    adj.ops.reserve(t.ops.size());
    for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) {
      adj.ops.push_back({it->index, !it->create});
    }
    // The reversed string of a canonical term is again canonical.
    out.terms_.push_back(std::move(adj));
  }
  return out;
}

FermionSum& FermionSum::operator+=(const FermionSum& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

FermionSum& FermionSum::operator-=(const FermionSum& other) {
  for (const auto& t : other.terms_) {
    terms_.push_back({-t.coeff, t.ops});
  }
  return *this;
}

FermionSum& FermionSum::operator*=(std::complex<double> scalar) {
  for (auto& t : terms_) t.coeff *= scalar;
  return *this;
}

void FermionSum::simplify(double tol) {
  std::sort(terms_.begin(), terms_.end(), term_less);
  std::vector<FermionTerm> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && same_ops(merged.back(), t)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  terms_.clear();
  for (auto& t : merged) {
    if (std::abs(t.coeff) > tol) terms_.push_back(std::move(t));
  }
}

int FermionSum::max_index() const {
  int m = -1;
  for (const auto& t : terms_)
    for (const auto& op : t.ops) m = std::max(m, op.index);
  return m;
}

std::uint64_t Excitation::cre_mask() const {
  std::uint64_t m = 0;
  for (int i : cre) m |= std::uint64_t{1} << i;
  return m;
}

std::uint64_t Excitation::ann_mask() const {
  std::uint64_t m = 0;
  for (int i : ann) m |= std::uint64_t{1} << i;
  return m;
}

std::string Excitation::to_string() const {
  std::ostringstream os;
  os << rank() << ": (";
  for (std::size_t i = 0; i < ann.size(); ++i) os << (i ? "," : "") << ann[i];
  os << ")->(";
  for (std::size_t i = 0; i < cre.size(); ++i) os << (i ? "," : "") << cre[i];
  os << ")";
  return os.str();
}

namespace {

int spin_of(int so) { return (so % 2 == 0) ? +1 : -1; }  // alpha even, beta odd

void combinations(int n, int k, int offset, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  // iterative lexicographic combinations of [0,n) shifted by offset
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k == 0) {
    std::vector<int> empty;
    fn(empty);
    return;
  }
  if (k > n) return;
  while (true) {
    std::vector<int> out(idx);
    for (auto& v : out) v += offset;
    fn(out);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

std::vector<Excitation> enumerate_excitations(int rank, int n_occ_so, int n_virt_so,
                                              const ExcitationConstraints& constraints,
                                              std::span<const Irrep> so_irrep) {
  if (rank < 1 || rank > 3) throw std::invalid_argument("excitation rank must be 1, 2 or 3");
  if (n_occ_so < 0 || n_virt_so < 0) throw std::invalid_argument("negative orbital count");
  if (static_cast<int>(so_irrep.size()) < n_occ_so + n_virt_so) {
    throw std::invalid_argument("so_irrep too short for the orbital window");
  }
  std::vector<Excitation> out;
  combinations(n_occ_so, rank, 0, [&](const std::vector<int>& ann) {
    int sz_ann = 0;
    for (int i : ann) sz_ann += spin_of(i);
    combinations(n_virt_so, rank, n_occ_so, [&](const std::vector<int>& cre) {
      int sz_cre = 0;
      for (int a : cre) sz_cre += spin_of(a);
      if (sz_cre - sz_ann != constraints.sz2_change) return;
      Excitation exc;
      exc.ann = ann;
      exc.cre = cre;
      exc.sz2_change = sz_cre - sz_ann;
      exc.irrep = operator_irrep(exc, so_irrep);
      if (constraints.irrep && exc.irrep != *constraints.irrep) return;
      out.push_back(std::move(exc));
    });
  });
  return out;
}

Irrep operator_irrep(const Excitation& exc, std::span<const Irrep> so_irrep) {
  Irrep label = kTotallySymmetric;
  for (int i : exc.ann) label = irrep_product(label, so_irrep[static_cast<std::size_t>(i)]);
  for (int a : exc.cre) label = irrep_product(label, so_irrep[static_cast<std::size_t>(a)]);
  return label;
}

FermionSum excitation_operator(const Excitation& exc) {
  FermionSum op;
  op.add_normal_term(1.0, exc.cre, exc.ann);
  return op;
}

DeterminantImage determinant_image(const Excitation& exc, std::uint64_t ref_mask) {
  // Mirrors the canonical string: annihilations act first (descending index
  // acts first within the string reversal), creations after.
  std::uint64_t m = ref_mask;
  int parity = 0;
  auto low_bits = [&](int i) {
    return std::popcount(m & ((std::uint64_t{1} << i) - 1));
  };
  for (auto it = exc.ann.rbegin(); it != exc.ann.rend(); ++it) {
    std::uint64_t bit = std::uint64_t{1} << *it;
    if (!(m & bit)) return {};
    parity += low_bits(*it);
    m &= ~bit;
  }
  for (auto it = exc.cre.rbegin(); it != exc.cre.rend(); ++it) {
    std::uint64_t bit = std::uint64_t{1} << *it;
    if (m & bit) return {};
    parity += low_bits(*it);
    m |= bit;
  }
  return {m, (parity % 2 == 0) ? +1 : -1};
}

Irrep determinant_irrep(std::uint64_t mask, std::span<const Irrep> so_irrep) {
  Irrep label = kTotallySymmetric;
  for (std::size_t i = 0; i < so_irrep.size(); ++i) {
    if (mask & (std::uint64_t{1} << i)) label = irrep_product(label, so_irrep[i]);
  }
  return label;
}

std::vector<FermionSum> spin_adapted_pool(int n_occ_spatial, int n_virt_spatial) {
  if (n_occ_spatial < 0 || n_virt_spatial < 0) throw std::invalid_argument("negative orbital count");
  const int o = n_occ_spatial, v = n_virt_spatial;
  auto al = [](int p) { return 2 * p; };
  auto be = [](int p) { return 2 * p + 1; };
  std::vector<FermionSum> pool;

  // Singlet singles.
  for (int i = 0; i < o; ++i) {
    for (int a = o; a < o + v; ++a) {
      FermionSum t;
      t.add_normal_term(1.0, std::array{al(a)}, std::array{al(i)});
      t.add_normal_term(1.0, std::array{be(a)}, std::array{be(i)});
      t.simplify();
      pool.push_back(std::move(t));
    }
  }
  // Singlet-paired doubles: (a†_ab a†_ba + a†_bb a†_aa)(a_ja a_ib + a_ia a_jb).
  for (int i = 0; i < o; ++i) {
    for (int j = i; j < o; ++j) {
      for (int a = o; a < o + v; ++a) {
        for (int b = a; b < o + v; ++b) {
          FermionSum t;
          const std::array<std::array<int, 2>, 2> cre{{{be(a), al(b)}, {be(b), al(a)}}};
          const std::array<std::array<int, 2>, 2> ann{{{al(j), be(i)}, {al(i), be(j)}}};
          for (const auto& c : cre)
            for (const auto& an : ann) t.add_normal_term(1.0, c, an);
          t.simplify();
          if (!t.empty()) pool.push_back(std::move(t));
        }
      }
    }
  }
  // Triplet-paired doubles.
  for (int i = 0; i < o; ++i) {
    for (int j = i + 1; j < o; ++j) {
      for (int a = o; a < o + v; ++a) {
        for (int b = a + 1; b < o + v; ++b) {
          FermionSum t;
          t.add_normal_term(1.0, std::array{al(a), al(b)}, std::array{al(j), al(i)});
          t.add_normal_term(1.0, std::array{be(a), be(b)}, std::array{be(j), be(i)});
          const std::array<std::pair<std::array<int, 2>, double>, 2> cre{
              {{{be(a), al(b)}, +0.5}, {{be(b), al(a)}, -0.5}}};
          const std::array<std::pair<std::array<int, 2>, double>, 2> ann{
              {{{al(j), be(i)}, +1.0}, {{al(i), be(j)}, -1.0}}};
          for (const auto& [c, cs] : cre)
            for (const auto& [an, as] : ann) t.add_normal_term(cs * as, c, an);
          t.simplify();
          if (!t.empty()) pool.push_back(std::move(t));
        }
      }
    }
  }
  return pool;
}

std::vector<FermionSum> spin_orbital_sd_pool(int n_occ_so, int n_virt_so) {
  std::vector<Irrep> trivial(static_cast<std::size_t>(n_occ_so + n_virt_so), kTotallySymmetric);
  std::vector<FermionSum> pool;
  for (int rank = 1; rank <= 2; ++rank) {
    for (const auto& exc : enumerate_excitations(rank, n_occ_so, n_virt_so, {}, trivial)) {
      pool.push_back(excitation_operator(exc));
    }
  }
  return pool;
}

Irrep fermion_sum_irrep(const FermionSum& op, std::span<const Irrep> so_irrep) {
  if (op.empty()) return kTotallySymmetric;
  Irrep common = 0;
  bool first = true;
  for (const auto& t : op.terms()) {
    Irrep label = kTotallySymmetric;
    for (const auto& lop : t.ops) label = irrep_product(label, so_irrep[static_cast<std::size_t>(lop.index)]);
    if (first) {
      common = label;
      first = false;
    } else if (label != common) {
      throw std::invalid_argument("operator mixes irreps; no common label");
    }
  }
  return common;
}

FermionSum spin_squared_op(int n_spatial) {
  FermionSum op;
  auto al = [](int p) { return 2 * p; };
  auto be = [](int p) { return 2 * p + 1; };
  // S^2 = Sz^2 + Sz + S-S+ with S+ = sum_p a†_{pa} a_{pb}.
  // S-S+ normal ordered: sum_p n_{pb} - sum_pq a†_{pb} a†_{qa} a_{pa} a_{qb}.
  for (int p = 0; p < n_spatial; ++p) {
    op.add_normal_term(1.0, std::array{be(p)}, std::array{be(p)});
    for (int q = 0; q < n_spatial; ++q) {
      op.add_normal_term(-1.0, std::array{be(p), al(q)}, std::array{al(p), be(q)});
    }
  }
  // Sz = 1/2 sum_p (n_pa - n_pb); Sz^2 expands over pairs.
  for (int p = 0; p < n_spatial; ++p) {
    op.add_normal_term(0.5, std::array{al(p)}, std::array{al(p)});
    op.add_normal_term(-0.5, std::array{be(p)}, std::array{be(p)});
    for (int q = 0; q < n_spatial; ++q) {
      for (int sp = 0; sp < 2; ++sp) {
        for (int sq = 0; sq < 2; ++sq) {
          int P = 2 * p + sp, Q = 2 * q + sq;
          double sign = 0.25 * (sp == 0 ? 1.0 : -1.0) * (sq == 0 ? 1.0 : -1.0);
          // n_P n_Q = n_P for P==Q, else -a†_P a†_Q a_P a_Q.
          if (P == Q) {
            op.add_normal_term(sign, std::array{P}, std::array{P});
          } else {
            op.add_normal_term(-sign, std::array{P, Q}, std::array{P, Q});
          }
        }
      }
    }
  }
  op.simplify();
  return op;
}

FermionSum number_op(int n_so) {
  FermionSum op;
  for (int p = 0; p < n_so; ++p) op.add_normal_term(1.0, std::array{p}, std::array{p});
  op.simplify();
  return op;
}

}  // namespace qeomx
