#include "qeomx/hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qeomx {

std::uint64_t MolecularHamiltonian::hf_mask() const {
  return (std::uint64_t{1} << n_electrons) - 1;
}

Irrep MolecularHamiltonian::hf_irrep() const {
  Irrep label = kTotallySymmetric;
  for (int p = 0; p < n_electrons; ++p) label = irrep_product(label, so_irrep[static_cast<std::size_t>(p)]);
  return label;
}

MolecularHamiltonian assemble_hamiltonian(const IntegralSet& ints, const std::vector<int>& frozen,
                                          std::optional<std::vector<int>> active) {
  const std::size_t n_sp = ints.n_spatial;
  const int n_occ_spatial = ints.n_electrons / 2;
  if (ints.n_electrons % 2 != 0) {
    throw std::invalid_argument("closed-shell reference requires an even electron count");
  }

  std::set<int> frozen_set(frozen.begin(), frozen.end());
  if (frozen_set.size() != frozen.size()) throw std::invalid_argument("duplicate frozen orbital");
  for (int f : frozen) {
    if (f < 0 || f >= static_cast<int>(n_sp)) throw std::invalid_argument("frozen orbital out of range");
    if (f >= n_occ_spatial) {
      throw std::invalid_argument("frozen orbital " + std::to_string(f) +
                                  " is not doubly occupied in the reference");
    }
  }

  std::vector<int> act;
  if (active) {
    act = *active;
    std::set<int> act_set(act.begin(), act.end());
    if (act_set.size() != act.size()) throw std::invalid_argument("duplicate active orbital");
    for (int a : act) {
      if (a < 0 || a >= static_cast<int>(n_sp)) throw std::invalid_argument("active orbital out of range");
      if (frozen_set.count(a)) throw std::invalid_argument("orbital both frozen and active");
    }
    std::sort(act.begin(), act.end());
  } else {
    for (int p = 0; p < static_cast<int>(n_sp); ++p) {
      if (!frozen_set.count(p)) act.push_back(p);
    }
  }
  // Occupied orbitals outside frozen+active would leave electrons unaccounted.
  for (int p = 0; p < n_occ_spatial; ++p) {
    if (!frozen_set.count(p) && !std::binary_search(act.begin(), act.end(), p)) {
      throw std::invalid_argument("occupied orbital " + std::to_string(p) +
                                  " is neither frozen nor active");
    }
  }

  double e_frozen = 0.0;
  for (int i : frozen) {
    e_frozen += 2.0 * ints.h(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
    for (int j : frozen) {
      e_frozen += 2.0 * ints.g2(static_cast<std::size_t>(i), static_cast<std::size_t>(i),
                                static_cast<std::size_t>(j), static_cast<std::size_t>(j)) -
                  ints.g2(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                          static_cast<std::size_t>(j), static_cast<std::size_t>(i));
    }
  }

  const std::size_t n_act = act.size();
  MolecularHamiltonian mh;
  mh.n_so = static_cast<int>(2 * n_act);
  mh.n_electrons = ints.n_electrons - 2 * static_cast<int>(frozen.size());
  mh.constant = ints.e_nuclear + e_frozen;
  mh.group = ints.group;
  mh.so_irrep.resize(2 * n_act);
  mh.one_body.assign(4 * n_act * n_act, 0.0);
  mh.two_body.assign(16 * n_act * n_act * n_act * n_act, 0.0);

  const double drop = 1e-12;
  const std::size_t n_so = 2 * n_act;
  auto one_at = [&](std::size_t P, std::size_t Q) -> double& { return mh.one_body[P * n_so + Q]; };
  auto two_at = [&](std::size_t P, std::size_t Q, std::size_t R, std::size_t S) -> double& {
    return mh.two_body[((P * n_so + Q) * n_so + R) * n_so + S];
  };

  for (std::size_t p = 0; p < n_act; ++p) {
    mh.so_irrep[2 * p] = mh.so_irrep[2 * p + 1] = ints.orb_irrep[static_cast<std::size_t>(act[p])];
  }

  for (std::size_t p = 0; p < n_act; ++p) {
    for (std::size_t q = 0; q < n_act; ++q) {
      const std::size_t ap = static_cast<std::size_t>(act[p]), aq = static_cast<std::size_t>(act[q]);
      double f = ints.h(ap, aq);
      for (int j : frozen) {
        const std::size_t fj = static_cast<std::size_t>(j);
        f += 2.0 * ints.g2(ap, aq, fj, fj) - ints.g2(ap, fj, fj, aq);
      }
      if (std::abs(f) < drop) continue;
      for (int s = 0; s < 2; ++s) {
        one_at(2 * p + static_cast<std::size_t>(s), 2 * q + static_cast<std::size_t>(s)) = f;
      }
    }
  }

  for (std::size_t p = 0; p < n_act; ++p)
    for (std::size_t q = 0; q < n_act; ++q)
      for (std::size_t r = 0; r < n_act; ++r)
        for (std::size_t s = 0; s < n_act; ++s) {
          double v = ints.g2(static_cast<std::size_t>(act[p]), static_cast<std::size_t>(act[q]),
                             static_cast<std::size_t>(act[r]), static_cast<std::size_t>(act[s]));
          if (std::abs(v) < drop) continue;
          for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2) {
              two_at(2 * p + static_cast<std::size_t>(s1), 2 * q + static_cast<std::size_t>(s1),
                     2 * r + static_cast<std::size_t>(s2), 2 * s + static_cast<std::size_t>(s2)) = v;
            }
        }
  return mh;
}

FermionSum to_fermion_sum(const MolecularHamiltonian& mh, double threshold) {
  FermionSum h;
  if (mh.constant != 0.0) h.add_identity(mh.constant);
  for (int p = 0; p < mh.n_so; ++p) {
    for (int q = 0; q < mh.n_so; ++q) {
      double v = mh.h1(p, q);
      if (std::abs(v) >= threshold) h.add_normal_term(v, std::array{p}, std::array{q});
    }
  }
  for (int p = 0; p < mh.n_so; ++p)
    for (int q = 0; q < mh.n_so; ++q)
      for (int r = 0; r < mh.n_so; ++r)
        for (int s = 0; s < mh.n_so; ++s) {
          double v = mh.g2(p, q, r, s);
          if (std::abs(v) < threshold) continue;
          // 1/2 (PQ|RS) a†_P a†_R a_S a_Q
          h.add_normal_term(0.5 * v, std::array{p, r}, std::array{s, q});
        }
  h.simplify();
  return h;
}

double hf_energy(const MolecularHamiltonian& mh) {
  double e = mh.constant;
  for (int p = 0; p < mh.n_electrons; ++p) e += mh.h1(p, p);
  for (int p = 0; p < mh.n_electrons; ++p) {
    for (int q = 0; q < mh.n_electrons; ++q) {
      e += 0.5 * (mh.g2(p, p, q, q) - mh.g2(p, q, q, p));
    }
  }
  return e;
}

}  // namespace qeomx
