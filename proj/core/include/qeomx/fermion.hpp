#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qeomx/point_group.hpp"

namespace qeomx {

/// One ladder operator. Strings are read left to right with the rightmost
/// operator acting first on the ket.
struct LadderOp {
  int index;
  bool create;
  bool operator==(const LadderOp&) const = default;
};

struct FermionTerm {
  std::complex<double> coeff;
  std::vector<LadderOp> ops;  // empty = identity
};

/// Weighted sum of fermionic ladder strings. Canonical storage keeps each
/// string with creations in descending and annihilations in ascending index
/// order (creations left of annihilations); equal strings are merged and
/// coefficients below 1e-14 pruned.
class FermionSum {
 public:
  FermionSum() = default;

  /// Adds coeff * a†_{cre[0]} a†_{cre[1]} ... a_{ann[0]} a_{ann[1]} ...
  /// (operators in the given left-to-right order), canonicalizing with the
  /// appropriate anticommutation sign. Repeated indices on one side make the
  /// term vanish.
  void add_normal_term(std::complex<double> coeff, std::span<const int> cre,
                       std::span<const int> ann);
  void add_identity(std::complex<double> coeff);

  FermionSum adjoint() const;
  FermionSum& operator+=(const FermionSum& other);
  FermionSum& operator-=(const FermionSum& other);
  FermionSum& operator*=(std::complex<double> scalar);

  void simplify(double tol = 1e-14);

  const std::vector<FermionTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int max_index() const;

 private:
  std::vector<FermionTerm> terms_;
};

/// A rank-1/2/3 particle-hole excitation with canonically ordered index sets.
struct Excitation {
  std::vector<int> ann;  // strictly ascending, occupied spin orbitals
  std::vector<int> cre;  // strictly ascending, virtual spin orbitals
  Irrep irrep = kTotallySymmetric;
  int sz2_change = 0;

  int rank() const { return static_cast<int>(ann.size()); }
  std::uint64_t cre_mask() const;
  std::uint64_t ann_mask() const;
  std::string to_string() const;  // e.g. "3: (0,3,5)->(8,11,12)"
  bool operator==(const Excitation&) const = default;
};

struct ExcitationConstraints {
  int sz2_change = 0;
  std::optional<Irrep> irrep;
};

/// All canonical excitations of the given rank from occupied spin orbitals
/// [0, n_occ_so) into virtuals [n_occ_so, n_occ_so + n_virt_so), filtered by
/// the constraints, ordered lexicographically on (annihilations, creations).
/// Spin orbital 2p is the alpha component of spatial orbital p, 2p+1 beta.
std::vector<Excitation> enumerate_excitations(int rank, int n_occ_so, int n_virt_so,
                                              const ExcitationConstraints& constraints,
                                              std::span<const Irrep> so_irrep);

/// XOR of the irreps of all involved spin orbitals.
Irrep operator_irrep(const Excitation& exc, std::span<const Irrep> so_irrep);

/// r_I as a single canonical ladder string with coefficient +1.
FermionSum excitation_operator(const Excitation& exc);

/// Applies r_I to a determinant. Returns the image determinant and its
/// parity sign (+1/-1), or sign 0 if the operator annihilates it. This is
/// the sign convention contract for r_I|ref> = ±|D_I>.
struct DeterminantImage {
  std::uint64_t mask = 0;
  int sign = 0;
};
DeterminantImage determinant_image(const Excitation& exc, std::uint64_t ref_mask);

/// Irrep of a determinant: XOR over occupied-orbital labels.
Irrep determinant_irrep(std::uint64_t mask, std::span<const Irrep> so_irrep);

/// Singlet-adapted single and double substitution generators over spatial
/// orbitals: occupied [0, n_occ_spatial), virtual [n_occ_spatial,
/// n_occ_spatial + n_virt_spatial). Each element commutes with total Sz and
/// preserves <S^2>=0 on a closed-shell reference when exponentiated as
/// exp(theta (T - T†)).
std::vector<FermionSum> spin_adapted_pool(int n_occ_spatial, int n_virt_spatial);

/// Plain spin-orbital singles+doubles pool (one ladder string per element).
std::vector<FermionSum> spin_orbital_sd_pool(int n_occ_so, int n_virt_so);

/// Common spatial irrep of all strings in the sum. Throws if the strings do
/// not share one (a symmetry-adapted operator always does).
Irrep fermion_sum_irrep(const FermionSum& op, std::span<const Irrep> so_irrep);

/// Total-spin operator S^2 over n_spatial orbitals (spin-orbital interleaved).
FermionSum spin_squared_op(int n_spatial);

/// Total number operator (handy for sanity checks).
FermionSum number_op(int n_so);

}  // namespace qeomx
