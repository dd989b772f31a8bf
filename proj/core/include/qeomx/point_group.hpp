#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qeomx {

/// Irreducible representation label of an Abelian point group (D2h or a
/// subgroup). Labels compose under XOR and 0 is the totally symmetric irrep.
using Irrep = std::uint8_t;

inline constexpr Irrep kTotallySymmetric = 0;

inline Irrep irrep_product(Irrep a, Irrep b) { return static_cast<Irrep>(a ^ b); }

/// Abelian point group descriptor: irrep names, the Molpro ORBSYM numbering
/// used by FCIDUMP files, and the symmetry operations (as diagonal sign
/// matrices, valid for axis-aligned molecules) with their character table.
class PointGroup {
 public:
  PointGroup();  // c1
  static PointGroup from_name(std::string_view name);  // d2h c2v c2h d2 c2 cs ci c1

  const std::string& name() const { return name_; }
  std::size_t order() const { return irrep_names_.size(); }

  std::string_view irrep_name(Irrep label) const;
  Irrep irrep_by_name(std::string_view name) const;
  bool valid_label(Irrep label) const { return label < order(); }

  /// Molpro ORBSYM value (1-based) <-> internal XOR label.
  Irrep irrep_from_molpro(int orbsym) const;
  int molpro_index(Irrep label) const;

  /// Symmetry operations as diagonal 3x3 sign matrices (x,y,z signs),
  /// first entry is always the identity.
  const std::vector<std::array<int, 3>>& operations() const { return ops_; }
  /// Character of `label` under operation `op` (+1 or -1).
  int character(Irrep label, std::size_t op) const;

 private:
  std::string name_;
  std::vector<std::string> irrep_names_;    // indexed by internal label
  std::vector<Irrep> molpro_to_internal_;   // indexed by ORBSYM-1
  std::vector<std::array<int, 3>> ops_;
  std::vector<std::vector<int>> characters_;  // [label][op]
};

}  // namespace qeomx
