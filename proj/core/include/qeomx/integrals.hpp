#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qeomx/point_group.hpp"

namespace qeomx {

/// Spatial-orbital one- and two-electron integrals in chemists' notation
/// (pq|rs), plus nuclear repulsion and per-orbital irrep labels. All values
/// in hartree. The two-electron tensor is stored dense with the full 8-fold
/// permutational symmetry written out.
struct IntegralSet {
  std::size_t n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  PointGroup group;
  std::vector<Irrep> orb_irrep;
  std::vector<double> h_core;  // n_spatial^2, symmetric
  std::vector<double> eri;     // n_spatial^4, chemists (pq|rs)
  double e_nuclear = 0.0;

  IntegralSet() = default;
  IntegralSet(std::size_t n, const PointGroup& g);

  double h(std::size_t p, std::size_t q) const { return h_core[p * n_spatial + q]; }
  void set_h(std::size_t p, std::size_t q, double v);

  double g2(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return eri[((p * n_spatial + q) * n_spatial + r) * n_spatial + s];
  }
  /// Writes (pq|rs) into all eight permutationally equivalent slots.
  void set_g2(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v);

  /// Checks the stored symmetry invariants (h symmetric, 8-fold ERI
  /// symmetry, irrep labels valid). Throws ContractViolation on failure.
  void validate(double tol = 1e-12) const;
};

/// Parses Molpro-convention FCIDUMP text (&FCI ... &END namelist header with
/// NORB, NELEC, MS2, ORBSYM, ISYM followed by `value p q r s` records,
/// 1-based indices). If `group` is not given, the smallest group that covers
/// the largest ORBSYM value is assumed (c1/c2/c2v/d2h).
IntegralSet parse_fcidump(const std::string& text,
                          std::optional<PointGroup> group = std::nullopt);
IntegralSet parse_fcidump_file(const std::string& path,
                               std::optional<PointGroup> group = std::nullopt);

/// Writes the same format with 15-significant-digit values.
std::string emit_fcidump(const IntegralSet& ints);

}  // namespace qeomx
