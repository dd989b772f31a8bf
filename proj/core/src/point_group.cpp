#include "qeomx/point_group.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace qeomx {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Diagonal sign matrices. The eight together form D2h for an axis-aligned
// molecule; subgroups pick subsets.
constexpr std::array<int, 3> kE{+1, +1, +1};
constexpr std::array<int, 3> kC2z{-1, -1, +1};
constexpr std::array<int, 3> kC2y{-1, +1, -1};
constexpr std::array<int, 3> kC2x{+1, -1, -1};
constexpr std::array<int, 3> kInv{-1, -1, -1};
constexpr std::array<int, 3> kSxy{+1, +1, -1};
constexpr std::array<int, 3> kSxz{+1, -1, +1};
constexpr std::array<int, 3> kSyz{-1, +1, +1};

}  // namespace

PointGroup::PointGroup() {
  name_ = "c1";
  irrep_names_ = {"A"};
  molpro_to_internal_ = {0};
  ops_ = {kE};
  characters_ = {{+1}};
}

PointGroup PointGroup::from_name(std::string_view name) {
  PointGroup g;
  g.name_ = lower(name);
  if (g.name_ == "d2h") {
    g.irrep_names_ = {"Ag", "B1g", "B2g", "B3g", "Au", "B1u", "B2u", "B3u"};
    // Molpro order: Ag B3u B2u B1g B1u B2g B3g Au
    g.molpro_to_internal_ = {0, 7, 6, 1, 5, 2, 3, 4};
    g.ops_ = {kE, kC2z, kC2y, kC2x, kInv, kSxy, kSxz, kSyz};
    g.characters_ = {
        {+1, +1, +1, +1, +1, +1, +1, +1},   // Ag
        {+1, +1, -1, -1, +1, +1, -1, -1},   // B1g
        {+1, -1, +1, -1, +1, -1, +1, -1},   // B2g
        {+1, -1, -1, +1, +1, -1, -1, +1},   // B3g
        {+1, +1, +1, +1, -1, -1, -1, -1},   // Au
        {+1, +1, -1, -1, -1, -1, +1, +1},   // B1u
        {+1, -1, +1, -1, -1, +1, -1, +1},   // B2u
        {+1, -1, -1, +1, -1, +1, +1, -1},   // B3u
    };
  } else if (g.name_ == "c2v") {
    g.irrep_names_ = {"A1", "A2", "B1", "B2"};
    // Molpro order: A1 B1 B2 A2
    g.molpro_to_internal_ = {0, 2, 3, 1};
    g.ops_ = {kE, kC2z, kSxz, kSyz};
    g.characters_ = {
        {+1, +1, +1, +1},
        {+1, +1, -1, -1},
        {+1, -1, +1, -1},
        {+1, -1, -1, +1},
    };
  } else if (g.name_ == "c2h") {
    g.irrep_names_ = {"Ag", "Bg", "Au", "Bu"};
    // Molpro order: Ag Au Bu Bg
    g.molpro_to_internal_ = {0, 2, 3, 1};
    g.ops_ = {kE, kC2z, kInv, kSxy};
    g.characters_ = {
        {+1, +1, +1, +1},
        {+1, -1, +1, -1},
        {+1, +1, -1, -1},
        {+1, -1, -1, +1},
    };
  } else if (g.name_ == "d2") {
    g.irrep_names_ = {"A", "B1", "B2", "B3"};
    // Molpro order: A B3 B2 B1
    g.molpro_to_internal_ = {0, 3, 2, 1};
    g.ops_ = {kE, kC2z, kC2y, kC2x};
    g.characters_ = {
        {+1, +1, +1, +1},
        {+1, +1, -1, -1},
        {+1, -1, +1, -1},
        {+1, -1, -1, +1},
    };
  } else if (g.name_ == "c2") {
    g.irrep_names_ = {"A", "B"};
    g.molpro_to_internal_ = {0, 1};
    g.ops_ = {kE, kC2z};
    g.characters_ = {{+1, +1}, {+1, -1}};
  } else if (g.name_ == "cs") {
    g.irrep_names_ = {"A'", "A''"};
    g.molpro_to_internal_ = {0, 1};
    g.ops_ = {kE, kSxy};
    g.characters_ = {{+1, +1}, {+1, -1}};
  } else if (g.name_ == "ci") {
    g.irrep_names_ = {"Ag", "Au"};
    g.molpro_to_internal_ = {0, 1};
    g.ops_ = {kE, kInv};
    g.characters_ = {{+1, +1}, {+1, -1}};
  } else if (g.name_ == "c1") {
    g.irrep_names_ = {"A"};
    g.molpro_to_internal_ = {0};
    g.ops_ = {kE};
    g.characters_ = {{+1}};
  } else {
    throw std::invalid_argument("unknown point group: " + std::string(name));
  }
  return g;
}

std::string_view PointGroup::irrep_name(Irrep label) const {
  if (!valid_label(label)) throw std::invalid_argument("irrep label out of range for " + name_);
  return irrep_names_[label];
}

Irrep PointGroup::irrep_by_name(std::string_view name) const {
  auto want = lower(name);
  for (std::size_t i = 0; i < irrep_names_.size(); ++i) {
    if (lower(irrep_names_[i]) == want) return static_cast<Irrep>(i);
  }
  throw std::invalid_argument("irrep '" + std::string(name) + "' not in group " + name_);
}

Irrep PointGroup::irrep_from_molpro(int orbsym) const {
  if (orbsym < 1 || static_cast<std::size_t>(orbsym) > molpro_to_internal_.size()) {
    throw std::invalid_argument("ORBSYM value " + std::to_string(orbsym) +
                                " out of range for group " + name_);
  }
  return molpro_to_internal_[static_cast<std::size_t>(orbsym - 1)];
}

int PointGroup::molpro_index(Irrep label) const {
  for (std::size_t i = 0; i < molpro_to_internal_.size(); ++i) {
    if (molpro_to_internal_[i] == label) return static_cast<int>(i + 1);
  }
  throw std::invalid_argument("irrep label out of range for " + name_);
}

int PointGroup::character(Irrep label, std::size_t op) const {
  return characters_.at(label).at(op);
}

}  // namespace qeomx
