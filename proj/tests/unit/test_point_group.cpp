#include <doctest.h>

#include <stdexcept>

#include "qeomx/point_group.hpp"

using namespace qeomx;

TEST_CASE("irrep product is XOR with identity 0") {
  CHECK(irrep_product(0, 5) == 5);
  CHECK(irrep_product(3, 3) == 0);
  CHECK(irrep_product(1, 2) == 3);
}

TEST_CASE("d2h names, order and molpro mapping") {
  auto g = PointGroup::from_name("d2h");
  CHECK(g.order() == 8);
  CHECK(g.irrep_name(0) == "Ag");
  CHECK(g.irrep_by_name("B1u") == 5);
  // Molpro order: Ag B3u B2u B1g B1u B2g B3g Au
  CHECK(g.irrep_from_molpro(1) == g.irrep_by_name("Ag"));
  CHECK(g.irrep_from_molpro(2) == g.irrep_by_name("B3u"));
  CHECK(g.irrep_from_molpro(4) == g.irrep_by_name("B1g"));
  CHECK(g.molpro_index(g.irrep_by_name("Au")) == 8);
  // product table consistency: B1g x B2g = B3g, B1u x B2u = B3g, Au x B1g = B1u
  CHECK(irrep_product(g.irrep_by_name("B1g"), g.irrep_by_name("B2g")) == g.irrep_by_name("B3g"));
  CHECK(irrep_product(g.irrep_by_name("B1u"), g.irrep_by_name("B2u")) == g.irrep_by_name("B3g"));
  CHECK(irrep_product(g.irrep_by_name("Au"), g.irrep_by_name("B1g")) == g.irrep_by_name("B1u"));
}

TEST_CASE("molpro numbering is XOR-consistent for every group") {
  for (const char* name : {"d2h", "c2v", "c2h", "d2", "c2", "cs", "ci", "c1"}) {
    auto g = PointGroup::from_name(name);
    for (int a = 1; a <= static_cast<int>(g.order()); ++a) {
      for (int b = 1; b <= static_cast<int>(g.order()); ++b) {
        Irrep prod = irrep_product(g.irrep_from_molpro(a), g.irrep_from_molpro(b));
        // Molpro convention: product of ORBSYM a and b is ((a-1)^(b-1))+1
        CHECK(g.irrep_from_molpro(((a - 1) ^ (b - 1)) + 1) == prod);
      }
    }
  }
}

TEST_CASE("character tables multiply like the labels") {
  for (const char* name : {"d2h", "c2v", "c2h", "d2"}) {
    auto g = PointGroup::from_name(name);
    for (Irrep a = 0; a < g.order(); ++a) {
      for (Irrep b = 0; b < g.order(); ++b) {
        Irrep ab = irrep_product(a, b);
        for (std::size_t op = 0; op < g.operations().size(); ++op) {
          CHECK(g.character(a, op) * g.character(b, op) == g.character(ab, op));
        }
      }
    }
  }
}

TEST_CASE("unknown group and bad labels throw") {
  CHECK_THROWS_AS(PointGroup::from_name("d6h"), std::invalid_argument);
  auto g = PointGroup::from_name("c2v");
  CHECK_THROWS_AS(g.irrep_name(4), std::invalid_argument);
  CHECK_THROWS_AS(g.irrep_by_name("B1g"), std::invalid_argument);
  CHECK_THROWS_AS(g.irrep_from_molpro(5), std::invalid_argument);
}
