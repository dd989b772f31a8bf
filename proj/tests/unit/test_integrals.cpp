#include <doctest.h>

#include <cmath>
#include <random>

#include "qeomx/errors.hpp"
#include "qeomx/integrals.hpp"

using namespace qeomx;

namespace {

IntegralSet random_integrals(std::size_t n, unsigned seed, const PointGroup& g,
                             const std::vector<Irrep>& labels) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  IntegralSet ints(n, g);
  ints.n_electrons = 2;
  ints.orb_irrep = labels;
  ints.e_nuclear = dist(rng);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) ints.set_h(p, q, dist(rng));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          ints.set_g2(p, q, r, s, dist(rng));
        }
  return ints;
}

}  // namespace

TEST_CASE("header and record field mapping") {
  std::string text =
      "&FCI NORB=2,NELEC=2,MS2=0,\n"
      " ORBSYM=1,1,\n"
      " ISYM=1,\n"
      "&END\n"
      "0.5 1 1 1 1\n"
      "-1.25 1 1 0 0\n"
      "0.7 0 0 0 0\n";
  IntegralSet ints = parse_fcidump(text);
  CHECK(ints.n_spatial == 2);
  CHECK(ints.n_electrons == 2);
  CHECK(ints.g2(0, 0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ints.h(0, 0) == doctest::Approx(-1.25).epsilon(1e-14));
  CHECK(ints.e_nuclear == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("one record fills all eight ERI permutations") {
  std::string text =
      "&FCI NORB=2,NELEC=2,MS2=0, ORBSYM=1,1, ISYM=1, &END\n"
      "0.3 1 2 1 2\n";
  IntegralSet ints = parse_fcidump(text);
  for (auto [p, q, r, s] : {std::array<std::size_t, 4>{0, 1, 0, 1},
                            std::array<std::size_t, 4>{1, 0, 0, 1},
                            std::array<std::size_t, 4>{0, 1, 1, 0},
                            std::array<std::size_t, 4>{1, 0, 1, 0}}) {
    CHECK(ints.g2(p, q, r, s) == doctest::Approx(0.3).epsilon(1e-14));
  }
}

TEST_CASE("round-trip emit/parse is the identity on random integral sets") {
  auto g = PointGroup::from_name("c2v");
  for (unsigned seed : {7u, 21u, 1234u}) {
    auto labels = std::vector<Irrep>{0, 2, 3, 1};
    IntegralSet a = random_integrals(4, seed, g, labels);
    IntegralSet b = parse_fcidump(emit_fcidump(a), g);
    REQUIRE(b.n_spatial == a.n_spatial);
    CHECK(b.n_electrons == a.n_electrons);
    CHECK(b.e_nuclear == doctest::Approx(a.e_nuclear).epsilon(1e-12));
    for (std::size_t p = 0; p < 4; ++p) {
      CHECK(b.orb_irrep[p] == a.orb_irrep[p]);
      for (std::size_t q = 0; q < 4; ++q) {
        CHECK(b.h(p, q) == doctest::Approx(a.h(p, q)).epsilon(1e-12));
        for (std::size_t r = 0; r < 4; ++r)
          for (std::size_t s = 0; s < 4; ++s)
            CHECK(b.g2(p, q, r, s) == doctest::Approx(a.g2(p, q, r, s)).epsilon(1e-12));
      }
    }
    b.validate();
  }
}

TEST_CASE("stored ERI symmetry is exact") {
  auto g = PointGroup::from_name("c1");
  IntegralSet ints = random_integrals(3, 99, g, {0, 0, 0});
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q)
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 3; ++s) {
          CHECK(ints.g2(p, q, r, s) == ints.g2(q, p, r, s));
          CHECK(ints.g2(p, q, r, s) == ints.g2(p, q, s, r));
          CHECK(ints.g2(p, q, r, s) == ints.g2(r, s, p, q));
        }
  CHECK_NOTHROW(ints.validate());
}

TEST_CASE("malformed header names the problem") {
  CHECK_THROWS_AS(parse_fcidump("NORB=2\n0.5 1 1 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NORB=2,NELEC=2\n0.5 1 1 1 1\n"), ParseError);  // no &END
  CHECK_THROWS_AS(parse_fcidump("&FCI NELEC=2, &END\n"), ParseError);                // no NORB
}

TEST_CASE("indices outside [1, NORB] raise a bounds error") {
  std::string text = "&FCI NORB=2,NELEC=2, &END\n0.5 3 1 1 1\n";
  CHECK_THROWS_AS(parse_fcidump(text), std::out_of_range);
}

TEST_CASE("conflicting duplicate records raise a consistency error") {
  std::string ok =
      "&FCI NORB=2,NELEC=2, &END\n"
      "0.5 1 2 1 2\n"
      "0.5 2 1 2 1\n";  // same value through a permutation: fine
  CHECK_NOTHROW(parse_fcidump(ok));
  std::string bad =
      "&FCI NORB=2,NELEC=2, &END\n"
      "0.5 1 2 1 2\n"
      "0.5000001 2 1 2 1\n";
  CHECK_THROWS_AS(parse_fcidump(bad), ContractViolation);
}

TEST_CASE("fortran D exponents parse") {
  IntegralSet ints = parse_fcidump("&FCI NORB=1,NELEC=2, &END\n1.5D-2 1 1 0 0\n");
  CHECK(ints.h(0, 0) == doctest::Approx(0.015).epsilon(1e-14));
}

TEST_CASE("point group inferred from the largest ORBSYM") {
  IntegralSet a = parse_fcidump("&FCI NORB=2,NELEC=2, ORBSYM=1,1, &END\n");
  CHECK(a.group.name() == "c1");
  IntegralSet b = parse_fcidump("&FCI NORB=2,NELEC=2, ORBSYM=1,4, &END\n");
  CHECK(b.group.name() == "c2v");
  IntegralSet c = parse_fcidump("&FCI NORB=2,NELEC=2, ORBSYM=1,8, &END\n");
  CHECK(c.group.name() == "d2h");
}

#include "qeomx/hamiltonian.hpp"

TEST_CASE("assembly with nothing frozen is the identity on integral content") {
  auto g = PointGroup::from_name("c1");
  IntegralSet ints = random_integrals(3, 5, g, {0, 0, 0});
  ints.n_electrons = 4;
  MolecularHamiltonian mh = assemble_hamiltonian(ints);
  CHECK(mh.n_so == 6);
  CHECK(mh.n_electrons == 4);
  CHECK(mh.constant == doctest::Approx(ints.e_nuclear).epsilon(1e-14));
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      CHECK(mh.h1(2 * p, 2 * q) == doctest::Approx(ints.h(static_cast<std::size_t>(p),
                                                          static_cast<std::size_t>(q))).epsilon(1e-14));
      CHECK(mh.h1(2 * p + 1, 2 * q + 1) == mh.h1(2 * p, 2 * q));
      CHECK(mh.h1(2 * p, 2 * q + 1) == 0.0);  // no spin mixing
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) {
          CHECK(mh.g2(2 * p, 2 * q, 2 * r + 1, 2 * s + 1) ==
                doctest::Approx(ints.g2(static_cast<std::size_t>(p), static_cast<std::size_t>(q),
                                        static_cast<std::size_t>(r), static_cast<std::size_t>(s)))
                    .epsilon(1e-14));
        }
    }
}

TEST_CASE("freezing the lowest orbital of an 11-orbital 10-electron system") {
  auto g = PointGroup::from_name("c2v");
  IntegralSet ints(11, g);
  ints.n_electrons = 10;
  for (std::size_t p = 0; p < 11; ++p) ints.set_h(p, p, -2.0 + 0.1 * static_cast<double>(p));
  MolecularHamiltonian mh = assemble_hamiltonian(ints, {0});
  CHECK(mh.n_so == 20);           // 10 active spatial orbitals
  CHECK(mh.n_electrons == 8);     // two electrons folded away
  // frozen-core energy for a diagonal one-electron-only freeze: 2 h_00
  CHECK(mh.constant == doctest::Approx(2.0 * ints.h(0, 0)).epsilon(1e-12));
}

TEST_CASE("invalid freezes are rejected") {
  auto g = PointGroup::from_name("c1");
  IntegralSet ints(4, g);
  ints.n_electrons = 4;  // orbitals 0,1 doubly occupied
  CHECK_THROWS_AS(assemble_hamiltonian(ints, {2}), std::invalid_argument);   // not occupied
  CHECK_THROWS_AS(assemble_hamiltonian(ints, {0, 0}), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(assemble_hamiltonian(ints, {0}, std::vector<int>{0, 1, 2}),
                  std::invalid_argument);  // frozen and active overlap
  CHECK_THROWS_AS(assemble_hamiltonian(ints, {}, std::vector<int>{0, 2, 3}),
                  std::invalid_argument);  // occupied orbital 1 unaccounted
}

TEST_CASE("frozen-core folding matches the explicit mean-field formula") {
  auto g = PointGroup::from_name("c1");
  IntegralSet ints = random_integrals(4, 17, g, {0, 0, 0, 0});
  ints.n_electrons = 4;
  MolecularHamiltonian mh = assemble_hamiltonian(ints, {0});
  double e_frozen = 2.0 * ints.h(0, 0) + 2.0 * ints.g2(0, 0, 0, 0) - ints.g2(0, 0, 0, 0);
  CHECK(mh.constant == doctest::Approx(ints.e_nuclear + e_frozen).epsilon(1e-12));
  // active orbital 1 becomes index 0; check its dressed one-body element
  double f11 = ints.h(1, 1) + 2.0 * ints.g2(1, 1, 0, 0) - ints.g2(1, 0, 0, 1);
  CHECK(mh.h1(0, 0) == doctest::Approx(f11).epsilon(1e-12));
}
