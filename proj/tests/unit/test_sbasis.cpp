#include <doctest.h>

#include <cmath>

#include "qeomx/errors.hpp"
#include "qeomx/sbasis.hpp"

using namespace qeomx;

namespace {

SOrbitalBasis single_h(double alpha) {
  SOrbitalBasis b;
  b.atoms.push_back({1.0, {0.0, 0.0, 0.0}, {{{alpha, 1.0}}}});
  return b;
}

SOrbitalBasis h4_rectangle(double a, double b) {
  // D2h rectangle in the xy plane
  SOrbitalBasis basis;
  auto con = default_hydrogen_contraction();
  for (double sx : {+1.0, -1.0})
    for (double sy : {+1.0, -1.0})
      basis.atoms.push_back({1.0, {sx * a / 2, sy * b / 2, 0.0}, {con}});
  return basis;
}

}  // namespace

TEST_CASE("normalized primitive overlaps to one with itself") {
  AoIntegrals ao = compute_ao_integrals(single_h(0.8));
  CHECK(ao.overlap(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  AoIntegrals ao2 = compute_ao_integrals(single_h(4.5));
  CHECK(ao2.overlap(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("contracted function is renormalized") {
  SOrbitalBasis b;
  b.atoms.push_back({1.0, {0.0, 0.0, 0.0}, {default_hydrogen_contraction()}});
  AoIntegrals ao = compute_ao_integrals(b);
  CHECK(ao.overlap(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hydrogen atom energy is sane in the model contraction") {
  SOrbitalBasis b;
  b.atoms.push_back({1.0, {0.0, 0.0, 0.0}, {default_hydrogen_contraction()}});
  AoIntegrals ao = compute_ao_integrals(b);
  // variational: above the exact -0.5, below the crude single-zeta -0.42
  double e = ao.hcore(0, 0);
  CHECK(e < -0.45);
  CHECK(e > -0.5);
}

TEST_CASE("integrals are invariant under global translation") {
  SOrbitalBasis a = h2_molecule(1.5);
  SOrbitalBasis b = a;
  for (auto& atom : b.atoms) {
    atom.position[0] += 3.7;
    atom.position[1] -= 1.2;
    atom.position[2] += 0.4;
  }
  IntegralSet ia = build_s_integrals(a);
  IntegralSet ib = build_s_integrals(b);
  CHECK(ia.e_nuclear == doctest::Approx(ib.e_nuclear).epsilon(1e-12));
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q) {
      CHECK(ia.h(p, q) == doctest::Approx(ib.h(p, q)).epsilon(1e-12));
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < 2; ++s)
          CHECK(ia.g2(p, q, r, s) == doctest::Approx(ib.g2(p, q, r, s)).epsilon(1e-12));
    }
}

TEST_CASE("geometry and basis errors") {
  SOrbitalBasis b = h2_molecule(0.0);  // coincident
  CHECK_THROWS_AS(nuclear_repulsion(b), std::invalid_argument);
  SOrbitalBasis bad;
  bad.atoms.push_back({1.0, {0, 0, 0}, {{{-0.5, 1.0}}}});
  CHECK_THROWS_AS(compute_ao_integrals(bad), std::invalid_argument);
  SOrbitalBasis none;
  CHECK_THROWS_AS(compute_ao_integrals(none), std::invalid_argument);
}

TEST_CASE("h8 layout gives eight functions") {
  std::string layout =
      "1  2.414213562373095  1.0 0.0    1 0 0\n"
      "1  2.414213562373095 -1.0 0.0    1 0 0\n"
      "1 -2.414213562373095  1.0 0.0   -1 0 0\n"
      "1 -2.414213562373095 -1.0 0.0   -1 0 0\n"
      "1  1.0  2.414213562373095 0.0    0 0 0\n"
      "1 -1.0  2.414213562373095 0.0    0 0 0\n"
      "1  1.0 -2.414213562373095 0.0    0 0 0\n"
      "1 -1.0 -2.414213562373095 0.0    0 0 0\n";
  SOrbitalBasis b = parse_layout(layout, 0.4, default_hydrogen_contraction());
  CHECK(b.atoms.size() == 8);
  CHECK(b.n_functions() == 8);
  CHECK(b.n_electrons() == 8);
  // displacement applied along +-x only
  CHECK(b.atoms[0].position[0] == doctest::Approx(2.814213562373095));
  CHECK(b.atoms[2].position[0] == doctest::Approx(-2.814213562373095));
  CHECK(b.atoms[4].position[0] == doctest::Approx(1.0));
}

TEST_CASE("rhf on h2 converges and sits above the variational floor") {
  ScfResult scf = run_rhf(h2_molecule(1.5));
  CHECK(scf.converged);
  CHECK(scf.energy < -1.0);
  CHECK(scf.energy > -1.2);
  CHECK(scf.mo_energy.size() == 2);
  CHECK(scf.mo_energy[0] < scf.mo_energy[1]);
}

TEST_CASE("h2 molecular orbitals carry sigma-g / sigma-u labels") {
  auto group = PointGroup::from_name("d2h");
  ScfSystem sys = scf_system(h2_molecule(1.5), group);
  REQUIRE(sys.ints.orb_irrep.size() == 2);
  CHECK(sys.ints.orb_irrep[0] == group.irrep_by_name("Ag"));
  CHECK(sys.ints.orb_irrep[1] == group.irrep_by_name("B1u"));
  CHECK(sys.scf_converged);
}

TEST_CASE("h4 rectangle is d2h-labelable and energy-ordered") {
  auto group = PointGroup::from_name("d2h");
  ScfSystem sys = scf_system(h4_rectangle(2.0, 3.0), group);
  REQUIRE(sys.ints.orb_irrep.size() == 4);
  for (Irrep label : sys.ints.orb_irrep) CHECK(group.valid_label(label));
  // a rectangle of s functions spans Ag + B3u + B2u + B1g
  std::vector<int> hist(8, 0);
  for (Irrep label : sys.ints.orb_irrep) hist[label]++;
  CHECK(hist[group.irrep_by_name("Ag")] == 1);
  CHECK(hist[group.irrep_by_name("B3u")] == 1);
  CHECK(hist[group.irrep_by_name("B2u")] == 1);
  CHECK(hist[group.irrep_by_name("B1g")] == 1);
}

TEST_CASE("asymmetric geometry rejects the declared group") {
  SOrbitalBasis b;
  auto con = default_hydrogen_contraction();
  b.atoms.push_back({1.0, {0.0, 0.0, 0.0}, {con}});
  b.atoms.push_back({1.0, {0.0, 0.0, 1.0}, {con}});
  b.atoms.push_back({1.0, {0.0, 0.7, 2.0}, {con}});
  CHECK_THROWS_AS(scf_system(b, PointGroup::from_name("d2h")), std::invalid_argument);
}

TEST_CASE("supplied rotation must be S-orthonormal") {
  SOrbitalBasis b = h2_molecule(1.5);
  RealMatrix bad(2, 2);
  bad(0, 0) = bad(1, 1) = 1.0;  // raw AOs are not orthonormal
  CHECK_THROWS_AS(build_s_integrals(b, bad), ContractViolation);
}
