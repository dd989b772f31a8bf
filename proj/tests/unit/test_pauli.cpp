#include <doctest.h>

#include <complex>

#include <stdexcept>

#include "qeomx/pauli.hpp"

using namespace qeomx;
using namespace std::complex_literals;

namespace {

FermionSum creation(int p) {
  FermionSum f;
  f.add_normal_term(1.0, std::array{p}, std::span<const int>{});
  return f;
}

FermionSum annihilation(int p) {
  FermionSum f;
  f.add_normal_term(1.0, std::span<const int>{}, std::array{p});
  return f;
}

}  // namespace

TEST_CASE("single-mode creation maps to (X - iY)/2") {
  PauliSum p = jordan_wigner(creation(0), 1);
  auto named = p.named_terms();
  REQUIRE(named.size() == 2);
  for (const auto& [coeff, s] : named) {
    if (s == "X") CHECK(std::abs(coeff - 0.5) < 1e-14);
    else if (s == "Y") CHECK(std::abs(coeff - (-0.5i)) < 1e-14);
    else FAIL("unexpected string ", s);
  }
}

TEST_CASE("jordan-wigner carries the Z string on lower modes") {
  PauliSum p = jordan_wigner(creation(2), 3);
  for (const auto& [coeff, s] : p.named_terms()) {
    CHECK(s[0] == 'Z');
    CHECK(s[1] == 'Z');
    CHECK((s[2] == 'X' || s[2] == 'Y'));
  }
}

TEST_CASE("anticommutators reduce to the identity or zero on five modes") {
  const int n = 5;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      PauliSum ap = jordan_wigner(annihilation(p), n);
      PauliSum aq = jordan_wigner(annihilation(q), n);
      PauliSum adq = jordan_wigner(creation(q), n);
      PauliSum anti1 = ap * aq + aq * ap;
      CHECK(anti1.distance_to_identity(0.0) < 1e-14);  // {a_p, a_q} = 0
      PauliSum anti2 = ap * adq + adq * ap;
      CHECK(anti2.distance_to_identity(p == q ? 1.0 : 0.0) < 1e-14);
    }
  }
}

TEST_CASE("index at or above the register throws") {
  CHECK_THROWS_AS(jordan_wigner(creation(3), 3), std::out_of_range);
}

TEST_CASE("number operator image is (I - Z)/2") {
  FermionSum n0;
  n0.add_normal_term(1.0, std::array{0}, std::array{0});
  auto named = jordan_wigner(n0, 1).named_terms();
  REQUIRE(named.size() == 2);
  for (const auto& [coeff, s] : named) {
    if (s == "I") CHECK(std::abs(coeff - 0.5) < 1e-14);
    else if (s == "Z") CHECK(std::abs(coeff + 0.5) < 1e-14);
    else FAIL("unexpected string ", s);
  }
}

TEST_CASE("hermiticity and anti-hermiticity checks") {
  FermionSum t;
  t.add_normal_term(1.0, std::array{2}, std::array{0});
  FermionSum tau = t;
  tau -= t.adjoint();
  PauliSum h = jordan_wigner(t, 3) + jordan_wigner(t.adjoint(), 3);
  CHECK(h.is_hermitian(1e-12));
  CHECK_FALSE(h.is_anti_hermitian(1e-12));
  PauliSum a = jordan_wigner(tau, 3);
  CHECK(a.is_anti_hermitian(1e-12));
  CHECK_FALSE(a.is_hermitian(1e-12));
}

TEST_CASE("adjoint conjugates coefficients and fixes Y signs") {
  PauliSum p(2);
  p.add_named_term(1.0 + 2.0i, "XY");
  PauliSum pd = p.adjoint();
  auto named = pd.named_terms();
  REQUIRE(named.size() == 1);
  CHECK(named[0].second == "XY");
  CHECK(std::abs(named[0].first - (1.0 - 2.0i)) < 1e-14);
}

TEST_CASE("named round trip through the symplectic storage") {
  PauliSum p(3);
  p.add_named_term(0.25 - 0.5i, "YZX");
  auto named = p.named_terms();
  REQUIRE(named.size() == 1);
  CHECK(named[0].second == "YZX");
  CHECK(std::abs(named[0].first - (0.25 - 0.5i)) < 1e-13);
}

TEST_CASE("simplify merges strings and prunes tiny coefficients") {
  PauliSum p(1);
  p.add_named_term(0.5, "X");
  p.add_named_term(0.5, "X");
  p.add_named_term(1e-16, "Z");
  p.simplify();
  REQUIRE(p.size() == 1);
  CHECK(std::abs(p.named_terms()[0].first - 1.0) < 1e-14);
}
