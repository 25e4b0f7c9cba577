#include <vector>

#include "doctest.h"
#include "starklab/fields.hpp"

using namespace starklab;

namespace {

// Units mod f whose reduction mod m lies in `allowed`.
std::vector<long> units_reducing_to(long f, long m, const std::vector<long>& allowed) {
  std::vector<long> out;
  for (long a = 1; a < f; ++a) {
    if (gcd_l(a, f) != 1) continue;
    for (long b : allowed)
      if (a % m == b % m) out.push_back(a);
  }
  return out;
}

// K = Q(xi_45) over k = Q(sqrt 5).
FieldSpec q45_over_sqrt5() { return FieldSpec(45, {}, units_reducing_to(45, 5, {1, 4})); }

}  // namespace

TEST_CASE("conductor examples") {
  CHECK(conductor(FieldSpec(12, unit_group_generators(12))) == 1);
  CHECK(conductor(FieldSpec(9)) == 9);
  CHECK(conductor(FieldSpec(9, {8})) == 9);
  CHECK(conductor(FieldSpec(15, {4})) == 15);
  CHECK(conductor(FieldSpec(20, {11})) == 5);   // Q(xi_20)^{<11>} = Q(xi_5)
  CHECK(conductor(FieldSpec(36, {13})) == 12);  // H = {1, 13, 25} is the kernel mod 12
}

TEST_CASE("conductor is idempotent") {
  for (long f : {12L, 15L, 20L, 21L, 36L, 45L}) {
    for (long h : {1L, 11L, 19L, 29L}) {
      if (gcd_l(h, f) != 1) continue;
      FieldSpec K(f, {h});
      long f0 = conductor(K);
      FieldSpec K0(f0, unit_subgroup(f0, [&] {
                     std::vector<long> r;
                     for (long a : K.H()) r.push_back(a % f0);
                     return r;
                   }()));
      CHECK(conductor(K0) == f0);
      CHECK(K0.Gamma()->order() == K.Gamma()->order());
    }
  }
}

TEST_CASE("frobenius examples") {
  FieldSpec K7(7);
  int s2 = frobenius(K7, 2);
  CHECK(K7.Gamma()->rep(s2) == 2);
  CHECK(K7.Gamma()->element_order(s2) == 3);
  CHECK(frobenius(K7, 29) == 0);
  CHECK(frobenius(K7, 13) == *K7.Gamma()->complex_conjugation());
  CHECK_THROWS_AS(frobenius(K7, 7), StarkError);
  // q dividing f but unramified in K: Q(xi_20)^{<11>} = Q(xi_5), q = 2
  FieldSpec K20(20, {11});
  CHECK(K20.Gamma()->element_order(frobenius(K20, 2)) == 4);
}

TEST_CASE("inertia and decomposition groups") {
  {
    FieldSpec K(9);
    auto [T, D] = inertia_decomposition(K, 3);
    CHECK(T.size() == 6);
    CHECK(D.size() == 6);
  }
  {
    FieldSpec K(45);
    auto [T, D] = inertia_decomposition(K, 3);
    CHECK(T.size() == 6);
    // 3 mod 5 has order 4, so D = T x <frob> of order 24
    CHECK(D.size() == 24);
  }
  {
    FieldSpec K(7);
    auto [T, D] = inertia_decomposition(K, 2);
    CHECK(T.size() == 1);
    CHECK(D.size() == 3);
  }
}

TEST_CASE("e f g bookkeeping") {
  for (long f : {7L, 9L, 12L, 15L, 21L, 45L, 63L}) {
    FieldSpec K(f);
    for (long q : {2L, 3L, 5L, 7L, 11L, 13L}) {
      auto [T, D] = inertia_decomposition(K, q);
      const auto& Gam = K.Gamma();
      long g = Gam->order() / static_cast<long>(D.size());
      long res_deg = static_cast<long>(D.size() / T.size());
      CHECK(static_cast<long>(T.size()) * res_deg * g == Gam->order());
      CHECK(primes_of_k_above(K, q) == 1);
    }
  }
}

TEST_CASE("frobenius over a real quadratic base") {
  FieldSpec K = q45_over_sqrt5();
  CHECK(K.degree_k() == 2);
  CHECK(K.G()->order() == 12);
  CHECK(K.is_CM());
  // 2 is inert in Q(sqrt 5): the Frobenius in G is the class of 4
  CHECK(primes_of_k_above(K, 2) == 1);
  CHECK(K.G()->rep(frobenius_k(K, 2)) == 4);
  // 11 splits in Q(sqrt 5)
  CHECK(primes_of_k_above(K, 11) == 2);
  CHECK(K.G()->rep(frobenius_k(K, 11)) == 11);
  CHECK(ramified_in_K_over_k(K) == std::set<long>{3, 5});
  // 5 ramifies in k, 3 does not
  PlaceSet S;
  S.primes = {3};
  CHECK(bad_primes(K, S) == std::set<long>{5});
  CHECK(bad_primes(K, S.with(5)).empty());
}

TEST_CASE("CM detection") {
  CHECK(FieldSpec(7).is_CM());
  CHECK_FALSE(FieldSpec(7, {6}).is_CM());
  CHECK_THROWS_AS(FieldSpec(7, {6}).Gbar(), StarkError);
  CHECK(FieldSpec(7, {2}).is_CM());  // Q(sqrt -7)
  CHECK(FieldSpec(9).Gbar()->order() == 3);
}

TEST_CASE("r_S examples") {
  FieldSpec K(7);
  auto Gb = K.Gbar();
  PlaceSet S;
  S.primes = {7};
  for (const auto& phi : Character::all(Gb)) {
    // D_7 is all of Gbar, so every nontrivial phi has r_S = 1
    CHECK(r_S(K, S, phi) == 1);
  }
  // 13 = -1 mod 7 splits completely in K^+
  PlaceSet S2 = S.with(13);
  for (const auto& phi : Character::all(Gb)) CHECK(r_S(K, S2, phi) == 2);
  // 2 has Frobenius of order 3 in Gbar = Z/3; nontrivial phi are nontrivial on it
  PlaceSet S3 = S.with(2);
  for (const auto& phi : Character::all(Gb)) CHECK(r_S(K, S3, phi) == (phi.is_trivial() ? 2 : 1));
}

TEST_CASE("eigen_idempotent examples") {
  // |S| = d + 1 and Gbar = D_q of order 2: e = 1
  FieldSpec K5(5);
  PlaceSet S;
  S.primes = {5};
  auto e = eigen_idempotent(K5, S);
  CHECK(e == GroupRingElem<Rational>::one(K5.Gbar(), Rational(0)));
  // a totally split prime in a larger S kills everything
  auto e2 = eigen_idempotent(K5, S.with(11));
  CHECK(e2.is_zero());
  PlaceSet none;
  CHECK_THROWS_AS(eigen_idempotent(K5, none), StarkError);
}

TEST_CASE("eigen_idempotent agrees with r_S exhaustively") {
  std::vector<FieldSpec> fields;
  for (long f : {3L, 4L, 5L, 7L, 8L, 9L, 11L, 12L, 13L, 15L, 16L, 20L, 21L, 24L, 28L, 35L, 36L, 39L, 45L})
    if (euler_phi(f) / 2 <= 24) fields.emplace_back(f);
  fields.emplace_back(21, std::vector<long>{4});
  fields.push_back(q45_over_sqrt5());
  const std::vector<long> extras = {2, 3, 5, 7, 11, 13, 29};
  for (const auto& K : fields) {
    auto Gb = K.Gbar();
    const long d = K.degree_k();
    PlaceSet base = minimal_place_set(K);
    std::vector<PlaceSet> sets{base};
    for (long q : extras) sets.push_back(base.with(q));
    sets.push_back(base.with(2).with(13));
    for (const auto& S : sets) {
      if (S.primes.empty()) continue;
      auto e = eigen_idempotent(K, S);
      CHECK(e * e == e);
      for (const auto& phi : Character::all(Gb)) {
        auto v = apply_character(phi, e);
        REQUIRE(v.is_rational());
        Rational expect = r_S(K, S, phi) == d ? 1 : 0;
        CHECK(v.rational_value() == expect);
      }
    }
  }
}
