#include <random>

#include "doctest.h"
#include "starklab/basechange.hpp"
#include "starklab/properties.hpp"
#include "starklab/stark.hpp"

using namespace starklab;

namespace {

CaseParams params(const FieldSpec& K, long p, int n, std::initializer_list<long> extra = {}) {
  CaseParams c;
  c.p = p;
  c.n = n;
  c.S = minimal_place_set(K);
  for (long q : extra) c.S = c.S.with(q);
  return c;
}

// x with a 1 at the class of a.
GroupRingElem<Rational> delta(const GroupPtr& G, long a) {
  GroupRingElem<Rational> x(G, Rational(0));
  x[G->index_of(a)] = Rational(1);
  return x;
}

bool all_zero(const GroupRingElem<LocalElement>& x) {
  for (int g = 0; g < x.size(); ++g)
    if (!x[g].is_zero()) return false;
  return true;
}

bool padic_zero(const PAdicGroupElem& x) { return x.min_valuation() >= x.absolute_precision(); }

// The Q(sqrt 5) subfield of Q(xi_45) and S = {oo, 3, 5}.
FieldSpec base_change_field() { return FieldSpec(45, {}, std::vector<long>{11, 19}); }

}  // namespace

TEST_CASE("determinantal map examples") {
  using M = GroupRingElem<Rational>;
  const GroupPtr G = FieldSpec(7).Gamma();
  const std::function<M(const M&, int)> act = [](const M& m, int h) { return m.translated(h); };
  auto coord = [](int k) { return std::function<Rational(const M&)>([k](const M& m) { return m[k]; }); };
  std::mt19937_64 rng(11);
  auto random_m = [&] {
    M m(G, Rational(0));
    for (int g = 0; g < G->order(); ++g) m[g] = Rational(static_cast<long>(rng() % 11) - 5);
    return m;
  };
  const M m1 = random_m(), m2 = random_m();

  // l = 1: f^H(m) = sum_h f(h^{-1} m) h, with f the coefficient at the identity
  const M one = determinantal_map<M, Rational>({coord(0)}, {m1}, G, act, Rational(0));
  M expect(G, Rational(0));
  for (int h = 0; h < G->order(); ++h) expect[h] = m1.translated(G->inv(h))[0];
  CHECK(one == expect);

  const M d12 = determinantal_map<M, Rational>({coord(0), coord(1)}, {m1, m2}, G, act, Rational(0));
  const M d21 = determinantal_map<M, Rational>({coord(0), coord(1)}, {m2, m1}, G, act, Rational(0));
  CHECK(d12 == -d21);
  CHECK(determinantal_map<M, Rational>({coord(2), coord(2)}, {m1, m2}, G, act, Rational(0)).is_zero());
}

TEST_CASE("regulator examples") {
  SUBCASE("d = 1") {
    const FieldSpec K(9);
    const int N = 12;
    const auto M = SemilocalModel::get(9, 3);
    CHECK(all_zero(regulator(K, {SemilocalElement::one(M, N)}, {1}, N)));
    const SemilocalElement u = sample_minus_unit(K, 3, 5, N);
    const auto R = regulator(K, {u}, {1}, N);
    for (long b : {2L, 4L, 7L}) {
      const auto Rh = regulator(K, {u.galois(b)}, {1}, N);
      CHECK(Rh == R.translated(K.G()->index_of(b)));
    }
  }
  SUBCASE("d = 2, repeated unit") {
    const FieldSpec K = base_change_field();
    const int N = 10;
    const SemilocalElement u = sample_minus_unit(K, 3, 9, N);
    CHECK(all_zero(regulator(K, {u, u}, default_gammas(K), N)));
  }
}

TEST_CASE("s_map examples") {
  const FieldSpec K(9);
  const CaseParams c = params(K, 3, 1);
  const int N = working_precision(K, c);
  const auto M = SemilocalModel::get(9, 3);
  CHECK(padic_zero(s_map(K, c.S, {SemilocalElement::one(M, N)}, N)));

  const SemilocalElement u = sample_minus_unit(K, 3, 21, N);
  const PAdicGroupElem s = s_map(K, c.S, {u}, N);
  for (long g : {2L, 5L}) {
    const PAdicGroupElem sg = s_map(K, c.S, {u.galois(g)}, N);
    const auto moved = padic_times_rational(s, delta(K.G(), g));
    CHECK(padic_agreement(sg, moved) >= 1);
  }
}

TEST_CASE("p-does-not-divide-|G|: K = Q(xi_7), p = 5, 50 samples") {
  const FieldSpec K(7);
  const CaseParams c = params(K, 5, 0, {5});
  std::vector<bool> attained;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const TrialResult r = pndivg_trial(K, c, seed);
    CHECK(r.equal);
    attained.resize(r.lhs.size(), false);
    for (size_t j = 0; j < r.lhs.size(); ++j) {
      CHECK(r.lhs[j] >= r.rhs[j]);
      if (r.lhs[j] == r.rhs[j]) attained[j] = true;
    }
  }
  CHECK(attained.size() == 3);  // the odd characters of (Z/7)^x
  for (bool b : attained) CHECK(b);
}

TEST_CASE("p-does-not-divide-|G| needs p in S") {
  const FieldSpec K(7);
  CHECK_THROWS_AS(pndivg_trial(K, params(K, 5, 0), 1), StarkError);
  const FieldSpec K9(9);
  try {
    pndivg_trial(K9, params(K9, 3, 0, {3}), 1);
    FAIL("p | |G| accepted");
  } catch (const StarkError& e) {
    CHECK(e.kind() == ErrorKind::PDividesGroupOrder);
  }
}

TEST_CASE("integrality examples") {
  for (auto [f, p] : {std::pair{9L, 3L}, std::pair{7L, 5L}}) {
    const FieldSpec K(f);
    const CaseParams c = params(K, p, 0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const TrialResult r = ic_trial(K, c, seed);
      CHECK(r.equal);
      CHECK(r.rhs.at(0) >= 2);
    }
  }
  SUBCASE("a wedge scaled by p is not a unit wedge") {
    const FieldSpec K(9);
    const CaseParams c = params(K, 3, 0);
    const int N = working_precision(K, c);
    const auto M = SemilocalModel::get(9, 3);
    const SemilocalElement u = sample_minus_unit(K, 3, 2, N);
    const SemilocalElement pu = u * SemilocalElement::from_cyclotomic(M, CyclotomicNumber(9, Rational(3)), N);
    try {
      s_map(K, c.S, {pu}, N);
      FAIL("non-unit accepted");
    } catch (const StarkError& e) {
      CHECK(e.kind() == ErrorKind::NotPrincipalUnit);
    }
  }
}

TEST_CASE("coleman_b examples") {
  const long f = 9, p = 3;
  const int N = 14, n = 1;
  const auto M = SemilocalModel::get(f, p);
  const LocalElement xi_hat = M->X_power(1, N);
  const LocalElement one = one_like(xi_hat);
  CHECK(coleman_b(xi_hat, f, one).is_zero());

  const LocalElement zeta = M->X_power(3, N);  // a cube root of unity
  CHECK(coleman_b(xi_hat, f, zeta).is_zero());

  const SemilocalElement u = sample_minus_unit(FieldSpec(f), p, 7, N);
  const LocalElement w = u[0];
  const ModPN bw = coleman_b(xi_hat, f, w);
  const ModPN bw9 = coleman_b(xi_hat, f, w.pow(9));
  CHECK(bw9.reduce(n + 1).is_zero());
  // log(w^9) = 9 log(w), so b scales by 9 on the digits both know
  const int k = std::min(bw.precision(), bw9.precision());
  CHECK(bw9.reduce(k) == (bw * ModPN(3, bw.precision(), 9LL)).reduce(k));
}

TEST_CASE("hilbert bracket examples") {
  const FieldSpec K(9);
  const int N = 12, n = 1;
  const auto M = SemilocalModel::get(9, 3);
  const auto x = delta(FieldSpec(9).Gamma(), 1);
  CHECK(hilbert_bracket(K, x, SemilocalElement::one(M, N), n, N).is_zero());
  const SemilocalElement zeta = SemilocalElement::from_cyclotomic(M, CyclotomicNumber::xi(9, 3), N);
  CHECK(hilbert_bracket(K, x, zeta, n, N).is_zero());

  // [g alpha, g beta] = kappa(g) [alpha, beta]
  const SemilocalElement u = sample_minus_unit(K, 3, 4, N);
  const ModPN base = hilbert_bracket(K, x, u, n, N);
  for (long g : {2L, 4L, 5L, 8L}) {
    const ModPN moved = hilbert_bracket(K, delta(FieldSpec(9).Gamma(), g), u.galois(g), n, N);
    CHECK(moved == base * ModPN(3, n + 1, g));
  }
  CHECK(check_bracket_equivariance(3, 4).pass);
}

TEST_CASE("H_pairing examples") {
  SUBCASE("torsion and the Gbar action, d = 1") {
    const FieldSpec K(9);
    const CaseParams c = params(K, 3, 1);
    const int N = working_precision(K, c);
    const auto M = SemilocalModel::get(9, 3);
    const auto eta = rubin_stark_eta(K, c.S);
    const SemilocalElement zeta = SemilocalElement::from_cyclotomic(M, CyclotomicNumber::xi(9, 6), N);
    CHECK(H_pairing(K, eta, {zeta}, 3, 1, N).is_zero());

    const GroupPtr Gb = K.Gbar();
    const GroupPtr Gf = eta.factors[0].group();
    std::mt19937_64 rng(5);
    const SemilocalElement u = sample_minus_unit(K, 3, 13, N);
    const auto H = H_pairing(K, eta, {u}, 3, 1, N);
    for (int trial = 0; trial < 3; ++trial) {
      GroupRingElem<Rational> xbar(Gb, Rational(0)), lift(Gf, Rational(0));
      for (int i = 0; i < Gb->order(); ++i) {
        xbar[i] = Rational(static_cast<long>(rng() % 7) - 3);
        lift[Gf->index_of(Gb->rep(i))] = xbar[i];
      }
      WedgeUnits x_eta = eta;
      x_eta.factors[0] = eta.factors[0] * lift;
      const auto xmod = xbar.map([](const Rational& q) { return ModPN::from_rational(3, 2, q); });
      CHECK(H_pairing(K, x_eta, {u}, 3, 1, N) == kappa_bar_star(xmod, K.G(), 3, 1) * H);
    }
  }
  SUBCASE("column swap, d = 2") {
    const FieldSpec K = base_change_field();
    const CaseParams c = params(K, 3, 1);
    const int N = working_precision(K, c);
    const auto us = sample_theta(K, 3, 17, N);
    const auto eta = rubin_stark_eta(K, c.S);
    CHECK(H_pairing(K, eta, {us[1], us[0]}, 3, 1, N) == -H_pairing(K, eta, us, 3, 1, N));
  }
}

TEST_CASE("rubin_stark_eta examples") {
  SUBCASE("f = 5: (1 - xi_5)(1 - xi_5^4) has norm 5 from Q(sqrt 5)") {
    const FieldSpec K(5);
    const auto eta = rubin_stark_eta(K, minimal_place_set(K));
    REQUIRE(eta.d() == 1);
    CHECK(eta.scalar == Rational(-1, 2));
    const GroupPtr Gf = eta.factors[0].group();
    CHECK(eta.factors[0] == delta(Gf, 1) + delta(Gf, 4));
    const CyclotomicNumber v = cyclotomic_unit_value(5, eta.factors[0]);
    const CyclotomicNumber one(5, Rational(1));
    CHECK(v == (one - CyclotomicNumber::xi(5)) * (one - CyclotomicNumber::xi(5, 4)));
    const CyclotomicNumber norm = v * cyc_galois(2, v);
    REQUIRE(norm.is_rational());
    CHECK(norm.rational_value() == Rational(5));
  }
  SUBCASE("Bad(S) empty: the wedge is built from alpha directly") {
    const FieldSpec K = base_change_field();
    PlaceSet S = minimal_place_set(K);
    REQUIRE(bad_primes(K, S).empty());
    const auto gs = default_gammas(K);
    const auto eta = rubin_stark_eta(K, S, gs);
    REQUIRE(eta.d() == 2);
    CHECK(eta.scalar == Rational(1, 4));
    const GroupPtr Gf = eta.factors[0].group();
    CHECK(gs[0] == 1);
    const auto alpha = rubin_stark_eta(K.over_Q(), S).factors[0];
    for (size_t i = 0; i < 2; ++i)
      CHECK(eta.factors[i] == alpha.translated(Gf->index_of(inv_mod(gs[i], 45))));
  }
  SUBCASE("eigenspace condition for f = 9, S = {oo, 3}") {
    const FieldSpec K(9);
    const PlaceSet S = minimal_place_set(K);
    CHECK(eigenspace_condition_holds(K, S, rubin_stark_eta(K, S)));
  }
}

TEST_CASE("congruence: K = Q(xi_9), p = 3, n = 1, 20 samples") {
  const FieldSpec K(9);
  const CaseParams c = params(K, 3, 1);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) CHECK(cc_trial(K, c, seed).equal);
}

TEST_CASE("congruence: split primes and n-reduction") {
  // q = 17 and 19 are -1 and +1 mod 9, so they split in Q(xi_9)^+
  const FieldSpec K(9);
  const CaseParams c = params(K, 3, 1, {17, 19});
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const TrialResult r = cc_trial(K, c, seed);
    CHECK(r.equal);
    for (long long v : r.lhs) CHECK(v == 0);
  }
  CHECK(check_split_prime(4, 3).pass);
  CHECK(check_n_reduction(4, 3).pass);
}

TEST_CASE("congruence hypotheses") {
  const FieldSpec K(9);
  try {
    cc_trial(K, params(K, 3, 2), 1);
    FAIL("mu_27 accepted in Q(xi_9)");
  } catch (const StarkError& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolated);
  }
  const FieldSpec real(9, {8});
  CHECK_THROWS_AS(cc_trial(real, params(real, 3, 0), 1), StarkError);
}

TEST_CASE("base change: k = Q gives the direct maps") {
  const FieldSpec K(9);
  const CaseParams c = params(K, 3, 1);
  const int N = working_precision(K, c);
  const auto us = sample_theta(K, 3, 8, N);
  const auto bc = base_change_matrices(K, c.S, us, 1, N);
  REQUIRE(bc.c.size() == 1);
  CHECK(padic_agreement(bc.c[0][0], s_map(K, c.S, us, N)) >= 1);
  CHECK(bc.d[0][0] == H_pairing(K, rubin_stark_eta(K, c.S), us, 3, 1, N));
}

TEST_CASE("base change: K = Q(xi_45), k = Q(sqrt 5), p = 3, n = 1") {
  const FieldSpec K = base_change_field();
  CHECK(K.degree_k() == 2);
  const CaseParams c = params(K, 3, 1);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const BaseChangeReport r = base_change_check(K, c, seed);
    CHECK(r.agreement_digits >= c.n + 1);
    CHECK(r.det_d_matches_H);
    CHECK(r.det_c_matches_det_d);
    CHECK(cc_trial(K, c, seed).equal);
  }
}

TEST_CASE("property suite") {
  for (const PropertyResult& r : run_property_suite(19, 3)) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
    CHECK(r.checks > 0);
  }
}
