#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "starklab/group.hpp"

using namespace starklab;

namespace {

GroupRingElem<Rational> random_rat_elem(const GroupPtr& G, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  GroupRingElem<Rational> x(G, Rational(0));
  for (int g = 0; g < G->order(); ++g) {
    x[g] = Rational(num(rng), den(rng));
    x[g].canonicalize();
  }
  return x;
}

GroupRingElem<CyclotomicNumber> random_cyc_elem(const GroupPtr& G, long f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4);
  GroupRingElem<CyclotomicNumber> x(G, CyclotomicNumber(f));
  for (int g = 0; g < G->order(); ++g) {
    std::vector<Rational> c(euler_phi(f));
    for (auto& q : c) q = num(rng);
    x[g] = CyclotomicNumber(f, c);
  }
  return x;
}

// All subgroups of G as sorted index lists.
std::vector<std::vector<int>> all_subgroups(const GroupPtr& G) {
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> frontier{{0}};
  out.push_back({0});
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& S : frontier)
      for (int g = 0; g < G->order(); ++g) {
        std::vector<int> gens = S;
        gens.push_back(g);
        auto T = G->subgroup_generated(gens);
        if (std::find(out.begin(), out.end(), T) == out.end()) {
          out.push_back(T);
          next.push_back(T);
        }
      }
    frontier.swap(next);
  }
  return out;
}

}  // namespace

TEST_CASE("abelian group structure") {
  auto G8 = AbelianGroup::make(8, {});
  CHECK(G8->order() == 4);
  CHECK(G8->invariant_factors() == std::vector<long>{2, 2});
  auto G45 = AbelianGroup::make(45, {});
  CHECK(G45->order() == 24);
  CHECK(G45->invariant_factors() == std::vector<long>{2, 12});
  auto G63 = AbelianGroup::make(63, {});
  CHECK(G63->invariant_factors() == std::vector<long>{6, 6});
  auto Q = AbelianGroup::make(9, {8});
  CHECK(Q->order() == 3);
  CHECK(Q->rep(0) == 1);
  CHECK(Q->index_of(8) == 0);
  // subquotient H'/H
  auto G = AbelianGroup::make(45, {}, std::vector<long>{44, 4});
  CHECK(G->order() == 12);
  for (int g = 0; g < G->order(); ++g) CHECK(G->mul(g, G->inv(g)) == 0);
}

TEST_CASE("characters: homomorphism, orthogonality, counting") {
  for (long f : {7L, 8L, 15L, 45L}) {
    auto G = AbelianGroup::make(f, {});
    auto chars = Character::all(G);
    CHECK(static_cast<int>(chars.size()) == G->order());
    for (const auto& chi : chars) {
      CHECK(chi.log_value(0) == 0);
      for (int a = 0; a < G->order(); ++a)
        for (int b = 0; b < G->order(); ++b)
          CHECK(chi.log_value(G->mul(a, b)) == (chi.log_value(a) + chi.log_value(b)) % G->exponent());
    }
    // sum_chi e_chi = 1
    GroupRingElem<CyclotomicNumber> s(G, CyclotomicNumber(G->exponent()));
    for (const auto& chi : chars) s += e_chi(chi);
    CHECK(s == GroupRingElem<CyclotomicNumber>::one(G, CyclotomicNumber(G->exponent())));
  }
}

TEST_CASE("apply_character examples") {
  auto G = AbelianGroup::make(3, {});
  auto chars = Character::all(G);
  REQUIRE(chars.size() == 2);
  const Character& triv = chars[0];
  const Character& odd = chars[1];
  CHECK(triv.is_trivial());
  CHECK(odd.is_odd());
  GroupRingElem<Rational> x(G, Rational(0));
  x[G->index_of(1)] = Rational(1, 6);
  x[G->index_of(2)] = Rational(-1, 6);
  CHECK(apply_character(triv, x).is_zero());
  CHECK(apply_character(odd, x) == CyclotomicNumber(2, Rational(1, 3)));

  auto G15 = AbelianGroup::make(15, {});
  auto ch = Character::all(G15);
  for (const auto& chi : ch)
    for (const auto& psi : ch) {
      auto v = apply_character(psi, e_chi(chi));
      CHECK(v == CyclotomicNumber(v.modulus(), Rational(psi == chi ? 1 : 0)));
    }
}

TEST_CASE("apply_character is multiplicative") {
  std::mt19937_64 rng(5);
  auto G = AbelianGroup::make(16, {});
  auto chars = Character::all(G);
  for (int t = 0; t < 100; ++t) {
    auto x = random_cyc_elem(G, 4, rng), y = random_cyc_elem(G, 4, rng);
    const auto& chi = chars[t % chars.size()];
    CHECK(apply_character(chi, x * y) == apply_character(chi, x) * apply_character(chi, y));
  }
}

TEST_CASE("idempotents") {
  auto G = AbelianGroup::make(3, {});
  auto em = e_minus(G);
  CHECK(em[0] == Rational(1, 2));
  CHECK(em[1] == Rational(-1, 2));
  CHECK(em * em == em);
  auto ep = e_plus(G);
  CHECK(ep + em == GroupRingElem<Rational>::one(G, Rational(0)));
  auto G9 = AbelianGroup::make(9, {});
  auto c = *G9->complex_conjugation();
  auto em9 = e_minus(G9);
  CHECK(em9.translated(c) == -em9);
  CHECK_THROWS_AS(e_minus(AbelianGroup::make(9, {8})), StarkError);
}

TEST_CASE("star involution") {
  std::mt19937_64 rng(9);
  auto G = AbelianGroup::make(21, {});
  for (int t = 0; t < 20; ++t) {
    auto x = random_rat_elem(G, rng), y = random_rat_elem(G, rng);
    CHECK((x * y).star() == x.star() * y.star());
    CHECK(x.star().star() == x);
  }
}

TEST_CASE("norm element, restriction and corestriction") {
  auto G = AbelianGroup::make(20, {});
  auto D = G->subgroup_generated({G->index_of(9)});
  auto N = norm_element(G, D, Rational(0));
  CHECK(N.translated(G->index_of(9)) == N);
  auto triv = norm_element(G, std::vector<int>{0}, Rational(0));
  CHECK(triv == GroupRingElem<Rational>::one(G, Rational(0)));
  auto NG = norm_element(G, G->subgroup_generated({1, 2, 3, 4, 5, 6, 7}), Rational(0));
  CHECK(apply_character(Character::trivial(G), NG).rational_value() == G->order());

  std::mt19937_64 rng(2);
  auto Gb = G->quotient({9});
  auto x = random_rat_elem(G, rng);
  CHECK(restrict_pi(x, G) == x);
  auto Nk = norm_element(G, G->subgroup_generated({G->index_of(9)}), Rational(0));
  CHECK(restrict_pi(Nk, Gb) == GroupRingElem<Rational>::one(Gb, Rational(0)).scaled(Rational(2)));
  auto xb = random_rat_elem(Gb, rng);
  CHECK(corestrict_nu(GroupRingElem<Rational>::one(Gb, Rational(0)), G) == Nk);
  CHECK(restrict_pi(corestrict_nu(xb, G), Gb) == xb.scaled(Rational(2)));
  // pi(e^-) with c surviving vs c in the kernel
  auto G5 = AbelianGroup::make(5, {});
  CHECK(restrict_pi(e_minus(G5), G5->quotient({4})).is_zero());
  auto G15 = AbelianGroup::make(15, {});
  auto G15b = G15->quotient({4});
  CHECK(restrict_pi(e_minus(G15), G15b) == e_minus(G15b));
  // characters trivial on the kernel see nu(x) as |ker| * x
  for (const auto& chi : Character::all(G)) {
    bool trivial_on_ker = chi.log_value(G->index_of(9)) == 0;
    auto v = apply_character(chi, corestrict_nu(xb, G));
    if (!trivial_on_ker) CHECK(v.is_zero());
  }
}

TEST_CASE("kappa_n and kappa_bar_star") {
  auto G = AbelianGroup::make(9, {});
  auto c = *G->complex_conjugation();
  CHECK(kappa_n(G, 0, 3, 1) == ModPN(3, 2, 1));
  CHECK(kappa_n(G, c, 3, 1) == ModPN(3, 2, -1));
  for (int a = 0; a < G->order(); ++a)
    for (int b = 0; b < G->order(); ++b)
      CHECK(kappa_n(G, G->mul(a, b), 3, 1) == kappa_n(G, a, 3, 1) * kappa_n(G, b, 3, 1));
  CHECK_THROWS_AS(kappa_n(G, 0, 3, 2), StarkError);
  CHECK_THROWS_AS(kappa_n(AbelianGroup::make(9, {4}), 0, 3, 1), StarkError);

  auto Gb = G->quotient({8});
  const ModPN z(3, 2, 0);
  auto one_b = GroupRingElem<ModPN>::one(Gb, z);
  auto em = e_minus(G).map([](const Rational& q) { return ModPN::from_rational(3, 2, q); });
  CHECK(kappa_bar_star(one_b, G, 3, 1) == em);
  auto cbar = GroupRingElem<ModPN>::basis(Gb, Gb->index_of(8), z);
  CHECK(kappa_bar_star(cbar, G, 3, 1) == em);

  // multiplicative and injective on the basis; image has |Gbar| elements of basis images
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(0, 8);
  for (int t = 0; t < 30; ++t) {
    GroupRingElem<ModPN> x(Gb, z), y(Gb, z);
    for (int i = 0; i < Gb->order(); ++i) {
      x[i] = ModPN(3, 2, d(rng));
      y[i] = ModPN(3, 2, d(rng));
    }
    CHECK(kappa_bar_star(x * y, G, 3, 1) == kappa_bar_star(x, G, 3, 1) * kappa_bar_star(y, G, 3, 1));
  }
  // bijection: (Z/9)^{|Gbar|} elements map injectively; checked on the full space via linear independence
  // of the images of the basis modulo 3.
  std::vector<GroupRingElem<ModPN>> imgs;
  for (int b = 0; b < Gb->order(); ++b) imgs.push_back(kappa_bar_star(GroupRingElem<ModPN>::basis(Gb, b, z), G, 3, 1));
  // coefficient of g^{-1} for the lift g of b is 1/2 kappa(g): a unit, and distinct b give distinct g^{-1} c-orbits
  for (int b = 0; b < Gb->order(); ++b)
    for (int b2 = 0; b2 < Gb->order(); ++b2) {
      if (b == b2) continue;
      CHECK(imgs[b] != imgs[b2]);
    }
  std::set<std::vector<unsigned long>> images;
  std::vector<int> v(Gb->order(), 0);
  while (true) {
    GroupRingElem<ModPN> x(Gb, z);
    for (int i = 0; i < Gb->order(); ++i) x[i] = ModPN(3, 2, v[i]);
    auto y = kappa_bar_star(x, G, 3, 1);
    std::vector<unsigned long> key;
    for (int i = 0; i < G->order(); ++i) key.push_back(y[i].value());
    images.insert(key);
    // images lie in the minus part
    CHECK(y == y * em);
    int i = 0;
    while (i < Gb->order()) {
      if (++v[i] < 9) break;
      v[i] = 0;
      ++i;
    }
    if (i == Gb->order()) break;
  }
  CHECK(images.size() == 729);  // 9^3 = |(Z/9) Gbar| = |(Z/9) G^-|
}

TEST_CASE("det_over_subgroup basic cases") {
  std::mt19937_64 rng(4);
  auto B = AbelianGroup::make(20, {});
  auto x = random_rat_elem(B, rng);
  auto Bsub = B->subgroup(B->subgroup_generated({1, 2, 3, 4, 5, 6, 7}));
  auto d = det_over_subgroup(x, Bsub);
  CHECK(restrict_pi(d, B) == x);
  // x in R[C]: diagonal matrix, det = x^t
  auto Cidx = B->subgroup_generated({B->index_of(9)});
  auto C = B->subgroup(Cidx);
  GroupRingElem<Rational> xc(C, Rational(0));
  GroupRingElem<Rational> xb(B, Rational(0));
  for (int c = 0; c < C->order(); ++c) {
    xc[c] = Rational(c + 2, 3);
    xb[B->index_of(C->rep(c))] = xc[c];
  }
  auto t = B->order() / C->order();
  auto pw = GroupRingElem<Rational>::one(C, Rational(0));
  for (int i = 0; i < t; ++i) pw = pw * xc;
  CHECK(det_over_subgroup(xb, C) == pw);
}

namespace {

// Oracle for the Lemma 8.2 identity: chi(det) = prod over phi in B^ restricting to chi of phi(x).
void check_char_identity(const GroupRingElem<CyclotomicNumber>& x, const GroupPtr& C) {
  const auto& B = x.group();
  auto det = det_over_subgroup(x, C);
  for (const auto& chi : Character::all(C)) {
    auto lhs = apply_character(chi, det);
    long L = lhs.modulus();
    std::vector<CyclotomicNumber> factors;
    for (const auto& phi : Character::all(B)) {
      bool restricts = true;
      for (int c = 0; c < C->order() && restricts; ++c) {
        int b = B->index_of(C->rep(c));
        long M = lcm_l(B->exponent(), C->exponent());
        if (phi.log_value(b) * (M / B->exponent()) % M != chi.log_value(c) * (M / C->exponent()) % M) restricts = false;
      }
      if (restricts) factors.push_back(apply_character(phi, x));
    }
    for (const auto& fct : factors) L = lcm_l(L, fct.modulus());
    CyclotomicNumber rhs(L, Rational(1));
    for (const auto& fct : factors) rhs *= cyc_embed(fct, L);
    CHECK(cyc_embed(lhs, L) == rhs);
  }
}

}  // namespace

TEST_CASE("det_over_subgroup character identity, |B| = 4 with cyclotomic coefficients") {
  std::mt19937_64 rng(8);
  auto B = AbelianGroup::make(5, {});
  auto C = B->subgroup(B->subgroup_generated({B->index_of(4)}));
  for (int t = 0; t < 5; ++t) check_char_identity(random_cyc_elem(B, 3, rng), C);
}

TEST_CASE("det_over_subgroup character identity, exhaustive over subgroups for |B| <= 12") {
  std::mt19937_64 rng(12);
  std::vector<GroupPtr> groups;
  for (long f = 3; f <= 42; ++f)
    if (euler_phi(f) <= 12) groups.push_back(AbelianGroup::make(f, {}));
  groups.push_back(AbelianGroup::make(35, {6}));   // quotient of order 12
  groups.push_back(AbelianGroup::make(45, {44}));  // order 12 quotient
  for (const auto& B : groups) {
    auto x = to_cyclotomic(random_rat_elem(B, rng), 1);
    for (const auto& S : all_subgroups(B)) check_char_identity(x, B->subgroup(S));
  }
}

TEST_CASE("det_over_subgroup is transversal independent") {
  std::mt19937_64 rng(21);
  auto B = AbelianGroup::make(21, {});
  auto C = B->subgroup(B->subgroup_generated({B->index_of(8)}));
  auto x = to_cyclotomic(random_rat_elem(B, rng), 1);
  auto base = det_over_subgroup(x, C);
  for (int t = 0; t < 10; ++t) {
    // random representative of each coset, cosets in shuffled order
    std::vector<int> seen(B->order(), 0), trans;
    std::vector<int> order(B->order());
    for (int i = 0; i < B->order(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int b : order) {
      if (seen[b]) continue;
      trans.push_back(b);
      for (int c = 0; c < C->order(); ++c) seen[B->mul(B->index_of(C->rep(c)), b)] = 1;
    }
    CHECK(det_over_subgroup(x, C, trans) == base);
  }
}
