#include <random>

#include "doctest.h"
#include "starklab/padic.hpp"
#include "starklab/semilocal.hpp"

using namespace starklab;

namespace {

LocalElement random_element(const LocalPtr& L, int N, std::mt19937_64& rng) {
  LocalElement x(L, N);
  for (int j = 0; j < L->e(); ++j)
    for (int i = 0; i < L->r(); ++i) x.set_coeff(i, j, rng() % x.modulus());
  return x;
}

LocalElement random_principal(const LocalPtr& L, int N, std::mt19937_64& rng) {
  // 1 + (y - 1) * t, or 1 + p t when there is no y
  LocalElement t = random_element(L, N, rng);
  LocalElement pi = L->e() > 1 ? LocalElement::monomial(L, N, 0, 1) - LocalElement::from_int(L, N, 1)
                               : LocalElement::from_int(L, N, L->p());
  return LocalElement::from_int(L, N, 1) + pi * t;
}

// Phi_f evaluated at z.
LocalElement eval_cyclotomic(long f, const LocalElement& z) {
  const auto& phi = cyclotomic_poly(f);
  LocalElement acc(z.field(), z.precision());
  for (size_t k = phi.size(); k-- > 0;) {
    acc = acc * z;
    acc += LocalElement::from_int(z.field(), z.precision(), phi[k].get_si());
  }
  return acc;
}

}  // namespace

TEST_CASE("build_local examples") {
  auto L1 = build_local(5, 1, 0);
  CHECK(L1->r() == 1);
  CHECK(L1->e() == 4);
  auto L7 = build_local(3, 7, -1);
  CHECK(L7->r() == 6);
  CHECK(L7->e() == 1);
  // Phi_7 is irreducible mod 3, so the factor is Phi_7 itself
  const auto& g = L7->ghat();
  REQUIRE(g.size() == 7);
  for (auto c : g) CHECK(c == 1);
  CHECK(build_local(3, 7, -1) == L7);  // memoized
  CHECK_THROWS_AS(build_local(3, 6, 0), StarkError);
  CHECK_THROWS_AS(build_local(2, 1, 0), StarkError);
}

TEST_CASE("Hensel factor divides Phi_f' and x has order f'") {
  for (auto [p, f] : std::vector<std::pair<long, long>>{{3, 5}, {3, 7}, {5, 7}, {7, 9}, {5, 9}, {3, 13}, {5, 11}, {7, 3}}) {
    auto L = build_local(p, f, -1);
    CHECK(L->r() == mult_order(p % f, f));
    for (int N : {1, 5, L->max_precision()}) {
      auto x = LocalElement::monomial(L, N, 1, 0);
      CHECK(eval_cyclotomic(f, x).is_zero());
      CHECK(x.pow(static_cast<std::uint64_t>(f)) == LocalElement::from_int(L, N, 1));
      for (auto [q, e] : factorize(f)) CHECK(x.pow(static_cast<std::uint64_t>(f / q)) != LocalElement::from_int(L, N, 1));
    }
  }
}

TEST_CASE("ring axioms on random elements") {
  std::mt19937_64 rng(1);
  for (auto [p, f, m] : std::vector<std::tuple<long, long, int>>{{3, 7, 1}, {5, 1, 1}, {3, 5, 0}, {7, 9, -1}}) {
    auto L = build_local(p, f, m);
    const int N = 6;
    for (int t = 0; t < 5; ++t) {
      auto a = random_element(L, N, rng), b = random_element(L, N, rng), c = random_element(L, N, rng);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      // precision honesty: products at higher precision reduce to the same value
      auto A = a.lift_precision(N + 5), B = b.lift_precision(N + 5);
      CHECK((A * B).reduce(N) == a * b);
    }
  }
}

TEST_CASE("valuations") {
  auto L = build_local(3, 7, 1);  // e = 6
  const int N = 8;
  auto one = LocalElement::from_int(L, N, 1);
  auto y = LocalElement::monomial(L, N, 0, 1);
  CHECK((y - one).valuation() == 1);
  CHECK(LocalElement::from_int(L, N, 3).valuation() == 6);
  CHECK(LocalElement::from_int(L, N, 9).valuation() == 12);
  CHECK(one.valuation() == 0);
  CHECK(((y - one) * (y - one)).valuation() == 2);
  CHECK(LocalElement(L, N).valuation() == 6 * N);
  auto x = LocalElement::monomial(L, N, 1, 0);
  CHECK((x - one).valuation() == 0);  // 1 - xi_7 is a unit
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(L, N, rng), b = random_element(L, N, rng);
    if (a.valuation() + b.valuation() < 6 * N) CHECK((a * b).valuation() == a.valuation() + b.valuation());
  }
}

TEST_CASE("inverse and division by p") {
  std::mt19937_64 rng(5);
  auto L = build_local(5, 3, 1);
  const int N = 7;
  auto one = LocalElement::from_int(L, N, 1);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(L, N, rng);
    if (a.valuation() != 0) continue;
    CHECK(a * a.inverse() == one);
  }
  auto y = LocalElement::monomial(L, N, 0, 1);
  CHECK_THROWS_AS((y - one).inverse(), StarkError);
  auto a = random_element(L, N, rng);
  CHECK((a.scaled(ModPN(5, N, 25LL))).divide_by_p(2) == a.reduce(N - 2));
  CHECK_THROWS_AS((a * (y - one)).divide_by_p(1), StarkError);
}

TEST_CASE("trace examples and trace = sum of conjugates") {
  for (auto [p, f, m] : std::vector<std::tuple<long, long, int>>{{3, 7, 0}, {5, 1, 0}, {3, 5, 1}, {7, 9, -1}, {3, 1, 2}}) {
    auto L = build_local(p, f, m);
    const int N = 6;
    CHECK(trace_to_Qp(LocalElement::from_int(L, N, 1)).centered() == L->e() * L->r());
    if (m == 0) CHECK(trace_to_Qp(LocalElement::monomial(L, N, 0, 1)).centered() == -L->r());
    std::mt19937_64 rng(11);
    auto autos = local_automorphisms(L);
    CHECK(static_cast<int>(autos.size()) == L->dim());
    for (int t = 0; t < 4; ++t) {
      auto a = random_element(L, N, rng), b = random_element(L, N, rng);
      CHECK(trace_to_Qp(a + b) == trace_to_Qp(a) + trace_to_Qp(b));
      LocalElement sum(L, N);
      for (auto [dx, dy] : autos) sum += a.automorphism(dx, dy);
      REQUIRE(sum.is_rational());
      CHECK(sum.constant_term() == trace_to_Qp(a));
      // automorphisms are ring maps
      auto [dx, dy] = autos[autos.size() / 2];
      CHECK((a * b).automorphism(dx, dy) == a.automorphism(dx, dy) * b.automorphism(dx, dy));
    }
  }
}

TEST_CASE("norm of 1 - y is p") {
  for (auto [p, m] : std::vector<std::pair<long, int>>{{3, 0}, {3, 1}, {5, 0}, {7, 0}}) {
    auto L = build_local(p, 1, m);
    auto z = LocalElement::from_int(L, 6, 1) - LocalElement::monomial(L, 6, 0, 1);
    CHECK(norm_to_Qp(z).centered() == p);
  }
}

TEST_CASE("log_p") {
  std::mt19937_64 rng(17);
  for (auto [p, f, m] : std::vector<std::tuple<long, long, int>>{{3, 7, 1}, {5, 1, 0}, {3, 1, 1}, {7, 9, -1}, {5, 3, 1}}) {
    auto L = build_local(p, f, m);
    const int N = 8;
    auto one = LocalElement::from_int(L, N, 1);
    CHECK(log_p(one).is_zero());
    if (m >= 0) {
      // torsion has logarithm zero
      auto y = LocalElement::monomial(L, N, 0, 1);
      CHECK(log_p(y).is_zero());
    }
    for (int t = 0; t < 4; ++t) {
      // units with v(u - 1) >= e have integral logarithms
      auto u = one + random_element(L, N, rng).scaled(ModPN(p, N, static_cast<long long>(p)));
      auto w = one + random_element(L, N, rng).scaled(ModPN(p, N, static_cast<long long>(p)));
      CHECK(log_p(u * w) == log_p(u) + log_p(w));
      CHECK(log_p(u * u) == log_p(u).scaled(ModPN(p, N, 2LL)));
      // exp(log u) = u on U^{e+1}
      auto v = one + random_element(L, N, rng).scaled(ModPN(p, N, static_cast<long long>(p))) *
                         (m >= 0 ? LocalElement::monomial(L, N, 0, 1) - one : LocalElement::from_int(L, N, p));
      CHECK(exp_p(log_p(v)) == v);
    }
    // log of a unit that is not principal
    if (L->r() > 1) CHECK_THROWS_AS(log_p(LocalElement::monomial(L, N, 1, 0)), StarkError);
  }
}

TEST_CASE("log_p of a unit close to 1 in a ramified field") {
  // in Q_3(zeta_9), u = 1 + pi with v(pi) = 1: log u need not be integral
  auto L = build_local(3, 1, 1);
  std::mt19937_64 rng(23);
  const int N = 8;
  for (int t = 0; t < 6; ++t) {
    auto u = random_principal(L, N, rng);
    try {
      auto l = log_p(u);
      // when it is integral, it is still additive
      auto l2 = log_p(u * u);
      CHECK(l2 == (l + l).reduce(l2.precision()));
    } catch (const StarkError& e) {
      CHECK(e.kind() == ErrorKind::NonIntegral);
    }
  }
}

TEST_CASE("prime valuations in Q(xi_e)") {
  // in Q(i), 5 = (2 + i)(2 - i), exactly one factor lies in the canonical prime
  auto i = CyclotomicNumber::xi(4);
  auto a = CyclotomicNumber(4, Rational(2)) + i;
  auto b = CyclotomicNumber(4, Rational(2)) - i;
  int va = prime_valuation(a, 5), vb = prime_valuation(b, 5);
  CHECK(va + vb == 1);
  CHECK(prime_valuation(CyclotomicNumber(4, Rational(25, 3)), 5) == 2);
  CHECK(prime_valuation(a * a * b, 5) == 2 * va + vb);
  CHECK(prime_valuation(CyclotomicNumber(4, Rational(1, 5)), 5) == -1);
  CHECK_THROWS_AS(prime_valuation(CyclotomicNumber(5, Rational(1)), 5), StarkError);
}

// ---------------------------------------------------------------------------
// semilocal model

namespace {

CyclotomicNumber random_cyclotomic(long f, std::mt19937_64& rng) {
  std::vector<Rational> c;
  for (long k = 0; k < euler_phi(f); ++k) {
    Rational q(static_cast<long>(rng() % 19) - 9);
    if (rng() % 2) q /= 2;
    c.push_back(q);
  }
  return CyclotomicNumber(f, c);
}

long mobius(long n) {
  long r = 1;
  for (auto [q, e] : factorize(n)) {
    if (e > 1) return 0;
    r = -r;
  }
  return r;
}

}  // namespace

TEST_CASE("prime count times local degree is phi(f)") {
  for (auto [f, p] : std::vector<std::pair<long, long>>{{9, 3}, {63, 3}, {45, 3}, {7, 5}, {9, 5}, {9, 7}, {25, 5}, {5, 5}, {91, 3}, {21, 5}}) {
    auto M = SemilocalModel::get(f, p);
    CHECK(M->num_primes() * M->local()->dim() == euler_phi(f));
    CHECK(M->prime_rep(0) == 1);
  }
}

TEST_CASE("iota examples and ring structure") {
  std::mt19937_64 rng(29);
  for (auto [f, p] : std::vector<std::pair<long, long>>{{9, 3}, {63, 3}, {45, 3}, {21, 5}, {25, 5}}) {
    auto M = SemilocalModel::get(f, p);
    const int N = 6;
    for (int P = 0; P < M->num_primes(); ++P) {
      auto xi = M->iota(P, CyclotomicNumber::xi(f), N);
      CHECK(xi.pow(static_cast<std::uint64_t>(f)) == LocalElement::from_int(M->local(), N, 1));
      CHECK(M->iota(P, CyclotomicNumber(f, Rational(7)), N) == LocalElement::from_int(M->local(), N, 7));
    }
    for (int t = 0; t < 5; ++t) {
      auto a = random_cyclotomic(f, rng), b = random_cyclotomic(f, rng);
      auto A = SemilocalElement::from_cyclotomic(M, a, N), B = SemilocalElement::from_cyclotomic(M, b, N);
      CHECK(SemilocalElement::from_cyclotomic(M, a * b, N) == A * B);
      // global trace = sum of local traces
      ModPN tr(p, N, 0LL);
      for (int P = 0; P < M->num_primes(); ++P) tr += trace_to_Qp(A[P]);
      // Tr(xi_f^k) = mu(f / gcd) phi(f) / phi(f / gcd)
      Rational want = 0;
      for (size_t k = 0; k < a.coeffs().size(); ++k) {
        long g = gcd_l(static_cast<long>(k), f), fg = f / g;
        want += a.coeffs()[k] * Rational(mobius(fg) * euler_phi(f) / euler_phi(fg));
      }
      CHECK(tr == ModPN::from_rational(p, N, want));
    }
  }
}

TEST_CASE("Galois equivariance of the semilocal embedding") {
  std::mt19937_64 rng(31);
  for (auto [f, p] : std::vector<std::pair<long, long>>{{9, 3}, {63, 3}, {45, 3}, {21, 5}, {7, 5}, {9, 7}}) {
    auto M = SemilocalModel::get(f, p);
    const int N = 5;
    auto units = unit_subgroup(f, unit_group_generators(f));
    for (int t = 0; t < 20; ++t) {
      long b = units[rng() % units.size()];
      auto z = random_cyclotomic(f, rng);
      auto lhs = SemilocalElement::from_cyclotomic(M, cyc_galois(b, z), N);
      auto rhs = SemilocalElement::from_cyclotomic(M, z, N).galois(b);
      CHECK(lhs == rhs);
      long c = units[rng() % units.size()];
      auto x = SemilocalElement::from_cyclotomic(M, z, N);
      CHECK(x.galois(b).galois(c) == x.galois(b * c % f));
    }
  }
}

TEST_CASE("sample_minus_unit") {
  for (auto [f, p, h] : std::vector<std::tuple<long, long, long>>{{9, 3, 1}, {7, 5, 1}, {63, 3, 1}, {21, 5, 4}}) {
    FieldSpec K = h == 1 ? FieldSpec(f) : FieldSpec(f, {h});
    const int N = 6;
    auto u = sample_minus_unit(K, p, 42, N);
    auto one = SemilocalElement::one(u.model(), N);
    CHECK(u * u.galois(f - 1) == one);
    CHECK(u.is_principal());
    CHECK(u.is_invariant(K.H()));
    CHECK(u != sample_minus_unit(K, p, 43, N));
    CHECK(u == sample_minus_unit(K, p, 42, N));
  }
  CHECK_THROWS_AS(sample_minus_unit(FieldSpec(7, {6}), 5, 1, 4), StarkError);
}

TEST_CASE("semilocal norms") {
  FieldSpec K(63);
  FieldSpec F(63, {10});      // kernel of (Z/63)^x -> (Z/9)^x contains 10
  FieldSpec E(63, {10, 4});   // a further subfield
  const int N = 5;
  auto u = sample_minus_unit(K, 3, 7, N);
  CHECK(semilocal_norm(u, K, K) == u);
  auto one = SemilocalElement::one(u.model(), N);
  CHECK(semilocal_norm(one, K, F) == one);
  auto nF = semilocal_norm(u, K, F);
  CHECK(nF.is_invariant(F.H()));
  CHECK(semilocal_norm(nF, F, E) == semilocal_norm(u, K, E));
  CHECK_THROWS_AS(semilocal_norm(nF, F, K), StarkError);
}
