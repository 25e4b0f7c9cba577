#include <random>

#include "doctest.h"
#include "starklab/exact.hpp"

using namespace starklab;

namespace {

// Independent oracle: Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}, computed as
// (product over mu = +1) divided by (product over mu = -1).
int mobius(long n) {
  int m = 1;
  for (auto [q, e] : factorize(n)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  IntPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

IntPoly poly_div(IntPoly a, const IntPoly& b) {
  IntPoly q(a.size() - b.size() + 1, 0);
  const long db = static_cast<long>(b.size()) - 1;
  for (long i = static_cast<long>(a.size()) - 1; i >= db; --i) {
    Integer c = a[i] / b.back();
    q[i - db] = c;
    for (long j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  return q;
}

IntPoly mobius_cyclotomic(long n) {
  IntPoly num{1}, den{1};
  for (long d = 1; d <= n; ++d) {
    if (n % d) continue;
    IntPoly t(d + 1, 0);
    t[0] = -1;
    t[d] = 1;
    int m = mobius(n / d);
    if (m == 1) num = poly_mul(num, t);
    if (m == -1) den = poly_mul(den, t);
  }
  return poly_div(num, den);
}

CyclotomicNumber random_cyc(long f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Rational> c(euler_phi(f));
  for (auto& q : c) {
    q = Rational(num(rng), den(rng));
    q.canonicalize();
  }
  return CyclotomicNumber(f, c);
}

}  // namespace

TEST_CASE("cyclotomic_poly small cases") {
  CHECK(cyclotomic_poly(1) == IntPoly{-1, 1});
  CHECK(cyclotomic_poly(3) == IntPoly{1, 1, 1});
  CHECK(cyclotomic_poly(12) == IntPoly{1, 0, -1, 0, 1});
  CHECK(poly_to_string(cyclotomic_poly(12)) == "x^4-x^2+1");
}

TEST_CASE("cyclotomic_poly agrees with the Mobius product formula") {
  for (long f = 1; f <= 105; ++f) {
    INFO("f = " << f);
    CHECK(cyclotomic_poly(f) == mobius_cyclotomic(f));
    CHECK(static_cast<long>(cyclotomic_poly(f).size()) - 1 == euler_phi(f));
  }
}

TEST_CASE("cyc_galois examples and action law") {
  auto z = CyclotomicNumber::xi(3);
  CHECK(cyc_galois(1, z) == z);
  auto g = cyc_galois(-1, z);
  CHECK(g == CyclotomicNumber(3, std::vector<Rational>{-1, -1}));
  CHECK(g == z * z);
  CHECK_THROWS_AS(cyc_galois(3, z), StarkError);

  std::mt19937_64 rng(7);
  for (long f : {5L, 8L, 9L, 12L, 15L, 21L}) {
    auto x = random_cyc(f, rng);
    for (long a = 1; a < f; ++a) {
      if (gcd_l(a, f) != 1) continue;
      for (long b = 1; b < f; ++b) {
        if (gcd_l(b, f) != 1) continue;
        CHECK(cyc_galois(a, cyc_galois(b, x)) == cyc_galois(a * b, x));
      }
    }
  }
}

TEST_CASE("cyc_project") {
  auto z = CyclotomicNumber::xi(6, 2);
  CHECK(cyc_project(z, 3) == CyclotomicNumber::xi(3));
  CHECK(cyc_project(CyclotomicNumber(12, Rational(5, 7)), 1) == CyclotomicNumber(1, Rational(5, 7)));
  try {
    cyc_project(CyclotomicNumber::xi(9), 3);
    FAIL("expected NotInSubfield");
  } catch (const StarkError& e) {
    CHECK(e.kind() == ErrorKind::NotInSubfield);
  }
  // round trip through an embedding
  std::mt19937_64 rng(3);
  auto w = random_cyc(15, rng);
  CHECK(cyc_project(cyc_embed(w, 45), 15) == w);
}

TEST_CASE("field axioms on random samples") {
  std::mt19937_64 rng(11);
  for (long f : {3L, 7L, 12L, 20L, 36L, 45L, 60L}) {
    for (int t = 0; t < 5; ++t) {
      auto a = random_cyc(f, rng), b = random_cyc(f, rng), c = random_cyc(f, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      if (!a.is_zero()) CHECK(a * a.inverse() == CyclotomicNumber(f, Rational(1)));
    }
  }
}

TEST_CASE("norm of 1 - xi_f") {
  for (long f = 2; f <= 60; ++f) {
    auto one_minus = CyclotomicNumber(f, Rational(1)) - CyclotomicNumber::xi(f);
    CyclotomicNumber prod(f, Rational(1));
    for (long a = 1; a < f; ++a)
      if (gcd_l(a, f) == 1) prod *= cyc_galois(a, one_minus);
    auto fac = factorize(f);
    Rational expect = fac.size() == 1 ? Rational(fac[0].first) : Rational(1);
    INFO("f = " << f);
    CHECK(prod == CyclotomicNumber(f, expect));
  }
}

TEST_CASE("ModPN arithmetic and precision") {
  ModPN a(3, 4, 10), b(3, 2, 5);
  CHECK((a + b).precision() == 2);
  CHECK((a + b).value() == (10 + 5) % 9);
  CHECK((a * b).value() == 50 % 9);
  CHECK(a.inverse() * a == ModPN(3, 4, 1));
  CHECK(ModPN(3, 4, 18).valuation() == 2);
  CHECK(ModPN(3, 4, 0).valuation() == 4);
  CHECK(ModPN::from_rational(5, 3, Rational(1, 2)) * ModPN(5, 3, 2) == ModPN(5, 3, 1));
  CHECK_THROWS_AS(ModPN::from_rational(5, 3, Rational(1, 5)), StarkError);
  CHECK_THROWS_AS(ModPN(3, 4, 9).inverse(), StarkError);
  CHECK(ModPN(7, 3, -1).centered() == -1);
}

TEST_CASE("number theory helpers") {
  CHECK(mult_order(2, 7) == 3);
  CHECK(euler_phi(45) == 24);
  CHECK(inv_mod(2, 9) == 5);
  CHECK(crt_pair(2, 5, 3, 7) % 5 == 2);
  CHECK(crt_pair(2, 5, 3, 7) % 7 == 3);
  CHECK(vp_rat(Rational(18, 5), 3) == 2);
  CHECK(vp_rat(Rational(7, 45), 3) == -2);
}
