#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "starklab/errors.hpp"

namespace starklab {

using Integer = mpz_class;
using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Machine-integer number theory on small moduli (conductors, residues, orders).

long mod_floor(long a, long m);
long gcd_l(long a, long b);
long lcm_l(long a, long b);
long ipow(long b, int e);
bool is_prime(long n);
std::vector<std::pair<long, int>> factorize(long n);
long euler_phi(long n);
long pow_mod(long a, long e, long m);
// Throws NonUnitResidue when gcd(a, m) != 1.
long inv_mod(long a, long m);
long mult_order(long a, long m);
// Exponent of p in n (n != 0).
int vp_int(long n, long p);
int vp_int(const Integer& n, long p);
// Exponent of p in a nonzero rational.
int vp_rat(const Rational& q, long p);
// Splits f = p^v * rest with p not dividing rest.
std::pair<int, long> split_p_part(long f, long p);
// Smallest b congruent to a mod m0 with gcd(b, m) = 1, where m0 | m.
long lift_unit(long a, long m0, long m);
// x with x = a mod m1 and x = b mod m2 for coprime m1, m2; result in [0, m1*m2).
long crt_pair(long a, long m1, long b, long m2);

// ---------------------------------------------------------------------------
// Integer polynomials, coefficient index = degree.

using IntPoly = std::vector<Integer>;

// Phi_f, memoized. The returned reference stays valid for the program lifetime.
const IntPoly& cyclotomic_poly(long f);
std::string poly_to_string(const IntPoly& p);

// ---------------------------------------------------------------------------
// Q(xi_f) in the power basis modulo Phi_f.

class CyclotomicNumber {
 public:
  CyclotomicNumber();
  explicit CyclotomicNumber(long f);
  CyclotomicNumber(long f, const Rational& c);
  // Accepts any length; the input polynomial is reduced modulo Phi_f.
  CyclotomicNumber(long f, const std::vector<Rational>& poly);

  static CyclotomicNumber xi(long f, long k = 1);

  long modulus() const { return f_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_rational() const;
  Rational rational_value() const;  // requires is_rational()

  CyclotomicNumber operator-() const;
  CyclotomicNumber& operator+=(const CyclotomicNumber& o);
  CyclotomicNumber& operator-=(const CyclotomicNumber& o);
  CyclotomicNumber& operator*=(const CyclotomicNumber& o);
  CyclotomicNumber& operator*=(const Rational& q);
  friend CyclotomicNumber operator+(CyclotomicNumber a, const CyclotomicNumber& b) { return a += b; }
  friend CyclotomicNumber operator-(CyclotomicNumber a, const CyclotomicNumber& b) { return a -= b; }
  friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b);
  friend CyclotomicNumber operator*(CyclotomicNumber a, const Rational& q) { return a *= q; }
  friend CyclotomicNumber operator*(const Rational& q, CyclotomicNumber a) { return a *= q; }
  friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b);
  friend bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) { return !(a == b); }

  // Throws InvalidArgument on zero.
  CyclotomicNumber inverse() const;
  CyclotomicNumber pow(long e) const;

  std::string to_string() const;

 private:
  void require_same(const CyclotomicNumber& o) const;
  long f_;
  std::vector<Rational> c_;
};

CyclotomicNumber operator/(const CyclotomicNumber& a, const CyclotomicNumber& b);

// sigma_a : xi_f -> xi_f^a.
CyclotomicNumber cyc_galois(long a, const CyclotomicNumber& z);
// Q(xi_f) -> Q(xi_g) for f | g, xi_f -> xi_g^{g/f}.
CyclotomicNumber cyc_embed(const CyclotomicNumber& z, long g);
// Inverse of cyc_embed; throws NotInSubfield if z is not in Q(xi_f0).
CyclotomicNumber cyc_project(const CyclotomicNumber& z, long f0);

// Ring-generic helpers used by the group-ring templates.
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline CyclotomicNumber zero_like(const CyclotomicNumber& z) { return CyclotomicNumber(z.modulus()); }
inline CyclotomicNumber one_like(const CyclotomicNumber& z) { return CyclotomicNumber(z.modulus(), Rational(1)); }
inline bool is_zero(const CyclotomicNumber& z) { return z.is_zero(); }

// Solves A x = b over Q; nullopt if inconsistent. Free variables are set to 0.
std::optional<std::vector<Rational>> solve_rational(std::vector<std::vector<Rational>> A,
                                                    std::vector<Rational> b);

// ---------------------------------------------------------------------------
// Z/p^N with explicit precision. Requires p^N < 2^62.

class ModPN {
 public:
  ModPN() = default;
  ModPN(std::uint64_t p, int N, long long value);
  ModPN(std::uint64_t p, int N, const Integer& value);
  // Image of a p-integral rational; throws NonIntegral otherwise.
  static ModPN from_rational(std::uint64_t p, int N, const Rational& q);

  std::uint64_t prime() const { return p_; }
  int precision() const { return N_; }
  std::uint64_t modulus() const { return mod_; }
  std::uint64_t value() const { return v_; }
  // Signed representative in (-p^N/2, p^N/2].
  long long centered() const;
  // v_p of the value, or N when the value is zero.
  int valuation() const;
  bool is_zero() const { return v_ == 0; }
  bool is_unit() const { return v_ % p_ != 0; }

  ModPN reduce(int N) const;
  ModPN operator-() const;
  ModPN& operator+=(const ModPN& o);
  ModPN& operator-=(const ModPN& o);
  ModPN& operator*=(const ModPN& o);
  friend ModPN operator+(ModPN a, const ModPN& b) { return a += b; }
  friend ModPN operator-(ModPN a, const ModPN& b) { return a -= b; }
  friend ModPN operator*(ModPN a, const ModPN& b) { return a *= b; }
  friend bool operator==(const ModPN& a, const ModPN& b) {
    return a.p_ == b.p_ && a.N_ == b.N_ && a.v_ == b.v_;
  }
  friend bool operator!=(const ModPN& a, const ModPN& b) { return !(a == b); }
  ModPN inverse() const;  // NonUnitResidue if not a unit
  ModPN pow(std::uint64_t e) const;
  std::string to_string() const;

 private:
  void require_same_prime(const ModPN& o) const;
  std::uint64_t p_ = 3;
  int N_ = 1;
  std::uint64_t mod_ = 3;
  std::uint64_t v_ = 0;
};

std::uint64_t checked_prime_power(std::uint64_t p, int N);
inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline ModPN zero_like(const ModPN& z) { return ModPN(z.prime(), z.precision(), 0LL); }
inline ModPN one_like(const ModPN& z) { return ModPN(z.prime(), z.precision(), 1LL); }
inline bool is_zero(const ModPN& z) { return z.is_zero(); }

}  // namespace starklab
