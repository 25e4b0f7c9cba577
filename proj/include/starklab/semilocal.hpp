#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "starklab/fields.hpp"
#include "starklab/padic.hpp"

namespace starklab {

// K_f (x) Q_p = prod_{P | p} L for K_f = Q(xi_f), f = f' p^{m+1}.
// Primes are indexed by the cosets a D of D = {d : d mod f' in <p>} in (Z/f)^x,
// each represented by its smallest residue a_P, and iota_{P_a} = iota_1 o sigma_a
// with iota_1(xi_f) = X = x^alpha y^beta (alpha p^{m+1} = 1 mod f', beta f' = 1 mod p^{m+1}).
// Subfields K = Q(xi_f)^H are modelled inside the same algebra as H-invariant tuples.
class SemilocalModel {
 public:
  static std::shared_ptr<const SemilocalModel> get(long f, long p);

  long f() const { return f_; }
  long p() const { return p_; }
  const LocalPtr& local() const { return L_; }
  int num_primes() const { return static_cast<int>(reps_.size()); }
  long prime_rep(int P) const { return reps_[P]; }
  // a = a_P d with d in D.
  std::pair<int, long> split(long a) const;
  long alpha() const { return alpha_; }
  long beta() const { return beta_; }

  // X^k.
  LocalElement X_power(long k, int N) const;
  // iota_P(z) for z in Q(xi_g), g | f, with p-integral coefficients (NonIntegral otherwise).
  LocalElement iota(int P, const CyclotomicNumber& z, int N) const;
  // iota_P(z) = p^{-shift} * mantissa for any z; mantissa has precision N.
  std::pair<LocalElement, int> iota_scaled(int P, const CyclotomicNumber& z, int N) const;

 private:
  long f_ = 1, p_ = 3, alpha_ = 0, beta_ = 0;
  LocalPtr L_;
  std::vector<long> reps_;
  std::vector<int> coset_;  // residue -> prime index (-1 for non-units)
};
using ModelPtr = std::shared_ptr<const SemilocalModel>;

class SemilocalElement {
 public:
  SemilocalElement() = default;
  SemilocalElement(ModelPtr M, std::vector<LocalElement> comps);
  static SemilocalElement one(const ModelPtr& M, int N);
  // (iota_P(z))_P.
  static SemilocalElement from_cyclotomic(const ModelPtr& M, const CyclotomicNumber& z, int N);

  const ModelPtr& model() const { return M_; }
  int num_primes() const { return static_cast<int>(c_.size()); }
  const LocalElement& operator[](int P) const { return c_[P]; }
  const std::vector<LocalElement>& components() const { return c_; }
  int precision() const;

  friend SemilocalElement operator*(const SemilocalElement& a, const SemilocalElement& b);
  SemilocalElement operator+(const SemilocalElement& o) const;
  SemilocalElement operator-(const SemilocalElement& o) const;
  friend bool operator==(const SemilocalElement& a, const SemilocalElement& b) { return a.c_ == b.c_; }
  friend bool operator!=(const SemilocalElement& a, const SemilocalElement& b) { return !(a == b); }
  SemilocalElement reduce(int N) const;
  SemilocalElement inverse() const;
  SemilocalElement pow(std::uint64_t k) const;

  // sigma_b for a unit b mod f: (sigma_b x)_{P_a} = d^(x_{P_a'}) where a b = a' d.
  SemilocalElement galois(long b) const;
  // Every component is = 1 mod its maximal ideal.
  bool is_principal() const;
  // Fixed by sigma_h for all h in H.
  bool is_invariant(const std::vector<long>& H) const;

 private:
  ModelPtr M_;
  std::vector<LocalElement> c_;
};

// Componentwise p-adic logarithm.
SemilocalElement semilocal_log(const SemilocalElement& u);

// u = w c(w)^{-1} with w the norm to K of 1 + p * (pseudo-random element), from a 64-bit seed.
SemilocalElement sample_minus_unit(const FieldSpec& K, long p, std::uint64_t seed, int N);

// N_{K/F} for F inside K (same modulus): product over H_F / H_K of sigma_h(u).
SemilocalElement semilocal_norm(const SemilocalElement& u, const FieldSpec& K, const FieldSpec& F);

}  // namespace starklab
