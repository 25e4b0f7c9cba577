#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "starklab/exact.hpp"

namespace starklab {

// L = Q_p(xi_{f'}, xi_{p^{m+1}}) with p not dividing f', presented as
//   Z_p[x]/(g(x)) [y]/(Phi_{p^{m+1}}(y)),
// where g is the chosen Hensel factor of Phi_{f'} and x = xi_{f'}.
// m = -1 means no p-power part (L unramified, e = 1, y absent).
// The canonical factor is the lexicographically smallest monic irreducible
// factor of Phi_{f'} mod p (coefficients compared from the constant term up).
class LocalFieldSpec {
 public:
  long p() const { return p_; }
  long fprime() const { return fprime_; }
  int m() const { return m_; }
  int r() const { return r_; }  // residue degree
  int e() const { return e_; }  // ramification index
  long ppow() const { return ppow_; }  // p^{m+1}
  int max_precision() const { return Nmax_; }
  int dim() const { return r_ * e_; }
  // Hensel factor mod p^{max_precision}, monic, low degree first.
  const std::vector<std::uint64_t>& ghat() const { return g_; }
  // x^k mod g at max precision, for 0 <= k < f'.
  const std::vector<std::uint64_t>& xpow(long k) const { return xpow_[k]; }
  // y^k in the basis 1..y^{e-1}, for 0 <= k < p^{m+1}: pairs (index, +-1).
  const std::vector<std::pair<int, int>>& ypow(long k) const { return ypow_[k]; }
  // Tr_{L/Q_p}(x^i y^j) at max precision.
  std::uint64_t basis_trace(int i, int j) const { return trace_[i * e_ + j]; }

 private:
  friend std::shared_ptr<const LocalFieldSpec> build_local(long p, long fprime, int m);
  long p_ = 0, fprime_ = 1, ppow_ = 1;
  int m_ = -1, r_ = 1, e_ = 1, Nmax_ = 1;
  std::vector<std::uint64_t> g_;
  std::vector<std::vector<std::uint64_t>> xpow_;
  std::vector<std::vector<std::pair<int, int>>> ypow_;
  std::vector<std::uint64_t> trace_;
};
using LocalPtr = std::shared_ptr<const LocalFieldSpec>;

// Memoized. Throws InvalidArgument if p divides f' or p is not an odd prime.
LocalPtr build_local(long p, long fprime, int m);

// Largest N with p^N comfortably inside 64-bit arithmetic.
int max_precision_for(long p);

// An element of O_L known modulo p^N. Coefficient (i, j) multiplies x^i y^j.
class LocalElement {
 public:
  LocalElement() = default;
  LocalElement(LocalPtr L, int N);
  static LocalElement from_int(LocalPtr L, int N, long long v);
  static LocalElement from_modpn(LocalPtr L, const ModPN& v);
  // x^a y^b for integers a, b (reduced using x^{f'} = y^{p^{m+1}} = 1).
  static LocalElement monomial(LocalPtr L, int N, long a, long b);

  const LocalPtr& field() const { return L_; }
  int precision() const { return N_; }
  std::uint64_t modulus() const { return mod_; }
  std::uint64_t coeff(int i, int j) const { return c_[j * L_->r() + i]; }
  void set_coeff(int i, int j, std::uint64_t v) { c_[j * L_->r() + i] = v % mod_; }
  const std::vector<std::uint64_t>& raw() const { return c_; }

  bool is_zero() const;
  // Normalized valuation with v(p) = e; returns e * N for zero.
  int valuation() const;
  // The value lies in Z_p (only the constant coefficient is nonzero).
  bool is_rational() const;
  ModPN constant_term() const;

  LocalElement reduce(int N) const;
  // Exact division by p^k; NonIntegral if some coefficient is not divisible.
  LocalElement divide_by_p(int k) const;
  // Same residues, read at a higher precision (the caller vouches for the lift).
  LocalElement lift_precision(int N) const;

  LocalElement operator-() const;
  LocalElement& operator+=(const LocalElement& o);
  LocalElement& operator-=(const LocalElement& o);
  friend LocalElement operator+(LocalElement a, const LocalElement& b) { return a += b; }
  friend LocalElement operator-(LocalElement a, const LocalElement& b) { return a -= b; }
  friend LocalElement operator*(const LocalElement& a, const LocalElement& b);
  LocalElement scaled(const ModPN& s) const;
  LocalElement pow(std::uint64_t k) const;
  friend bool operator==(const LocalElement& a, const LocalElement& b);
  friend bool operator!=(const LocalElement& a, const LocalElement& b) { return !(a == b); }

  // Inverse of a unit; NonUnitResidue otherwise.
  LocalElement inverse() const;
  // The automorphism x -> x^{dx}, y -> y^{dy}; dx must be a power of p mod f'.
  LocalElement automorphism(long dx, long dy) const;

  std::string to_string() const;

 private:
  void require_same(const LocalElement& o) const;
  LocalPtr L_;
  int N_ = 0;
  std::uint64_t mod_ = 1;
  std::vector<std::uint64_t> c_;
};

// All automorphisms of L/Q_p as (dx, dy) pairs.
std::vector<std::pair<long, long>> local_automorphisms(const LocalPtr& L);

// p-adic logarithm of a principal unit. The result has the input precision;
// NotPrincipalUnit if v(u - 1) < 1, NonIntegral if log u is not integral.
LocalElement log_p(const LocalElement& u);
// exp of z with v(z) > e/(p-1); NonIntegral otherwise.
LocalElement exp_p(const LocalElement& z);
ModPN trace_to_Qp(const LocalElement& x);
ModPN norm_to_Qp(const LocalElement& x);

// Embedding of Q(xi_e) (p not dividing e) into the unramified L = Q_p(xi_e) via the canonical factor.
class UnramifiedEmbedding {
 public:
  UnramifiedEmbedding(long p, long e, int N);
  const LocalPtr& field() const { return L_; }
  // Image of z (p-integral coefficients); NonIntegral otherwise.
  LocalElement image(const CyclotomicNumber& z) const;
  // z = a mod the canonical prime.
  bool congruent_mod_p(const CyclotomicNumber& z, long a) const;

 private:
  LocalPtr L_;
  long e_;
  int N_;
};

// Valuation of a nonzero z in Q(xi_e), p not dividing e, at the prime above p
// cut out by the canonical Hensel factor of Phi_e.
int prime_valuation(const CyclotomicNumber& z, long p);

}  // namespace starklab
