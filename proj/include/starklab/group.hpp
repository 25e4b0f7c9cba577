#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "starklab/exact.hpp"

namespace starklab {

// Closure of a generator list inside (Z/f)^x, returned sorted.
std::vector<long> unit_subgroup(long f, const std::vector<long>& gens);
// Generators of (Z/f)^x: one per odd prime-power component, plus -1 and 5 for 2^v.
std::vector<long> unit_group_generators(long f);

class AbelianGroup;
using GroupPtr = std::shared_ptr<const AbelianGroup>;

// The subquotient H'/H of (Z/f)^x. Elements are indexed 0..order()-1 in
// increasing order of their smallest residue representative; index 0 is the
// identity.
class AbelianGroup {
 public:
  // H' defaults to all of (Z/f)^x.
  static GroupPtr make(long f, const std::vector<long>& H_gens,
                       const std::optional<std::vector<long>>& Hprime_gens = std::nullopt);

  long modulus() const { return f_; }
  int order() const { return static_cast<int>(reps_.size()); }
  long rep(int i) const { return reps_[i]; }
  // Index of the class of a, or -1 if a is not a unit lying in H'.
  int index_of(long a) const;
  int mul(int i, int j) const { return mul_[i * order() + j]; }
  int inv(int i) const { return inv_[i]; }
  int pow(int i, long e) const;
  int element_order(int i) const;

  const std::vector<long>& H() const { return H_; }
  const std::vector<long>& Hprime() const { return Hp_; }
  bool is_full() const { return static_cast<long>(Hp_.size()) == euler_phi(f_); }

  // Invariant factors d_1 | d_2 | ... (all > 1) and matching basis elements.
  const std::vector<long>& invariant_factors() const { return inv_factors_; }
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<long>& coords(int i) const { return coords_[i]; }
  long exponent() const { return exponent_; }

  // Index of the class of -1 when it is a nontrivial element; nullopt otherwise.
  std::optional<int> complex_conjugation() const;

  // Element indices of the subgroup generated by the given indices (sorted).
  std::vector<int> subgroup_generated(const std::vector<int>& gens) const;
  // The subgroup (with the same H) spanned by the given element indices.
  GroupPtr subgroup(const std::vector<int>& elems) const;
  // The quotient by the subgroup generated by extra residues.
  GroupPtr quotient(const std::vector<long>& extra_H_gens) const;

 private:
  AbelianGroup() = default;
  void build_structure(const std::vector<long>& gens);

  long f_ = 1;
  std::vector<long> H_, Hp_;
  std::vector<long> reps_;
  std::vector<int> index_;  // residue -> index or -1
  std::vector<int> mul_, inv_;
  std::vector<long> inv_factors_;
  std::vector<int> basis_;
  std::vector<std::vector<long>> coords_;
  long exponent_ = 1;
};

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a == b || (a->modulus() == b->modulus() && a->H() == b->H() && a->Hprime() == b->Hprime());
}

// Smith normal form over Z with the column transform recorded: returns
// (diagonal, Q^{-1}) where P*M*Q = diag for some unimodular P.
std::pair<std::vector<Integer>, std::vector<std::vector<Integer>>> smith_normal_form(
    std::vector<std::vector<Integer>> M, size_t cols);

// A one-dimensional character, chi(h_j) = xi_{d_j}^{k_j} on the invariant-factor basis.
class Character {
 public:
  Character(GroupPtr G, std::vector<long> k);
  static std::vector<Character> all(const GroupPtr& G);
  static Character trivial(const GroupPtr& G);

  const GroupPtr& group() const { return G_; }
  const std::vector<long>& exponents() const { return k_; }
  // t with chi(g) = xi_e^t, e = exponent of the group.
  long log_value(int g) const;
  CyclotomicNumber value(int g) const;  // in Q(xi_e)
  long value_modulus() const { return G_->exponent(); }
  bool is_trivial() const;
  long order() const;
  Character inverse() const;
  Character operator*(const Character& o) const;
  bool operator==(const Character& o) const { return G_ == o.G_ && k_ == o.k_; }
  bool is_odd() const;  // chi(c) = -1; NoComplexConjugation if c is absent

 private:
  GroupPtr G_;
  std::vector<long> k_;
};

// ---------------------------------------------------------------------------

namespace detail {
// Unqualified so that coefficient types declared after this header are found by ADL.
template <class R>
bool coeff_is_zero(const R& x) {
  return is_zero(x);
}
}  // namespace detail

template <class R>
class GroupRingElem {
 public:
  GroupRingElem(GroupPtr G, const R& proto) : G_(std::move(G)), zero_(zero_like(proto)), c_(G_->order(), zero_) {}

  static GroupRingElem basis(const GroupPtr& G, int g, const R& proto) {
    GroupRingElem x(G, proto);
    x.c_[g] = one_like(proto);
    return x;
  }
  static GroupRingElem one(const GroupPtr& G, const R& proto) { return basis(G, 0, proto); }

  const GroupPtr& group() const { return G_; }
  const R& zero() const { return zero_; }
  int size() const { return static_cast<int>(c_.size()); }
  R& operator[](int g) { return c_[g]; }
  const R& operator[](int g) const { return c_[g]; }
  const std::vector<R>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& c : c_)
      if (!detail::coeff_is_zero(c)) return false;
    return true;
  }

  GroupRingElem operator-() const {
    GroupRingElem r(*this);
    for (auto& c : r.c_) c = -c;
    return r;
  }
  GroupRingElem& operator+=(const GroupRingElem& o) {
    check(o);
    for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  GroupRingElem& operator-=(const GroupRingElem& o) {
    check(o);
    for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend GroupRingElem operator+(GroupRingElem a, const GroupRingElem& b) { return a += b; }
  friend GroupRingElem operator-(GroupRingElem a, const GroupRingElem& b) { return a -= b; }
  friend GroupRingElem operator*(const GroupRingElem& a, const GroupRingElem& b) {
    a.check(b);
    GroupRingElem r(a.G_, a.zero_);
    for (int i = 0; i < a.size(); ++i) {
      if (detail::coeff_is_zero(a.c_[i])) continue;
      for (int j = 0; j < b.size(); ++j) {
        if (detail::coeff_is_zero(b.c_[j])) continue;
        r.c_[a.G_->mul(i, j)] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }
  GroupRingElem scaled(const R& s) const {
    GroupRingElem r(*this);
    for (auto& c : r.c_) c = c * s;
    return r;
  }
  // Multiplication by the group element g.
  GroupRingElem translated(int g) const {
    GroupRingElem r(G_, zero_);
    for (int i = 0; i < size(); ++i) r.c_[G_->mul(i, g)] = c_[i];
    return r;
  }
  // The involution sum a_h h -> sum a_h h^{-1}.
  GroupRingElem star() const {
    GroupRingElem r(G_, zero_);
    for (int i = 0; i < size(); ++i) r.c_[G_->inv(i)] = c_[i];
    return r;
  }
  friend bool operator==(const GroupRingElem& a, const GroupRingElem& b) {
    return same_group(a.G_, b.G_) && a.c_ == b.c_;
  }
  friend bool operator!=(const GroupRingElem& a, const GroupRingElem& b) { return !(a == b); }

  template <class F>
  auto map(F fn) const -> GroupRingElem<decltype(fn(std::declval<const R&>()))> {
    using S = decltype(fn(std::declval<const R&>()));
    std::vector<S> vals;
    vals.reserve(c_.size());
    for (const auto& c : c_) vals.push_back(fn(c));
    GroupRingElem<S> r(G_, vals.empty() ? S() : vals[0]);
    for (int i = 0; i < size(); ++i) r[i] = vals[i];
    return r;
  }

 private:
  void check(const GroupRingElem& o) const {
    if (!same_group(G_, o.G_)) fail(ErrorKind::InvalidArgument, "group ring elements over different groups");
  }
  GroupPtr G_;
  R zero_;
  std::vector<R> c_;
};

template <class R>
GroupRingElem<R> from_rational(const GroupRingElem<Rational>& x, const R& proto,
                               const std::function<R(const Rational&)>& conv) {
  GroupRingElem<R> r(x.group(), proto);
  for (int i = 0; i < x.size(); ++i) r[i] = conv(x[i]);
  return r;
}

// Determinant of a square matrix over a commutative ring, by Laplace expansion
// memoized over column subsets (division-free; the ring may have zero divisors).
template <class T>
T determinant(const std::vector<std::vector<T>>& m, const T& zero, const T& one) {
  const size_t n = m.size();
  if (n == 0) return one;
  if (n > 20) fail(ErrorKind::InvalidArgument, "determinant dimension too large");
  std::unordered_map<unsigned, T> memo;
  std::function<T(unsigned)> rec = [&](unsigned mask) -> T {
    const int row = static_cast<int>(n) - __builtin_popcount(mask);
    if (mask == 0) return one;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    T acc = zero;
    int before = 0;
    for (size_t j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) continue;
      T term = m[row][j] * rec(mask & ~(1u << j));
      if (before % 2 == 0) acc += term;
      else acc -= term;
      ++before;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec((1u << n) - 1);
}

template <class R>
GroupRingElem<R> gr_determinant(const std::vector<std::vector<GroupRingElem<R>>>& m) {
  if (m.empty()) fail(ErrorKind::InvalidArgument, "empty matrix");
  const auto& G = m[0][0].group();
  const R& z = m[0][0].zero();
  return determinant(m, GroupRingElem<R>(G, z), GroupRingElem<R>::one(G, z));
}

// Image under the quotient map to `target` (same or smaller modulus, larger H).
template <class R>
GroupRingElem<R> restrict_pi(const GroupRingElem<R>& x, const GroupPtr& target) {
  const auto& G = x.group();
  if (G->modulus() % target->modulus() != 0) fail(ErrorKind::InvalidArgument, "restrict_pi: modulus mismatch");
  GroupRingElem<R> r(target, x.zero());
  for (int i = 0; i < x.size(); ++i) {
    if (is_zero(x[i])) continue;
    int j = target->index_of(G->rep(i));
    if (j < 0) fail(ErrorKind::InvalidArgument, "restrict_pi: element outside the target group");
    r[j] += x[i];
  }
  return r;
}

// nu: sends a class of the quotient to the sum of its preimages in `source`.
template <class R>
GroupRingElem<R> corestrict_nu(const GroupRingElem<R>& x, const GroupPtr& source) {
  const auto& Gb = x.group();
  if (source->modulus() % Gb->modulus() != 0) fail(ErrorKind::InvalidArgument, "corestrict_nu: modulus mismatch");
  GroupRingElem<R> r(source, x.zero());
  for (int i = 0; i < source->order(); ++i) {
    int j = Gb->index_of(source->rep(i));
    if (j < 0) fail(ErrorKind::InvalidArgument, "corestrict_nu: source does not map onto the quotient");
    r[i] = x[j];
  }
  return r;
}

template <class R>
GroupRingElem<R> norm_element(const GroupPtr& G, const std::vector<int>& D, const R& proto) {
  GroupRingElem<R> r(G, proto);
  for (int d : D) r[d] = one_like(proto);
  return r;
}

// Determinant of multiplication by x on R[B] viewed as a free R[C]-module.
// The transversal defaults to the first element of each coset in enumeration
// order; an explicit one (one element per coset, any order) may be supplied.
template <class R>
GroupRingElem<R> det_over_subgroup(const GroupRingElem<R>& x, const GroupPtr& C,
                                   const std::optional<std::vector<int>>& transversal = std::nullopt) {
  const auto& B = x.group();
  if (B->modulus() != C->modulus() || B->H() != C->H())
    fail(ErrorKind::InvalidArgument, "det_over_subgroup: C must be a subgroup of B");
  std::vector<int> cinB(C->order());
  for (int c = 0; c < C->order(); ++c) {
    cinB[c] = B->index_of(C->rep(c));
    if (cinB[c] < 0) fail(ErrorKind::InvalidArgument, "det_over_subgroup: C is not contained in B");
  }
  // coset decomposition b = c * t_i
  std::vector<int> coset(B->order(), -1), cpart(B->order(), -1);
  std::vector<int> trans;
  auto add_coset = [&](int b) {
    int i = static_cast<int>(trans.size());
    trans.push_back(b);
    for (int c = 0; c < C->order(); ++c) {
      int e = B->mul(cinB[c], b);
      if (coset[e] >= 0) fail(ErrorKind::InvalidArgument, "transversal has two elements in one coset");
      coset[e] = i;
      cpart[e] = c;
    }
  };
  if (transversal) {
    for (int b : *transversal) add_coset(b);
    if (static_cast<int>(trans.size()) * C->order() != B->order())
      fail(ErrorKind::InvalidArgument, "transversal does not cover B");
  } else {
    for (int b = 0; b < B->order(); ++b)
      if (coset[b] < 0) add_coset(b);
  }
  const size_t s = trans.size();
  std::vector<std::vector<GroupRingElem<R>>> m(s, std::vector<GroupRingElem<R>>(s, GroupRingElem<R>(C, x.zero())));
  for (size_t j = 0; j < s; ++j) {
    for (int b = 0; b < B->order(); ++b) {
      if (is_zero(x[b])) continue;
      int e = B->mul(b, trans[j]);
      m[coset[e]][j][cpart[e]] += x[b];
    }
  }
  return gr_determinant(m);
}

// ---------------------------------------------------------------------------

GroupRingElem<Rational> e_plus(const GroupPtr& G);
GroupRingElem<Rational> e_minus(const GroupPtr& G);
// e_chi = |G|^{-1} sum chi(g) g^{-1}, coefficients in Q(xi_e).
GroupRingElem<CyclotomicNumber> e_chi(const Character& chi);

CyclotomicNumber apply_character(const Character& chi, const GroupRingElem<CyclotomicNumber>& x);
CyclotomicNumber apply_character(const Character& chi, const GroupRingElem<Rational>& x);

GroupRingElem<CyclotomicNumber> to_cyclotomic(const GroupRingElem<Rational>& x, long f);

// kappa_n(g) = a mod p^{n+1} for g the class of a.
ModPN kappa_n(const GroupPtr& G, int g, long p, int n);
// The ring isomorphism (Z/p^{n+1}) Gbar -> (Z/p^{n+1}) G^-, pi(g) -> e^- kappa_n(g) g^{-1}.
GroupRingElem<ModPN> kappa_bar_star(const GroupRingElem<ModPN>& x, const GroupPtr& G, long p, int n);

}  // namespace starklab
