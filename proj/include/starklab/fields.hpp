#pragma once

#include <optional>
#include <set>
#include <vector>

#include "starklab/group.hpp"

namespace starklab {

// K = Q(xi_f)^H inside k = Q(xi_f)^{H'}. Gamma = Gal(K/Q), G = Gal(K/k), Gbar = Gal(K^+/k).
class FieldSpec {
 public:
  explicit FieldSpec(long f, const std::vector<long>& H_gens = {},
                     const std::optional<std::vector<long>>& Hprime_gens = std::nullopt);

  long modulus() const { return f_; }
  const std::vector<long>& H() const { return Gamma_->H(); }
  const std::vector<long>& Hprime() const { return G_->Hprime(); }
  const GroupPtr& Gamma() const { return Gamma_; }
  const GroupPtr& G() const { return G_; }
  // Gal(K^+/k); throws NotCM when K is not CM.
  GroupPtr Gbar() const;
  bool k_is_Q() const { return static_cast<long>(Hprime().size()) == euler_phi(f_); }
  // d = [k : Q].
  long degree_k() const { return euler_phi(f_) / static_cast<long>(Hprime().size()); }
  // -1 is not in H (K totally imaginary) and -1 is in H' (k totally real).
  bool is_CM() const;
  void require_CM() const;
  long conductor() const { return conductor_; }
  // The same field K viewed over Q.
  FieldSpec over_Q() const { return FieldSpec(f_, H()); }

 private:
  long f_;
  GroupPtr Gamma_, G_;
  long conductor_;
};

long conductor(const FieldSpec& spec);

// Frobenius of q in Gamma = Gal(K/Q). RamifiedPrime if q ramifies in K.
int frobenius(const FieldSpec& spec, long q);
// Frobenius in G of a prime of k above q: the class of q^{f(q, k/Q)}.
int frobenius_k(const FieldSpec& spec, long q);
// Inertia and decomposition groups of q in Gamma, as sorted element indices.
std::pair<std::vector<int>, std::vector<int>> inertia_decomposition(const FieldSpec& spec, long q);

// Finite places are stored as rational primes; each stands for every prime
// of k above it.
struct PlaceSet {
  bool infinity = true;
  std::set<long> primes;

  bool contains(long q) const { return primes.count(q) > 0; }
  PlaceSet with(long q) const {
    PlaceSet s = *this;
    s.primes.insert(q);
    return s;
  }
};

// {oo} together with the primes dividing the conductor of K (S^0(K/Q)).
PlaceSet minimal_place_set(const FieldSpec& spec);
// Rational primes ramified in K/k.
std::set<long> ramified_in_K_over_k(const FieldSpec& spec);
// Number of primes of k above q.
long primes_of_k_above(const FieldSpec& spec, long q);
// D_q(K/k) as element indices of G.
std::vector<int> decomposition_group_G(const FieldSpec& spec, long q);
// Image of D_q(K/k) in Gbar, as element indices of Gbar.
std::vector<int> decomposition_group_Gbar(const FieldSpec& spec, long q);
// |S| counted as places of k.
long place_count(const FieldSpec& spec, const PlaceSet& S);
// Throws BadPlaceSet unless S contains oo, the primes above p and those ramified in K/k.
void require_S1(const FieldSpec& spec, const PlaceSet& S, long p);
// Rational primes q such that S misses the primes of k above q while q ramifies in k.
std::set<long> bad_primes(const FieldSpec& spec, const PlaceSet& S);

// r_S(phi) for a character of Gbar.
long r_S(const FieldSpec& spec, const PlaceSet& S, const Character& phi);
// e_{S,d,Gbar} by the closed formula (both branches).
GroupRingElem<Rational> eigen_idempotent(const FieldSpec& spec, const PlaceSet& S);

}  // namespace starklab
