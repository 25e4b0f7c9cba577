#pragma once

#include <vector>

#include "starklab/fields.hpp"

namespace starklab {

// A group-ring element over Gamma_K = Gal(K/Q) carrying L-value data.
// at_one = false: Theta_{K/Q,S}(0); at_one = true: a^-_{K/Q,S}.
struct ThetaElement {
  GroupRingElem<CyclotomicNumber> value;
  bool at_one = false;
  PlaceSet S;
};

// A Dirichlet character mod `modulus` with values in Q(xi_e):
// chi(a) = xi_e^{log[a]}, and log[a] = -1 when gcd(a, modulus) > 1.
struct DirichletCharacter {
  long modulus = 1;
  long e = 1;
  std::vector<long> log;

  CyclotomicNumber value(long a) const;
  bool is_trivial() const;
  bool is_odd() const;
  long conductor() const;
  DirichletCharacter primitive() const;
  DirichletCharacter inverse() const;
};

// chi on Gamma_K viewed as a Dirichlet character mod f = K.modulus().
DirichletCharacter dirichlet_character(const FieldSpec& K, const Character& chi);
// Every primitive Dirichlet character of conductor exactly f.
std::vector<DirichletCharacter> primitive_characters(long f);

// Theta_{K/Q,S}(0) = sum (1/2 - a/f) sigma_a^{-1} times (1 - sigma_q^{-1}) for q in S not dividing f,
// projected to Gamma_K. Coefficients are rational (stored in Q(xi_1)).
ThetaElement stickelberger_theta0(const FieldSpec& K, const PlaceSet& S);

// B_{1,chi} = (1/f) sum_{a=1}^{f} chi(a) a, for chi primitive and nontrivial.
CyclotomicNumber bernoulli_B1(const DirichletCharacter& chi);

// Gauss sum sum_a chi(a) xi_f^a in Q(xi_lcm(f, e)).
CyclotomicNumber gauss_sum(const DirichletCharacter& chi);

// a^-_{K/Q,S} from the cyclotomic formula at the conductor f0 of K, projected to
// Gamma_K, with Euler factors (1 - q^{-1} sigma_q^{-1}) for q in S not dividing f0.
// Coefficients live in Q(xi_f), f = K.modulus().
ThetaElement a_minus(const FieldSpec& K, const PlaceSet& S);

// a^{-,*}_{K/k,S_Q(k)} as det over Q(xi_f)G of multiplication by a^{-,*}_{K/Q,S_Q} on Q(xi_f)Gamma.
// Only Bad(S) = {} is supported.
GroupRingElem<CyclotomicNumber> a_minus_relative_star(const FieldSpec& K, const PlaceSet& S_Q);

// Right-hand side of the p-does-not-divide-|G| theorem for k = Q and an odd character phi of G:
// the valuation at the canonical prime of Q(xi_e) above p of
// [mu-order ideal] * prod (1 - q^{-1} phi^(q)) * L(0, phi^^{-1}).
struct PndivgRhs {
  int valuation = 0;
  int mu_valuation = 0;
  CyclotomicNumber generator;  // Euler factors times L(0, phi^^{-1}), in Q(xi_e)
};
PndivgRhs pndivg_rhs(const FieldSpec& K, const PlaceSet& S, long p, const Character& phi);

}  // namespace starklab
