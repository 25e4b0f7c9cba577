#include "starklab/lvalues.hpp"

#include <algorithm>

#include "starklab/padic.hpp"

namespace starklab {

CyclotomicNumber DirichletCharacter::value(long a) const {
  long t = log[mod_floor(a, modulus)];
  if (t < 0) return CyclotomicNumber(e);
  return CyclotomicNumber::xi(e, t);
}

bool DirichletCharacter::is_trivial() const {
  return std::all_of(log.begin(), log.end(), [](long t) { return t <= 0; });
}

bool DirichletCharacter::is_odd() const { return modulus > 2 && 2 * log[modulus - 1] == e; }

long DirichletCharacter::conductor() const {
  for (long f0 = 1; f0 < modulus; ++f0) {
    if (modulus % f0 != 0) continue;
    bool ok = true;
    for (long a = 1; a < modulus && ok; a += f0)
      if (log[a] > 0) ok = false;
    if (ok) return f0;
  }
  return modulus;
}

DirichletCharacter DirichletCharacter::primitive() const {
  const long f0 = conductor();
  DirichletCharacter r;
  r.modulus = f0;
  r.e = e;
  r.log.assign(f0, -1);
  for (long b = 0; b < f0; ++b)
    if (gcd_l(b, f0) == 1) r.log[b] = log[lift_unit(b, f0, modulus) % modulus];
  if (f0 == 1) r.log[0] = 0;
  return r;
}

DirichletCharacter DirichletCharacter::inverse() const {
  DirichletCharacter r = *this;
  for (auto& t : r.log)
    if (t > 0) t = e - t;
  return r;
}

DirichletCharacter dirichlet_character(const FieldSpec& K, const Character& chi) {
  const auto& Gam = K.Gamma();
  if (!same_group(chi.group(), Gam)) fail(ErrorKind::InvalidArgument, "character is not defined on Gal(K/Q)");
  DirichletCharacter r;
  r.modulus = K.modulus();
  r.e = chi.value_modulus();
  r.log.assign(r.modulus, -1);
  for (long a = 0; a < r.modulus; ++a)
    if (gcd_l(a, r.modulus) == 1) r.log[a] = chi.log_value(Gam->index_of(a));
  if (r.modulus == 1) r.log[0] = 0;
  return r;
}

std::vector<DirichletCharacter> primitive_characters(long f) {
  std::vector<DirichletCharacter> out;
  FieldSpec K(f);
  for (const auto& chi : Character::all(K.Gamma())) {
    auto d = dirichlet_character(K, chi);
    if (d.conductor() == f) out.push_back(d);
  }
  return out;
}

ThetaElement stickelberger_theta0(const FieldSpec& K, const PlaceSet& S) {
  const long f = K.modulus();
  const auto& Gam = K.Gamma();
  GroupRingElem<Rational> th(Gam, Rational(0));
  for (long a = 1; a <= f; ++a) {
    if (gcd_l(a, f) != 1) continue;
    th[Gam->inv(Gam->index_of(a % f))] += Rational(1, 2) - Rational(a, f);
  }
  for (long q : S.primes) {
    if (f % q == 0) continue;
    auto factor = GroupRingElem<Rational>::one(Gam, Rational(0));
    factor[Gam->inv(frobenius(K, q))] -= Rational(1);
    th = th * factor;
  }
  return ThetaElement{to_cyclotomic(th, 1), false, S};
}

CyclotomicNumber bernoulli_B1(const DirichletCharacter& chi) {
  if (chi.is_trivial()) fail(ErrorKind::InvalidArgument, "B_{1,chi} is only handled for nontrivial chi");
  if (chi.conductor() != chi.modulus) fail(ErrorKind::InvalidArgument, "B_{1,chi} needs a primitive character");
  CyclotomicNumber acc(chi.e);
  for (long a = 1; a < chi.modulus; ++a) {
    if (chi.log[a] < 0) continue;
    acc += chi.value(a) * Rational(a);
  }
  return acc * Rational(1, chi.modulus);
}

CyclotomicNumber gauss_sum(const DirichletCharacter& chi) {
  const long L = lcm_l(chi.modulus, chi.e);
  CyclotomicNumber acc(L);
  for (long a = 1; a < chi.modulus; ++a) {
    if (chi.log[a] < 0) continue;
    acc += CyclotomicNumber::xi(L, chi.log[a] * (L / chi.e) + a * (L / chi.modulus));
  }
  return acc;
}

ThetaElement a_minus(const FieldSpec& K, const PlaceSet& S) {
  K.require_CM();
  if (!S.infinity) fail(ErrorKind::BadPlaceSet, "S must contain the infinite place");
  const long f = K.modulus();
  const long f0 = K.conductor();
  for (auto [q, e] : factorize(f0))
    if (!S.contains(q)) fail(ErrorKind::BadPlaceSet, "S misses the ramified prime " + std::to_string(q));

  const auto& Gam = K.Gamma();
  auto G0 = AbelianGroup::make(f0, {});
  const auto xi = CyclotomicNumber::xi(f0);
  const auto w = xi / (CyclotomicNumber(f0, Rational(1)) - xi);
  GroupRingElem<CyclotomicNumber> top(G0, CyclotomicNumber(f0));
  for (int a = 0; a < G0->order(); ++a) top[G0->inv(a)] = cyc_galois(G0->rep(a), w) * Rational(1, f0);
  top = top * to_cyclotomic(e_minus(G0), f0);

  GroupRingElem<CyclotomicNumber> r(Gam, CyclotomicNumber(f));
  for (int a = 0; a < G0->order(); ++a) {
    if (top[a].is_zero()) continue;
    r[Gam->index_of(lift_unit(G0->rep(a), f0, f))] += cyc_embed(top[a], f);
  }
  for (long q : S.primes) {
    if (f0 % q == 0) continue;
    auto factor = GroupRingElem<CyclotomicNumber>::one(Gam, CyclotomicNumber(f));
    factor[Gam->inv(frobenius(K, q))] -= CyclotomicNumber(f, Rational(1, q));
    r = r * factor;
  }
  return ThetaElement{r, true, S};
}

GroupRingElem<CyclotomicNumber> a_minus_relative_star(const FieldSpec& K, const PlaceSet& S_Q) {
  if (!bad_primes(K, S_Q).empty())
    fail(ErrorKind::HypothesisViolated, "relative a^- is only implemented when Bad(S) is empty");
  const auto& Gam = K.Gamma();
  const auto& G = K.G();
  auto x = a_minus(K.over_Q(), S_Q).value.star();
  std::vector<int> GinGam;
  for (int g = 0; g < G->order(); ++g) GinGam.push_back(Gam->index_of(G->rep(g)));
  auto C = Gam->subgroup(GinGam);
  auto d = det_over_subgroup(x, C);
  GroupRingElem<CyclotomicNumber> r(G, CyclotomicNumber(K.modulus()));
  for (int c = 0; c < C->order(); ++c) r[G->index_of(C->rep(c))] = d[c];
  return r;
}

namespace {

// The character of Gamma_K restricted from phi on G = Gamma_K (k = Q).
long character_conductor(const FieldSpec& K, const Character& phi) {
  return dirichlet_character(K, phi).conductor();
}

}  // namespace

PndivgRhs pndivg_rhs(const FieldSpec& K, const PlaceSet& S, long p, const Character& phi) {
  if (!K.k_is_Q()) fail(ErrorKind::HypothesisViolated, "pndivg_rhs is implemented for k = Q only");
  const auto& G = K.G();
  if (G->order() % p == 0) fail(ErrorKind::PDividesGroupOrder, "p divides |G|");
  if (!phi.is_odd()) fail(ErrorKind::EvenCharacter, "phi must be odd");
  const long e = phi.value_modulus();
  const long fphi = character_conductor(K, phi);
  auto chi = dirichlet_character(K, phi).primitive();

  PndivgRhs out;
  // L(0, phi^{-1}) = -B_{1, phi^{-1}} for the primitive character
  CyclotomicNumber gen = -bernoulli_B1(chi.inverse());
  for (long q : S.primes) {
    if (q == p || fphi % q == 0) continue;
    gen *= CyclotomicNumber(e, Rational(1)) - chi.value(q) * Rational(1, q);
  }
  out.generator = gen;

  // mu_{p^oo}(K_p) / mu_{p^oo}(K): trivial unless p | f. When p | f (so m = 0 as p does not
  // divide |G|), its phi-part is nonzero iff phi agrees with the Teichmuller character
  // on the decomposition group at p, and phi is not the Teichmuller character itself.
  if (K.modulus() % p == 0) {
    auto [T, D] = inertia_decomposition(K, p);
    UnramifiedEmbedding emb(p, e, 4);
    auto teich_match = [&](int g) {
      long a = mod_floor(K.Gamma()->rep(g), p);
      return emb.congruent_mod_p(phi.value(g), a);
    };
    bool on_D = std::all_of(D.begin(), D.end(), teich_match);
    bool everywhere = true;
    for (int g = 0; g < G->order() && everywhere; ++g) everywhere = teich_match(g);
    out.mu_valuation = (on_D ? 1 : 0) - (everywhere ? 1 : 0);
  }
  out.valuation = out.mu_valuation + prime_valuation(gen, p);
  return out;
}

}  // namespace starklab
