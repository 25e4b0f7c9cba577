#include "starklab/fields.hpp"

#include <algorithm>

namespace starklab {

namespace {

long compute_conductor(long f, const std::vector<long>& H) {
  for (long f0 = 1; f0 <= f; ++f0) {
    if (f % f0 != 0) continue;
    bool ok = true;
    for (long a = 1; a < f && ok; ++a) {
      if (gcd_l(a, f) != 1 || a % f0 != 1 % f0) continue;
      if (!std::binary_search(H.begin(), H.end(), a)) ok = false;
    }
    if (ok) return f0;
  }
  return f;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

FieldSpec::FieldSpec(long f, const std::vector<long>& H_gens, const std::optional<std::vector<long>>& Hprime_gens) : f_(f) {
  if (f < 1) fail(ErrorKind::InvalidArgument, "f must be positive");
  Gamma_ = AbelianGroup::make(f, H_gens);
  G_ = Hprime_gens ? AbelianGroup::make(f, H_gens, *Hprime_gens) : Gamma_;
  conductor_ = compute_conductor(f, Gamma_->H());
}

bool FieldSpec::is_CM() const {
  const long m1 = f_ - 1;
  bool minus_in_H = std::binary_search(H().begin(), H().end(), m1 % f_);
  bool minus_in_Hp = std::binary_search(Hprime().begin(), Hprime().end(), m1 % f_);
  return f_ > 2 && !minus_in_H && minus_in_Hp;
}

void FieldSpec::require_CM() const {
  if (!is_CM()) fail(ErrorKind::NotCM, "K must be CM and k totally real");
}

GroupPtr FieldSpec::Gbar() const {
  require_CM();
  return G_->quotient({f_ - 1});
}

long conductor(const FieldSpec& spec) { return spec.conductor(); }

std::pair<std::vector<int>, std::vector<int>> inertia_decomposition(const FieldSpec& spec, long q) {
  const long f = spec.modulus();
  const auto& Gam = spec.Gamma();
  auto [v, fq] = split_p_part(f, q);
  const long qv = ipow(q, v);
  std::vector<int> T;
  for (long a = 1; a < f || (f == 1 && a == 1); ++a) {
    if (f > 1 && (gcd_l(a, f) != 1 || a % fq != 1 % fq)) continue;
    T.push_back(Gam->index_of(a));
  }
  T = Gam->subgroup_generated(T);
  long frob = crt_pair(q % fq, fq, 1, qv);
  if (f == 1) frob = 0;
  std::vector<int> gens = T;
  gens.push_back(Gam->index_of(frob));
  return {T, Gam->subgroup_generated(gens)};
}

int frobenius(const FieldSpec& spec, long q) {
  auto [T, D] = inertia_decomposition(spec, q);
  if (T.size() > 1) fail(ErrorKind::RamifiedPrime, std::to_string(q) + " ramifies in K");
  const long f = spec.modulus();
  auto [v, fq] = split_p_part(f, q);
  return spec.Gamma()->index_of(crt_pair(q % fq, fq, 1, ipow(q, v)));
}

int frobenius_k(const FieldSpec& spec, long q) {
  const auto& Gam = spec.Gamma();
  const auto& G = spec.G();
  auto [T, D] = inertia_decomposition(spec, q);
  std::vector<int> GinGam;
  for (int g = 0; g < G->order(); ++g) GinGam.push_back(Gam->index_of(G->rep(g)));
  for (int t : T)
    if (t != 0 && contains(GinGam, t)) fail(ErrorKind::RamifiedPrime, std::to_string(q) + " ramifies in K/k");
  auto [v, fq] = split_p_part(spec.modulus(), q);
  int a = Gam->index_of(crt_pair(q % fq, fq, 1, ipow(q, v)));
  std::vector<int> gens = GinGam;
  gens.insert(gens.end(), T.begin(), T.end());
  auto GT = Gam->subgroup_generated(gens);
  int at = a;
  while (!std::binary_search(GT.begin(), GT.end(), at)) at = Gam->mul(at, a);
  // the unique element of D cap G congruent to a^t modulo T
  for (int d : D) {
    if (!contains(GinGam, d)) continue;
    if (contains(T, Gam->mul(d, Gam->inv(at)))) return G->index_of(Gam->rep(d));
  }
  fail(ErrorKind::InvalidArgument, "Frobenius not found in D cap G");
}

PlaceSet minimal_place_set(const FieldSpec& spec) {
  PlaceSet S;
  for (auto [q, e] : factorize(spec.conductor())) S.primes.insert(q);
  return S;
}

std::set<long> ramified_in_K_over_k(const FieldSpec& spec) {
  std::set<long> out;
  const auto& Gam = spec.Gamma();
  const auto& G = spec.G();
  for (auto [q, e] : factorize(spec.modulus())) {
    auto [T, D] = inertia_decomposition(spec, q);
    for (int t : T)
      if (t != 0 && G->index_of(Gam->rep(t)) >= 0) out.insert(q);
  }
  return out;
}

long primes_of_k_above(const FieldSpec& spec, long q) {
  const auto& Gam = spec.Gamma();
  const auto& G = spec.G();
  auto [T, D] = inertia_decomposition(spec, q);
  std::vector<int> gens = D;
  for (int g = 0; g < G->order(); ++g) gens.push_back(Gam->index_of(G->rep(g)));
  return Gam->order() / static_cast<long>(Gam->subgroup_generated(gens).size());
}

std::vector<int> decomposition_group_G(const FieldSpec& spec, long q) {
  auto [T, D] = inertia_decomposition(spec, q);
  std::vector<int> out;
  for (int d : D) {
    int g = spec.G()->index_of(spec.Gamma()->rep(d));
    if (g >= 0) out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> decomposition_group_Gbar(const FieldSpec& spec, long q) {
  auto Gb = spec.Gbar();
  std::vector<int> out;
  for (int g : decomposition_group_G(spec, q)) out.push_back(Gb->index_of(spec.G()->rep(g)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long place_count(const FieldSpec& spec, const PlaceSet& S) {
  long n = S.infinity ? spec.degree_k() : 0;
  for (long q : S.primes) n += primes_of_k_above(spec, q);
  return n;
}

void require_S1(const FieldSpec& spec, const PlaceSet& S, long p) {
  if (!S.infinity) fail(ErrorKind::BadPlaceSet, "S must contain the infinite places");
  if (!S.contains(p)) fail(ErrorKind::BadPlaceSet, "S must contain the primes above p");
  for (long q : ramified_in_K_over_k(spec))
    if (!S.contains(q)) fail(ErrorKind::BadPlaceSet, "S must contain the ramified prime " + std::to_string(q));
}

std::set<long> bad_primes(const FieldSpec& spec, const PlaceSet& S) {
  std::set<long> out;
  FieldSpec k_over_Q(spec.modulus(), spec.Hprime());
  for (auto [q, e] : factorize(spec.modulus())) {
    if (S.contains(q)) continue;
    auto [T, D] = inertia_decomposition(k_over_Q, q);
    if (T.size() > 1) out.insert(q);
  }
  return out;
}

long r_S(const FieldSpec& spec, const PlaceSet& S, const Character& phi) {
  if (phi.is_trivial()) return place_count(spec, S) - 1;
  long r = spec.degree_k();
  for (long q : S.primes) {
    bool trivial_on_D = true;
    for (int d : decomposition_group_Gbar(spec, q))
      if (phi.log_value(d) != 0) trivial_on_D = false;
    if (trivial_on_D) r += primes_of_k_above(spec, q);
  }
  return r;
}

GroupRingElem<Rational> eigen_idempotent(const FieldSpec& spec, const PlaceSet& S) {
  auto Gb = spec.Gbar();
  const long d = spec.degree_k();
  const long count = place_count(spec, S);
  if (!S.infinity || count < d + 1) fail(ErrorKind::BadPlaceSet, "S needs a finite place (|S| >= d + 1)");
  auto one = GroupRingElem<Rational>::one(Gb, Rational(0));
  auto factor = [&](long q) {
    auto D = decomposition_group_Gbar(spec, q);
    auto N = norm_element(Gb, D, Rational(0));
    return one - N.scaled(Rational(1, static_cast<long>(D.size())));
  };
  if (count > d + 1) {
    auto e = one;
    for (long q : S.primes)
      for (long i = 0; i < primes_of_k_above(spec, q); ++i) e = e * factor(q);
    return e;
  }
  long q = *S.primes.begin();
  std::vector<int> all(Gb->order());
  for (int i = 0; i < Gb->order(); ++i) all[i] = i;
  auto e0 = norm_element(Gb, all, Rational(0)).scaled(Rational(1, Gb->order()));
  return factor(q) + e0;
}

}  // namespace starklab
