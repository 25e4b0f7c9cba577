#include "starklab/semilocal.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>

namespace starklab {

std::shared_ptr<const SemilocalModel> SemilocalModel::get(long f, long p) {
  static std::mutex mu;
  static std::map<std::pair<long, long>, ModelPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find({f, p}); it != cache.end()) return it->second;

  auto M = std::shared_ptr<SemilocalModel>(new SemilocalModel());
  M->f_ = f;
  M->p_ = p;
  auto [v, fp] = split_p_part(f, p);
  M->L_ = build_local(p, fp, v - 1);
  const long ppow = M->L_->ppow();
  M->alpha_ = fp > 1 ? inv_mod(ppow % fp, fp) : 0;
  M->beta_ = ppow > 1 ? inv_mod(fp % ppow, ppow) : 0;

  std::vector<bool> in_p_orbit(fp, false);
  for (long t = 1 % fp, k = 0; k <= fp; ++k, t = t * p % fp) in_p_orbit[t] = true;
  std::vector<long> D;
  for (long d = 1; d < f; ++d)
    if (gcd_l(d, f) == 1 && in_p_orbit[d % fp]) D.push_back(d);
  M->coset_.assign(f, -1);
  for (long a = 1; a < f; ++a) {
    if (gcd_l(a, f) != 1 || M->coset_[a] >= 0) continue;
    const int P = static_cast<int>(M->reps_.size());
    M->reps_.push_back(a);
    for (long d : D) M->coset_[a * d % f] = P;
  }
  cache.emplace(std::make_pair(f, p), M);
  return M;
}

std::pair<int, long> SemilocalModel::split(long a) const {
  a = mod_floor(a, f_);
  const int P = coset_[a];
  if (P < 0) fail(ErrorKind::NonUnitResidue, "not a unit mod f");
  return {P, a * inv_mod(reps_[P], f_) % f_};
}

LocalElement SemilocalModel::X_power(long k, int N) const {
  k = mod_floor(k, f_);
  return LocalElement::monomial(L_, N, alpha_ * k, beta_ * k);
}

LocalElement SemilocalModel::iota(int P, const CyclotomicNumber& z, int N) const {
  if (f_ % z.modulus() != 0) fail(ErrorKind::InvalidArgument, "number does not lie in Q(xi_f)");
  const CyclotomicNumber w = cyc_embed(z, f_);
  const auto& c = w.coeffs();
  LocalElement out(L_, N);
  for (size_t k = 0; k < c.size(); ++k) {
    if (sgn(c[k]) == 0) continue;
    ModPN v = ModPN::from_rational(static_cast<std::uint64_t>(p_), N, c[k]);
    out += X_power(reps_[P] * static_cast<long>(k), N).scaled(v);
  }
  return out;
}

std::pair<LocalElement, int> SemilocalModel::iota_scaled(int P, const CyclotomicNumber& z, int N) const {
  int s = 0;
  for (const auto& c : z.coeffs())
    if (sgn(c) != 0) s = std::max(s, -vp_rat(c, p_));
  Integer ps = 1;
  for (int i = 0; i < s; ++i) ps *= p_;
  return {iota(P, z * Rational(ps), N), s};
}

// ---------------------------------------------------------------------------

SemilocalElement::SemilocalElement(ModelPtr M, std::vector<LocalElement> comps) : M_(std::move(M)), c_(std::move(comps)) {
  if (static_cast<int>(c_.size()) != M_->num_primes()) fail(ErrorKind::InvalidArgument, "wrong number of components");
}

SemilocalElement SemilocalElement::one(const ModelPtr& M, int N) {
  return SemilocalElement(M, std::vector<LocalElement>(M->num_primes(), LocalElement::from_int(M->local(), N, 1)));
}

SemilocalElement SemilocalElement::from_cyclotomic(const ModelPtr& M, const CyclotomicNumber& z, int N) {
  std::vector<LocalElement> c;
  for (int P = 0; P < M->num_primes(); ++P) c.push_back(M->iota(P, z, N));
  return SemilocalElement(M, c);
}

int SemilocalElement::precision() const {
  int N = c_.empty() ? 0 : c_[0].precision();
  for (const auto& x : c_) N = std::min(N, x.precision());
  return N;
}

SemilocalElement operator*(const SemilocalElement& a, const SemilocalElement& b) {
  if (a.M_ != b.M_) fail(ErrorKind::InvalidArgument, "semilocal elements of different models");
  std::vector<LocalElement> c;
  for (size_t i = 0; i < a.c_.size(); ++i) c.push_back(a.c_[i] * b.c_[i]);
  return SemilocalElement(a.M_, c);
}

SemilocalElement SemilocalElement::operator+(const SemilocalElement& o) const {
  std::vector<LocalElement> c;
  for (size_t i = 0; i < c_.size(); ++i) c.push_back(c_[i] + o.c_[i]);
  return SemilocalElement(M_, c);
}

SemilocalElement SemilocalElement::operator-(const SemilocalElement& o) const {
  std::vector<LocalElement> c;
  for (size_t i = 0; i < c_.size(); ++i) c.push_back(c_[i] - o.c_[i]);
  return SemilocalElement(M_, c);
}

SemilocalElement SemilocalElement::reduce(int N) const {
  std::vector<LocalElement> c;
  for (const auto& x : c_) c.push_back(x.reduce(N));
  return SemilocalElement(M_, c);
}

SemilocalElement SemilocalElement::inverse() const {
  std::vector<LocalElement> c;
  for (const auto& x : c_) c.push_back(x.inverse());
  return SemilocalElement(M_, c);
}

SemilocalElement SemilocalElement::pow(std::uint64_t k) const {
  std::vector<LocalElement> c;
  for (const auto& x : c_) c.push_back(x.pow(k));
  return SemilocalElement(M_, c);
}

SemilocalElement SemilocalElement::galois(long b) const {
  const long f = M_->f();
  const auto& L = M_->local();
  std::vector<LocalElement> c;
  for (int P = 0; P < num_primes(); ++P) {
    auto [Q, d] = M_->split(M_->prime_rep(P) * mod_floor(b, f) % f);
    c.push_back(c_[Q].automorphism(d % L->fprime(), d % L->ppow()));
  }
  return SemilocalElement(M_, c);
}

bool SemilocalElement::is_principal() const {
  for (const auto& x : c_) {
    LocalElement z = x - LocalElement::from_int(x.field(), x.precision(), 1);
    if (!z.is_zero() && z.valuation() < 1) return false;
  }
  return true;
}

bool SemilocalElement::is_invariant(const std::vector<long>& H) const {
  return std::all_of(H.begin(), H.end(), [&](long h) { return galois(h) == *this; });
}

SemilocalElement semilocal_log(const SemilocalElement& u) {
  std::vector<LocalElement> c;
  for (const auto& x : u.components()) c.push_back(log_p(x));
  return SemilocalElement(u.model(), c);
}

SemilocalElement sample_minus_unit(const FieldSpec& K, long p, std::uint64_t seed, int N) {
  K.require_CM();
  auto M = SemilocalModel::get(K.modulus(), p);
  const auto& L = M->local();
  std::mt19937_64 rng(seed);
  std::vector<LocalElement> comps;
  for (int P = 0; P < M->num_primes(); ++P) {
    LocalElement t(L, N);
    for (int j = 0; j < L->e(); ++j)
      for (int i = 0; i < L->r(); ++i) t.set_coeff(i, j, rng() % t.modulus());
    comps.push_back(LocalElement::from_int(L, N, 1) + t.scaled(ModPN(p, N, static_cast<long long>(p))));
  }
  SemilocalElement w0(M, comps);
  SemilocalElement w = SemilocalElement::one(M, N);
  for (long h : K.H()) w = w * w0.galois(h);
  return w * w.galois(K.modulus() - 1).inverse();
}

SemilocalElement semilocal_norm(const SemilocalElement& u, const FieldSpec& K, const FieldSpec& F) {
  if (K.modulus() != F.modulus() || u.model()->f() != K.modulus())
    fail(ErrorKind::InvalidArgument, "semilocal_norm needs a common modulus");
  const long f = K.modulus();
  const auto& HK = K.H();
  const auto& HF = F.H();
  for (long h : HK)
    if (!std::binary_search(HF.begin(), HF.end(), h)) fail(ErrorKind::InvalidArgument, "F is not a subfield of K");
  std::vector<bool> covered(f, false);
  SemilocalElement acc = SemilocalElement::one(u.model(), u.precision());
  for (long h : HF) {
    if (covered[h]) continue;
    for (long k : HK) covered[h * k % f] = true;
    acc = acc * u.galois(h);
  }
  return acc;
}

}  // namespace starklab
