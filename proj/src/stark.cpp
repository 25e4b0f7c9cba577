#include "starklab/stark.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace starklab {

namespace {

using u64 = std::uint64_t;

Integer ipow_big(long p, int k) {
  Integer r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

ModPN p_power(long p, int N, int k) { return ModPN(static_cast<u64>(p), N, ipow_big(p, k)); }

// (sigma_b x)_{P_1}: the first component of sigma_b applied to a semilocal element.
LocalElement first_component_after(const SemilocalElement& x, long b) {
  const auto& M = x.model();
  const auto& L = M->local();
  auto [Q, d] = M->split(b);
  return x[Q].automorphism(d % L->fprime(), d % L->ppow());
}

LocalElement component_after(const SemilocalElement& x, long b, int P) {
  const auto& M = x.model();
  const auto& L = M->local();
  auto [Q, d] = M->split(M->prime_rep(P) * mod_floor(b, M->f()) % M->f());
  return x[Q].automorphism(d % L->fprime(), d % L->ppow());
}

void require_model(const FieldSpec& K, const std::vector<SemilocalElement>& us) {
  if (us.empty()) fail(ErrorKind::InvalidArgument, "empty wedge");
  for (const auto& u : us)
    if (u.model()->f() != K.modulus() || u.model() != us[0].model())
      fail(ErrorKind::InvalidArgument, "semilocal elements must live on the model of K's modulus");
}

std::string case_key(const FieldSpec& K, const PlaceSet& S) {
  std::ostringstream os;
  os << K.modulus() << '|';
  for (long h : K.H()) os << h << ',';
  os << '|';
  for (long h : K.Hprime()) os << h << ',';
  os << '|';
  for (long q : S.primes) os << q << ',';
  return os.str();
}

// p^k for k >= 0 (checked_prime_power insists on k >= 1).
u64 small_power(long p, int k) { return k == 0 ? 1 : checked_prime_power(static_cast<u64>(p), k); }

// xi/(1 - xi) = p^{-k} w.
struct ColemanWeight {
  LocalElement w;
  int k = 0;
};

ColemanWeight coleman_weight(const LocalElement& xi) {
  const auto& L = xi.field();
  const int N = xi.precision();
  LocalElement z = LocalElement::from_int(L, N, 1) - xi;
  if (z.is_zero()) fail(ErrorKind::InvalidArgument, "xi_hat must not be 1");
  if (z.valuation() == 0) return {xi * z.inverse(), 0};
  // 1 - xi is a non-unit: 1/(1 - xi) = (prod of the other conjugates) / N(1 - xi),
  // and N(1 - xi) is an exact power of p for xi of p-power order.
  LocalElement conj = LocalElement::from_int(L, N, 1);
  auto autos = local_automorphisms(L);
  for (size_t i = 1; i < autos.size(); ++i) conj = conj * z.automorphism(autos[i].first, autos[i].second);
  ModPN nz = (conj * z).constant_term();
  const int k = nz.valuation();
  if (nz != p_power(L->p(), N, k)) fail(ErrorKind::IntegralityFailure, "N(1 - xi_hat) is not a power of p");
  return {xi * conj, k};
}

ModPN coleman_from_weight(const ColemanWeight& cw, long f, const LocalElement& logv) {
  const auto& L = logv.field();
  const long p = L->p();
  const int N = std::min(cw.w.precision(), logv.precision());
  ModPN T = trace_to_Qp(cw.w.reduce(N) * logv.reduce(N));
  auto [vf, funit] = split_p_part(f, p);
  const int D = cw.k + vf;
  if (D >= N) fail(ErrorKind::InsufficientPrecision, "coleman_b: the division exhausts the precision");
  if (!T.is_zero() && T.valuation() < D) fail(ErrorKind::IntegralityFailure, "coleman_b is not p-integral");
  ModPN q(static_cast<u64>(p), N - D, static_cast<long long>(T.value() / small_power(p, D)));
  return q * ModPN(static_cast<u64>(p), N - D, static_cast<long long>(funit)).inverse();
}

u64 splitmix64(u64 x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------

int PAdicGroupElem::min_valuation() const {
  int v = absolute_precision();
  for (size_t g = 0; g < mantissa.size(); ++g) v = std::min(v, valuation(static_cast<int>(g)));
  return v;
}

GroupRingElem<ModPN> PAdicGroupElem::reduce_integral(int k) const {
  const long p = static_cast<long>(mantissa.at(0).prime());
  for (size_t g = 0; g < mantissa.size(); ++g)
    if (!mantissa[g].is_zero() && mantissa[g].valuation() < shift)
      fail(ErrorKind::NonIntegral, "coefficient with negative valuation");
  if (absolute_precision() < k) fail(ErrorKind::InsufficientPrecision, "too few known digits for the reduction");
  GroupRingElem<ModPN> out(G, ModPN(static_cast<u64>(p), k, 0LL));
  const u64 ps = small_power(p, shift);
  for (size_t g = 0; g < mantissa.size(); ++g)
    out[static_cast<int>(g)] = ModPN(static_cast<u64>(p), k, static_cast<long long>(mantissa[g].value() / ps));
  return out;
}

int padic_agreement(const PAdicGroupElem& a, const PAdicGroupElem& b) {
  if (!same_group(a.G, b.G) || a.mantissa.size() != b.mantissa.size())
    fail(ErrorKind::InvalidArgument, "padic_agreement: different groups");
  const long p = static_cast<long>(a.mantissa.at(0).prime());
  const int S = std::max(a.shift, b.shift);
  const int Nc = std::min(a.precision() + S - a.shift, b.precision() + S - b.shift);
  const Integer mod = ipow_big(p, Nc);
  const Integer sa = ipow_big(p, S - a.shift), sb = ipow_big(p, S - b.shift);
  for (size_t g = 0; g < a.mantissa.size(); ++g) {
    Integer x = Integer(static_cast<unsigned long>(a.mantissa[g].value())) * sa;
    Integer y = Integer(static_cast<unsigned long>(b.mantissa[g].value())) * sb;
    Integer diff = x - y;
    mpz_mod(diff.get_mpz_t(), diff.get_mpz_t(), mod.get_mpz_t());
    if (diff != 0) return -1;
  }
  return Nc - S;
}

std::vector<long> default_gammas(const FieldSpec& K) {
  const long f = K.modulus();
  const auto& Hp = K.Hprime();
  std::vector<bool> seen(f, false);
  std::vector<long> out;
  for (long a = 1; a < f || (f == 1 && a == 1); ++a) {
    if (gcd_l(a, f) != 1 || seen[a % f]) continue;
    out.push_back(a);
    for (long h : Hp) seen[a * h % f] = true;
  }
  return out;
}

GroupRingElem<LocalElement> regulator(const FieldSpec& K, const std::vector<SemilocalElement>& us,
                                      const std::vector<long>& gammas, int N) {
  require_model(K, us);
  if (gammas.size() != us.size()) fail(ErrorKind::InvalidArgument, "one gamma per wedge factor");
  const auto& G = K.G();
  const long f = K.modulus();
  const size_t d = us.size();
  const LocalElement proto(us[0].model()->local(), N);
  std::vector<SemilocalElement> logs;
  for (const auto& u : us) logs.push_back(semilocal_log(u.reduce(N)));
  std::vector<std::vector<GroupRingElem<LocalElement>>> mat(
      d, std::vector<GroupRingElem<LocalElement>>(d, GroupRingElem<LocalElement>(G, proto)));
  for (size_t i = 0; i < d; ++i)
    for (size_t t = 0; t < d; ++t)
      for (int g = 0; g < G->order(); ++g) {
        const long b = mod_floor(gammas[i], f) * G->rep(G->inv(g)) % f;
        mat[i][t][g] = first_component_after(logs[t], b);
      }
  return gr_determinant(mat);
}

const GroupRingElem<CyclotomicNumber>& a_minus_star(const FieldSpec& K, const PlaceSet& S) {
  static std::mutex mu;
  static std::map<std::string, GroupRingElem<CyclotomicNumber>> cache;
  const std::string key = case_key(K, S);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  GroupRingElem<CyclotomicNumber> a =
      K.k_is_Q() ? a_minus(K, S).value.star() : a_minus_relative_star(K, S);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(a)).first->second;
}

int a_minus_shift(const FieldSpec& K, const PlaceSet& S, long p) {
  int s = 0;
  for (const auto& z : a_minus_star(K, S).coeffs())
    for (const auto& c : z.coeffs())
      if (sgn(c) != 0) s = std::max(s, -vp_rat(c, p));
  return s;
}

PAdicGroupElem s_map(const FieldSpec& K, const PlaceSet& S, const std::vector<SemilocalElement>& us, int N,
                     const std::optional<std::vector<long>>& gammas) {
  require_model(K, us);
  const auto& M = us[0].model();
  const long p = M->p();
  const auto& G = K.G();
  const std::vector<long> gs = gammas ? *gammas : default_gammas(K);
  if (static_cast<long>(us.size()) != K.degree_k())
    fail(ErrorKind::InvalidArgument, "the wedge must have [k:Q] factors");
  const auto& a = a_minus_star(K, S);

  std::vector<std::pair<LocalElement, int>> js;
  int s = 0;
  for (int g = 0; g < G->order(); ++g) {
    js.push_back(M->iota_scaled(0, a[g], N));
    s = std::max(s, js.back().second);
  }
  std::vector<LocalElement> A;
  for (auto& [m, sg] : js) A.push_back(m.scaled(p_power(p, N, s - sg)));

  const auto R = regulator(K, us, gs, N);
  std::vector<LocalElement> acc(G->order(), LocalElement(M->local(), N));
  for (int g = 0; g < G->order(); ++g) {
    if (A[g].is_zero()) continue;
    for (int h = 0; h < G->order(); ++h) acc[G->mul(g, h)] += A[g] * R[h];
  }
  PAdicGroupElem out;
  out.G = G;
  out.shift = s;
  for (const auto& x : acc) {
    if (!x.is_rational()) fail(ErrorKind::IntegralityFailure, "a coefficient of s(theta) is not in Q_p");
    out.mantissa.push_back(x.constant_term());
  }
  return out;
}

ModPN coleman_b(const LocalElement& xi_hat, long f, const LocalElement& v) {
  return coleman_from_weight(coleman_weight(xi_hat), f, log_p(v));
}

long bracket_normalization(const ModelPtr& M, int P, int n) {
  const auto& L = M->local();
  const int m = L->m();
  if (m < 0 || n > m) fail(ErrorKind::CharacterUndefined, "mu_{p^{n+1}} is not contained in K");
  const int N = std::max(2, m + 2);
  const long ppow = L->ppow();
  const LocalElement target = M->iota(P, CyclotomicNumber::xi(ppow), N);
  const LocalElement base = M->X_power(M->prime_rep(P) * L->fprime(), N);
  LocalElement cur = base;
  for (long t = 1; t < ppow; ++t, cur = cur * base)
    if (t % M->p() != 0 && cur == target) return t;
  fail(ErrorKind::IntegralityFailure, "zeta is not a power of xi_hat^{f'}");
}

BracketEvaluator::BracketEvaluator(const ModelPtr& M, int n, int N) : M_(M), n_(n), N_(N) {
  const long p = M->p();
  const long f = M->f();
  for (int P = 0; P < M->num_primes(); ++P) {
    ColemanWeight cw = coleman_weight(M->X_power(M->prime_rep(P), N));
    w_.push_back(cw.w);
    loss_ = cw.k + vp_int(f, p);
    const long t = bracket_normalization(M, P, n);
    tinv_.push_back(ModPN(static_cast<u64>(p), n + 1, static_cast<long long>(t)).inverse());
  }
  if (N - loss_ < n + 1) fail(ErrorKind::InsufficientPrecision, "bracket precision below p^{n+1}");
  const long funit = split_p_part(f, p).second;
  funit_inv_ = ModPN(static_cast<u64>(p), n + 1, static_cast<long long>(funit)).inverse();
}

ModPN BracketEvaluator::from_log_translate(const SemilocalElement& log_beta, long c) const {
  const long p = M_->p();
  const u64 pd = small_power(p, loss_);
  ModPN acc(static_cast<u64>(p), n_ + 1, 0LL);
  for (int P = 0; P < M_->num_primes(); ++P) {
    LocalElement comp = c == 1 ? log_beta[P] : component_after(log_beta, c, P);
    const int N = std::min(N_, comp.precision());
    if (N - loss_ < n_ + 1) fail(ErrorKind::InsufficientPrecision, "bracket precision below p^{n+1}");
    ModPN T = trace_to_Qp(w_[P].reduce(N) * comp.reduce(N));
    if (!T.is_zero() && T.valuation() < loss_) fail(ErrorKind::IntegralityFailure, "coleman_b is not p-integral");
    ModPN b(static_cast<u64>(p), n_ + 1, static_cast<long long>(T.value() / pd));
    acc -= b * tinv_[P];
  }
  return acc * funit_inv_;
}

ModPN BracketEvaluator::from_log(const SemilocalElement& log_beta) const { return from_log_translate(log_beta, 1); }

ModPN hilbert_bracket(const FieldSpec& K, const GroupRingElem<Rational>& x, const SemilocalElement& beta, int n,
                      int N) {
  const auto& M = beta.model();
  const long f = M->f();
  const long p = M->p();
  if (f != K.modulus()) fail(ErrorKind::InvalidArgument, "beta must live on the model of K's modulus");
  const auto& Gf = x.group();
  if (Gf->modulus() != f || Gf->H().size() != 1)
    fail(ErrorKind::UnsupportedFirstArgument, "the first argument must be (1 - xi_f)^x with x over Gal(Q(xi_f)/Q)");
  const long idx = static_cast<long>(K.H().size());
  if (idx % p == 0) fail(ErrorKind::UnsupportedFirstArgument, "p divides [K_f : K]");
  BracketEvaluator ev(M, n, N);
  SemilocalElement lb = semilocal_log(beta.reduce(N));
  ModPN acc(static_cast<u64>(p), n + 1, 0LL);
  for (int b = 0; b < Gf->order(); ++b) {
    if (is_zero(x[b])) continue;
    const long rb = Gf->rep(b);
    ModPN xb = ModPN::from_rational(static_cast<u64>(p), n + 1, x[b]);
    ModPN kb(static_cast<u64>(p), n + 1, static_cast<long long>(rb));
    acc += xb * kb * ev.from_log_translate(lb, inv_mod(rb, f));
  }
  return acc * ModPN(static_cast<u64>(p), n + 1, static_cast<long long>(idx)).inverse();
}

WedgeUnits rubin_stark_eta(const FieldSpec& K, const PlaceSet& S, const std::optional<std::vector<long>>& gammas) {
  K.require_CM();
  const long f = K.modulus();
  if (K.conductor() != f)
    fail(ErrorKind::UnsupportedFirstArgument, "the explicit element needs the modulus to equal the conductor");
  const long d = K.degree_k();
  if (d > 2) fail(ErrorKind::HypothesisViolated, "only k = Q or k real quadratic is supported");
  for (auto [q, e] : factorize(f))
    if (d == 1 && !S.contains(q)) fail(ErrorKind::BadPlaceSet, "S must contain the primes dividing f");
  if (d == 2 && !bad_primes(K, S).empty()) fail(ErrorKind::HypothesisViolated, "Bad(S) must be empty");

  auto Gf = FieldSpec(f).Gamma();
  GroupRingElem<Rational> x(Gf, Rational(0));
  x[0] += 1;
  x[Gf->index_of(f - 1)] += 1;
  GroupRingElem<Rational> NH(Gf, Rational(0));
  for (long h : K.H()) NH[Gf->index_of(h)] += 1;
  x = x * NH;
  for (long q : S.primes) {
    if (f % q == 0) continue;
    GroupRingElem<Rational> fac = GroupRingElem<Rational>::one(Gf, Rational(0));
    fac[Gf->index_of(inv_mod(q % f, f))] -= 1;
    x = x * fac;
  }
  WedgeUnits eta;
  eta.f = f;
  if (d == 1) {
    eta.scalar = Rational(-1, 2);
    eta.factors = {x};
    return eta;
  }
  eta.scalar = Rational(1, 4);
  const std::vector<long> gs = gammas ? *gammas : default_gammas(K);
  for (long g : gs) eta.factors.push_back(x.translated(Gf->index_of(inv_mod(mod_floor(g, f), f))));
  return eta;
}

CyclotomicNumber cyclotomic_unit_value(long f, const GroupRingElem<Rational>& x) {
  const auto& Gf = x.group();
  CyclotomicNumber num(f, Rational(1)), den(f, Rational(1));
  for (int b = 0; b < Gf->order(); ++b) {
    const Rational& c = x[b];
    if (sgn(c) == 0) continue;
    if (c.get_den() != 1) fail(ErrorKind::InvalidArgument, "exponents must be integers");
    CyclotomicNumber one_minus = CyclotomicNumber(f, Rational(1)) - CyclotomicNumber::xi(f, Gf->rep(b));
    long k = c.get_num().get_si();
    CyclotomicNumber& tgt = k > 0 ? num : den;
    for (long i = 0; i < std::abs(k); ++i) tgt *= one_minus;
  }
  return num / den;
}

bool eigenspace_condition_holds(const FieldSpec& K, const PlaceSet& S, const WedgeUnits& eta) {
  if (eta.d() != 1 || !K.k_is_Q()) fail(ErrorKind::InvalidArgument, "the exact check covers d = 1 only");
  const long f = eta.f;
  const auto& Gf = eta.factors[0].group();
  auto Gbar = K.Gbar();
  const CyclotomicNumber one(f, Rational(1));
  auto is_torsion = [&](const CyclotomicNumber& z) {
    CyclotomicNumber w = z;
    for (long i = 1; i < 2 * f; ++i) w *= z;
    return w == one;
  };
  const bool many = place_count(K, S) > 2;
  for (long q : S.primes) {
    GroupRingElem<Rational> ND(Gf, Rational(0));
    for (int dgi : decomposition_group_Gbar(K, q)) ND[Gf->index_of(Gbar->rep(dgi))] += 1;
    CyclotomicNumber z = cyclotomic_unit_value(f, eta.factors[0] * ND);
    if (many) {
      if (!is_torsion(z)) return false;
    } else {
      for (int g = 1; g < Gbar->order(); ++g)
        if (!is_torsion(cyc_galois(Gbar->rep(g), z) / z)) return false;
    }
  }
  return true;
}

GroupRingElem<ModPN> H_pairing(const FieldSpec& K, const WedgeUnits& eta, const std::vector<SemilocalElement>& us,
                               long p, int n, int N) {
  require_model(K, us);
  const auto& M = us[0].model();
  if (M->p() != p) fail(ErrorKind::InvalidArgument, "units live over a different prime");
  if (eta.d() != static_cast<int>(us.size())) fail(ErrorKind::InvalidArgument, "eta and theta differ in rank");
  const long f = K.modulus();
  if (eta.f != f) fail(ErrorKind::UnsupportedFirstArgument, "eta must be built from (1 - xi_f) at K's modulus");
  const long idx = static_cast<long>(K.H().size());
  if (idx % p == 0) fail(ErrorKind::UnsupportedFirstArgument, "p divides [K_f : K]");
  const auto& G = K.G();
  const size_t d = us.size();
  BracketEvaluator ev(M, n, N);
  const ModPN zero(static_cast<u64>(p), n + 1, 0LL);
  const ModPN idx_inv = ModPN(static_cast<u64>(p), n + 1, static_cast<long long>(idx)).inverse();

  std::vector<std::vector<GroupRingElem<ModPN>>> mat(d, std::vector<GroupRingElem<ModPN>>(d, GroupRingElem<ModPN>(G, zero)));
  for (size_t t = 0; t < d; ++t) {
    SemilocalElement lb = semilocal_log(us[t].reduce(N));
    std::vector<std::optional<ModPN>> table(f);  // [1 - xi_f, sigma_c u_t] by residue c
    auto bracket = [&](long c) -> const ModPN& {
      c = mod_floor(c, f);
      if (!table[c]) table[c] = ev.from_log_translate(lb, c);
      return *table[c];
    };
    for (size_t i = 0; i < d; ++i) {
      const auto& x = eta.factors[i];
      const auto& Gf = x.group();
      std::vector<std::pair<long, ModPN>> terms;  // (b^{-1}, x_b kappa(b))
      for (int b = 0; b < Gf->order(); ++b) {
        if (is_zero(x[b])) continue;
        const long rb = Gf->rep(b);
        terms.push_back({inv_mod(rb, f), ModPN::from_rational(static_cast<u64>(p), n + 1, x[b]) *
                                             ModPN(static_cast<u64>(p), n + 1, static_cast<long long>(rb))});
      }
      for (int g = 0; g < G->order(); ++g) {
        ModPN acc = zero;
        for (const auto& [binv, coef] : terms) acc += coef * bracket(binv * G->rep(g) % f);
        mat[i][t][G->inv(g)] += acc * idx_inv;
      }
    }
  }
  return gr_determinant(mat).scaled(ModPN::from_rational(static_cast<u64>(p), n + 1, eta.scalar));
}

ModPN kappa_of_gammas(const std::vector<long>& gammas, long p, int n) {
  ModPN k(static_cast<u64>(p), n + 1, 1LL);
  for (long g : gammas) k *= ModPN(static_cast<u64>(p), n + 1, static_cast<long long>(g));
  return k;
}

// ---------------------------------------------------------------------------

int working_precision(const FieldSpec& K, const CaseParams& c) {
  const long f = K.modulus();
  auto [vf, fp] = split_p_part(f, c.p);
  const int loss = vf > 0 ? vf + (fp == 1 ? 1 : 0) : 0;
  const int s = a_minus_shift(K, c.S, c.p);
  const int N = c.n + 1 + c.guard + std::max(s, loss);
  // log_p borrows a few digits above N for the series denominators
  if (N + 4 > max_precision_for(c.p))
    fail(ErrorKind::InsufficientPrecision, "the requested guard digits exceed the precision cap for p = " +
                                               std::to_string(c.p));
  return N;
}

std::vector<SemilocalElement> sample_theta(const FieldSpec& K, long p, std::uint64_t seed, int N) {
  std::vector<SemilocalElement> us;
  for (long t = 0; t < K.degree_k(); ++t)
    us.push_back(sample_minus_unit(K, p, t == 0 ? seed : splitmix64(seed + static_cast<u64>(t)), N));
  return us;
}

void require_cc_case(const FieldSpec& K, const CaseParams& c) {
  if (c.p < 3 || !is_prime(c.p)) fail(ErrorKind::HypothesisViolated, "p must be an odd prime");
  if (c.n < 0) fail(ErrorKind::HypothesisViolated, "n must be non-negative");
  K.require_CM();
  const long pn = ipow(c.p, c.n + 1);
  if (K.modulus() % pn != 0) fail(ErrorKind::HypothesisViolated, "mu_{p^{n+1}} is not contained in K");
  for (long h : K.H())
    if (h % pn != 1) fail(ErrorKind::HypothesisViolated, "mu_{p^{n+1}} is not contained in K");
  if (K.degree_k() > 2) fail(ErrorKind::HypothesisViolated, "only k = Q or k real quadratic is supported");
  if (K.degree_k() == 2 && !bad_primes(K, c.S).empty()) fail(ErrorKind::HypothesisViolated, "Bad(S) must be empty");
}

TrialResult cc_trial(const FieldSpec& K, const CaseParams& c, std::uint64_t seed) {
  require_cc_case(K, c);
  const int N = working_precision(K, c);
  const auto gs = c.gammas ? *c.gammas : default_gammas(K);
  const auto us = sample_theta(K, c.p, seed, N);
  const auto lhs = s_map(K, c.S, us, N, gs).reduce_integral(c.n + 1);
  const auto eta = rubin_stark_eta(K, c.S, gs);
  const auto rhs = H_pairing(K, eta, us, c.p, c.n, N).scaled(kappa_of_gammas(gs, c.p, c.n));
  TrialResult r;
  r.seed = seed;
  for (const auto& x : lhs.coeffs()) r.lhs.push_back(static_cast<long long>(x.value()));
  for (const auto& x : rhs.coeffs()) r.rhs.push_back(static_cast<long long>(x.value()));
  r.equal = r.lhs == r.rhs;
  return r;
}

TrialResult ic_trial(const FieldSpec& K, const CaseParams& c, std::uint64_t seed) {
  if (c.p < 3 || !is_prime(c.p)) fail(ErrorKind::HypothesisViolated, "p must be an odd prime");
  K.require_CM();
  if (K.degree_k() > 2) fail(ErrorKind::HypothesisViolated, "only k = Q or k real quadratic is supported");
  const int N = working_precision(K, c);
  const auto us = sample_theta(K, c.p, seed, N);
  const auto s = s_map(K, c.S, us, N, c.gammas);
  // integrality is asserted with at least two known digits beyond the units place
  if (s.absolute_precision() < 2) fail(ErrorKind::InsufficientPrecision, "fewer than two guard digits");
  TrialResult r;
  r.seed = seed;
  for (int g = 0; g < K.G()->order(); ++g) {
    r.lhs.push_back(s.valuation(g));
    r.rhs.push_back(s.absolute_precision());
  }
  r.equal = s.min_valuation() >= 0;
  return r;
}

TrialResult pndivg_trial(const FieldSpec& K, const CaseParams& c, std::uint64_t seed) {
  if (!K.k_is_Q()) fail(ErrorKind::HypothesisViolated, "the p-does-not-divide-|G| check is for k = Q");
  const auto& G = K.G();
  if (G->order() % c.p == 0) fail(ErrorKind::PDividesGroupOrder, "p divides |G|");
  K.require_CM();
  // The generator formula needs every p-adic place in S; without them s(u) picks up a stray N(p).
  if (!c.S.contains(c.p)) fail(ErrorKind::BadPlaceSet, "S must contain p for the p-does-not-divide-|G| check");
  const int N = working_precision(K, c);
  const auto us = sample_theta(K, c.p, seed, N);
  const auto s = s_map(K, c.S, us, N);
  TrialResult r;
  r.seed = seed;
  r.equal = true;
  for (const auto& phi : Character::all(G)) {
    if (!phi.is_odd()) continue;
    const long rhs = pndivg_rhs(K, c.S, c.p, phi).valuation;
    UnramifiedEmbedding emb(c.p, phi.value_modulus(), s.precision());
    LocalElement acc(emb.field(), s.precision());
    for (int g = 0; g < G->order(); ++g) acc += emb.image(phi.value(g)).scaled(s.mantissa[g]);
    long lhs;
    if (acc.is_zero()) {
      lhs = s.absolute_precision();
      if (lhs < rhs) fail(ErrorKind::InsufficientPrecision, "phi(s(u)) vanishes to working precision");
    } else {
      lhs = acc.valuation() - s.shift;
    }
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    if (lhs < rhs) r.equal = false;
  }
  return r;
}

}  // namespace starklab
