#include "starklab/padic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "starklab/kernels.hpp"

namespace starklab {

namespace {

using u64 = std::uint64_t;
using Poly = std::vector<long>;  // over F_p, low degree first

// ---------------------------------------------------------------------------
// F_p[x]

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, long p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

Poly psub(Poly a, const Poly& b, long p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = mod_floor(a[i] - b[i], p);
  trim(a);
  return a;
}

Poly padd(Poly a, const Poly& b, long p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
  trim(a);
  return a;
}

// (quotient, remainder) of a by a nonzero b.
std::pair<Poly, Poly> pdivmod(Poly a, const Poly& b, long p) {
  trim(a);
  const long lead_inv = inv_mod(b.back(), p);
  if (a.size() < b.size()) return {{}, a};
  Poly q(a.size() - b.size() + 1, 0);
  for (size_t k = a.size(); k-- >= b.size();) {
    long c = a[k] * lead_inv % p;
    q[k - b.size() + 1] = c;
    if (c == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) a[k - b.size() + 1 + j] = mod_floor(a[k - b.size() + 1 + j] - c * b[j], p);
  }
  trim(a);
  trim(q);
  return {q, a};
}

Poly pmod(const Poly& a, const Poly& b, long p) { return pdivmod(a, b, p).second; }

// (g, s, t) with s a + t b = g monic.
std::tuple<Poly, Poly, Poly> pxgcd(Poly a, Poly b, long p) {
  Poly s0{1}, s1{}, t0{}, t1{1};
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto [q, r] = pdivmod(a, b, p);
    a = b;
    b = r;
    Poly s2 = psub(s0, pmul(q, s1, p), p);
    Poly t2 = psub(t0, pmul(q, t1, p), p);
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  long li = inv_mod(a.back(), p);
  for (auto* v : {&a, &s0, &t0})
    for (auto& c : *v) c = c * li % p;
  return {a, s0, t0};
}

Poly ppowmod(Poly base, const Integer& e, const Poly& mod, long p) {
  Poly r{1};
  base = pmod(base, mod, p);
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = pmod(pmul(r, r, p), mod, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = pmod(pmul(r, base, p), mod, p);
  }
  return r;
}

bool is_irreducible(const Poly& P, long p) {
  const long n = static_cast<long>(P.size()) - 1;
  const Poly x{0, 1};
  auto frob_iter = [&](long k) {
    Poly r = x;
    for (long i = 0; i < k; ++i) r = ppowmod(r, Integer(p), P, p);
    return r;
  };
  if (!psub(frob_iter(n), x, p).empty()) return false;
  for (auto [q, ex] : factorize(n)) {
    Poly d = psub(frob_iter(n / q), x, p);
    auto [g, s, t] = pxgcd(P, d, p);
    if (g.size() > 1) return false;
  }
  return true;
}

// The first monic irreducible polynomial of degree n in lexicographic order.
Poly first_irreducible(long n, long p) {
  if (n == 1) return {0, 1};
  Poly P(n + 1, 0);
  P[n] = 1;
  while (true) {
    // increment the low coefficients as a base-p counter
    for (long i = 0; i < n; ++i) {
      if (++P[i] < p) break;
      P[i] = 0;
    }
    if (P[0] != 0 && is_irreducible(P, p)) return P;
  }
}

// Monic irreducible factors of Phi_f mod p; all have degree ord(p mod f).
std::vector<Poly> cyclotomic_factors_mod_p(long f, long p) {
  const IntPoly& phi = cyclotomic_poly(f);
  const long r = f <= 2 ? 1 : mult_order(p % f, f);
  if (r == 1) {
    std::vector<Poly> out;
    for (long a = 0; a < p; ++a) {
      Integer v = 0;
      for (size_t i = phi.size(); i-- > 0;) v = v * a + phi[i];
      Integer vm = v % p;
      if (vm < 0) vm += p;
      if (vm == 0) out.push_back({mod_floor(-a, p), 1});
    }
    return out;
  }
  // F_{p^r} = F_p[t]/P; find an element of exact order f.
  const Poly P = first_irreducible(r, p);
  Integer q = 1;
  for (long i = 0; i < r; ++i) q *= p;
  const Integer cof = (q - 1) / f;
  Poly zeta;
  Poly cand(r, 0);
  while (true) {
    for (long i = 0; i < r; ++i) {
      if (++cand[i] < p) break;
      cand[i] = 0;
    }
    Poly c = cand;
    trim(c);
    if (c.empty()) continue;
    Poly z = ppowmod(c, cof, P, p);
    bool ok = true;
    for (auto [ell, ex] : factorize(f))
      if (ppowmod(z, Integer(f / ell), P, p) == Poly{1}) ok = false;
    if (ok) {
      zeta = z;
      break;
    }
  }
  // Orbit polynomials prod_i (X - zeta^{a p^i}) over F_{p^r}; coefficients land in F_p.
  std::vector<Poly> out;
  std::set<long> seen;
  for (long a = 1; a < f; ++a) {
    if (gcd_l(a, f) != 1 || seen.count(a)) continue;
    std::vector<Poly> poly{{1}};  // coefficients in F_{p^r}, low X-degree first
    long ai = a;
    for (long i = 0; i < r; ++i) {
      seen.insert(ai);
      Poly root = ppowmod(zeta, Integer(ai), P, p);
      std::vector<Poly> next(poly.size() + 1);
      for (size_t k = 0; k < poly.size(); ++k) {
        next[k + 1] = padd(next[k + 1], poly[k], p);
        next[k] = psub(next[k], pmod(pmul(root, poly[k], p), P, p), p);
      }
      poly = next;
      ai = ai * p % f;
    }
    Poly fac;
    for (const auto& c : poly) {
      if (c.size() > 1) fail(ErrorKind::InvalidArgument, "orbit polynomial not defined over F_p");
      fac.push_back(c.empty() ? 0 : c[0]);
    }
    out.push_back(fac);
  }
  return out;
}

// ---------------------------------------------------------------------------
// (Z/M)[x] with M = p^K

using MPoly = std::vector<u64>;

u64 addm(u64 a, u64 b, u64 M) {
  u64 s = a + b;
  return s >= M ? s - M : s;
}
u64 subm(u64 a, u64 b, u64 M) { return a >= b ? a - b : a + M - b; }

MPoly mmul(const MPoly& a, const MPoly& b, u64 M) {
  MPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = addm(r[i + j], mulmod_u64(a[i], b[j], M), M);
  return r;
}

MPoly to_mpoly(const Poly& a, u64 M) {
  MPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<u64>(a[i]) % M;
  return r;
}

Poly to_fp(const MPoly& a, long p) {
  Poly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<long>(a[i] % p);
  trim(r);
  return r;
}

// Lifts Phi_f = g h mod p to mod p^K (g monic of the given residue).
MPoly hensel_lift(long f, long p, const Poly& g1, int K) {
  const u64 M = checked_prime_power(p, K);
  const IntPoly& phi = cyclotomic_poly(f);
  Poly phi_p;
  for (const auto& c : phi) {
    Integer v = c % p;
    if (v < 0) v += p;
    phi_p.push_back(v.get_si());
  }
  auto [h1, rem] = pdivmod(phi_p, g1, p);
  if (!rem.empty()) fail(ErrorKind::InvalidArgument, "factor does not divide Phi_f mod p");
  auto [one, s, t] = pxgcd(g1, h1, p);
  if (one != Poly{1}) fail(ErrorKind::InvalidArgument, "factors are not coprime mod p");
  MPoly phiM(phi.size());
  for (size_t i = 0; i < phi.size(); ++i) {
    Integer v = phi[i] % Integer(static_cast<unsigned long>(M));
    if (v < 0) v += Integer(static_cast<unsigned long>(M));
    phiM[i] = v.get_ui();
  }
  MPoly g = to_mpoly(g1, M), h = to_mpoly(h1, M);
  u64 pk = 1;
  for (int k = 1; k < K; ++k) {
    pk *= static_cast<u64>(p);
    MPoly gh = mmul(g, h, M);
    gh.resize(std::max(gh.size(), phiM.size()), 0);
    MPoly E(gh.size(), 0);
    for (size_t i = 0; i < gh.size(); ++i) E[i] = subm(i < phiM.size() ? phiM[i] : 0, gh[i], M);
    Poly e;
    for (u64 c : E) {
      if (c % pk != 0) fail(ErrorKind::InvalidArgument, "Hensel step lost divisibility");
      e.push_back(static_cast<long>((c / pk) % static_cast<u64>(p)));
    }
    trim(e);
    Poly dg = pmod(pmul(t, e, p), g1, p);
    auto [dh, r2] = pdivmod(psub(e, pmul(h1, dg, p), p), g1, p);
    if (!r2.empty()) fail(ErrorKind::InvalidArgument, "Hensel correction is not exact");
    for (size_t i = 0; i < dg.size(); ++i) g[i] = addm(g[i], mulmod_u64(static_cast<u64>(dg[i]), pk, M), M);
    for (size_t i = 0; i < dh.size(); ++i) h[i] = addm(h[i], mulmod_u64(static_cast<u64>(dh[i]), pk, M), M);
  }
  return g;
}

// Reduces a polynomial in x (any length) modulo the monic g, in place, at modulus M.
void reduce_mod_g(u64* a, size_t len, const std::vector<u64>& g, u64 M) {
  const size_t r = g.size() - 1;
  for (size_t k = len; k-- > r;) {
    u64 c = a[k];
    if (c == 0) continue;
    a[k] = 0;
    for (size_t j = 0; j < r; ++j) a[k - r + j] = subm(a[k - r + j], mulmod_u64(c, g[j] % M, M), M);
  }
}

int vp_u64(u64 v, long p, int cap) {
  if (v == 0) return cap;
  int k = 0;
  while (v % static_cast<u64>(p) == 0) {
    v /= static_cast<u64>(p);
    ++k;
  }
  return std::min(k, cap);
}

}  // namespace

// ---------------------------------------------------------------------------

int max_precision_for(long p) {
  // keep p^N below 2^62
  int N = 0;
  unsigned __int128 v = 1;
  while (v * static_cast<unsigned>(p) < (static_cast<unsigned __int128>(1) << 62)) {
    v *= static_cast<unsigned>(p);
    ++N;
  }
  return N;
}

LocalPtr build_local(long p, long fprime, int m) {
  static std::mutex mu;
  static std::map<std::tuple<long, long, int>, LocalPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, fprime, m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  if (p < 3 || !is_prime(p)) fail(ErrorKind::InvalidArgument, "p must be an odd prime");
  if (fprime < 1 || fprime % p == 0) fail(ErrorKind::InvalidArgument, "p must not divide f'");
  if (m < -1) fail(ErrorKind::InvalidArgument, "m must be at least -1");

  auto L = std::shared_ptr<LocalFieldSpec>(new LocalFieldSpec());
  L->p_ = p;
  L->fprime_ = fprime;
  L->m_ = m;
  L->ppow_ = m < 0 ? 1 : ipow(p, m + 1);
  L->e_ = m < 0 ? 1 : static_cast<int>(euler_phi(L->ppow_));
  L->Nmax_ = max_precision_for(p);
  const u64 M = checked_prime_power(p, L->Nmax_);

  auto factors = cyclotomic_factors_mod_p(fprime, p);
  std::sort(factors.begin(), factors.end());
  L->g_ = hensel_lift(fprime, p, factors.front(), L->Nmax_);
  L->r_ = static_cast<int>(L->g_.size()) - 1;
  const int r = L->r_, e = L->e_;

  // x^k mod g
  std::vector<u64> cur(r + 1, 0);
  cur[0] = 1;
  for (long k = 0; k < fprime; ++k) {
    L->xpow_.emplace_back(cur.begin(), cur.begin() + r);
    std::vector<u64> nxt(r + 1, 0);
    for (int i = 0; i < r; ++i) nxt[i + 1] = cur[i];
    reduce_mod_g(nxt.data(), nxt.size(), L->g_, M);
    cur = nxt;
  }
  // y^k over 1, y, ..., y^{e-1}
  const long pm = m < 0 ? 1 : ipow(p, m);
  for (long k = 0; k < L->ppow_; ++k) {
    if (k < e) {
      L->ypow_.push_back({{static_cast<int>(k), 1}});
    } else {
      std::vector<std::pair<int, int>> v;
      for (long i = 0; i <= p - 2; ++i) v.push_back({static_cast<int>(k - e + i * pm), -1});
      L->ypow_.push_back(v);
    }
  }
  // power sums of the roots of g, then traces of the basis
  std::vector<u64> s(r, 0);
  for (int k = 0; k < r; ++k) {
    if (k == 0) {
      s[0] = static_cast<u64>(r) % M;
      continue;
    }
    // Newton: s_k = -k a_{r-k} - sum_{i=1}^{k-1} a_{r-i} s_{k-i}
    u64 acc = mulmod_u64(static_cast<u64>(k), L->g_[r - k], M);
    for (int i = 1; i < k; ++i) acc = addm(acc, mulmod_u64(L->g_[r - i], s[k - i], M), M);
    s[k] = subm(0, acc, M);
  }
  L->trace_.assign(static_cast<size_t>(r) * e, 0);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < e; ++j) {
      u64 cj;
      if (j == 0) cj = static_cast<u64>(e);
      else if (m >= 0 && j % pm == 0) cj = subm(0, static_cast<u64>(pm), M);
      else cj = 0;
      L->trace_[i * e + j] = mulmod_u64(s[i], cj, M);
    }
  }
  cache.emplace(key, L);
  return L;
}

// ---------------------------------------------------------------------------

LocalElement::LocalElement(LocalPtr L, int N) : L_(std::move(L)), N_(N) {
  if (N < 1 || N > L_->max_precision()) fail(ErrorKind::PrecisionTooLow, "precision out of range");
  mod_ = checked_prime_power(static_cast<u64>(L_->p()), N);
  c_.assign(static_cast<size_t>(L_->dim()), 0);
}

LocalElement LocalElement::from_int(LocalPtr L, int N, long long v) {
  LocalElement x(std::move(L), N);
  long long r = v % static_cast<long long>(x.mod_);
  if (r < 0) r += static_cast<long long>(x.mod_);
  x.c_[0] = static_cast<u64>(r);
  return x;
}

LocalElement LocalElement::from_modpn(LocalPtr L, const ModPN& v) {
  if (static_cast<long>(v.prime()) != L->p()) fail(ErrorKind::InvalidArgument, "prime mismatch");
  LocalElement x(std::move(L), v.precision());
  x.c_[0] = v.value();
  return x;
}

LocalElement LocalElement::monomial(LocalPtr L, int N, long a, long b) {
  LocalElement x(L, N);
  const auto& xp = L->xpow(mod_floor(a, L->fprime()));
  for (const auto& [j, sgn] : L->ypow(mod_floor(b, L->ppow()))) {
    for (int i = 0; i < L->r(); ++i) {
      u64 v = xp[i] % x.mod_;
      u64& slot = x.c_[j * L->r() + i];
      slot = sgn > 0 ? addm(slot, v, x.mod_) : subm(slot, v, x.mod_);
    }
  }
  return x;
}

bool LocalElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

int LocalElement::valuation() const {
  const int r = L_->r(), e = L_->e();
  const long p = L_->p();
  if (e == 1) {
    int v = N_;
    for (u64 c : c_) v = std::min(v, vp_u64(c, p, N_));
    return v;
  }
  // change to the basis (y - 1)^k: c'_k = sum_{j >= k} C(j, k) c_j
  std::vector<std::vector<u64>> binom(e, std::vector<u64>(e, 0));
  for (int j = 0; j < e; ++j) {
    binom[j][0] = 1 % mod_;
    for (int k = 1; k <= j; ++k) binom[j][k] = addm(binom[j - 1][k - 1], binom[j - 1][k], mod_);
  }
  int best = e * N_;
  for (int k = 0; k < e; ++k) {
    for (int i = 0; i < r; ++i) {
      u64 acc = 0;
      for (int j = k; j < e; ++j) acc = addm(acc, mulmod_u64(binom[j][k], c_[j * r + i], mod_), mod_);
      if (acc != 0) best = std::min(best, e * vp_u64(acc, p, N_) + k);
    }
  }
  return best;
}

bool LocalElement::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

ModPN LocalElement::constant_term() const {
  return ModPN(static_cast<u64>(L_->p()), N_, static_cast<long long>(c_[0]));
}

LocalElement LocalElement::reduce(int N) const {
  if (N > N_) fail(ErrorKind::PrecisionTooLow, "cannot raise precision by reduction");
  LocalElement r(L_, N);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] % r.mod_;
  return r;
}

LocalElement LocalElement::lift_precision(int N) const {
  if (N < N_) return reduce(N);
  LocalElement r(L_, N);
  r.c_ = c_;
  return r;
}

LocalElement LocalElement::divide_by_p(int k) const {
  if (k == 0) return *this;
  if (k >= N_) fail(ErrorKind::PrecisionTooLow, "division by p^k exhausts the precision");
  const u64 pk = checked_prime_power(static_cast<u64>(L_->p()), k);
  LocalElement r(L_, N_ - k);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] % pk != 0) fail(ErrorKind::NonIntegral, "element is not divisible by p^" + std::to_string(k));
    r.c_[i] = c_[i] / pk;
  }
  return r;
}

void LocalElement::require_same(const LocalElement& o) const {
  if (L_ != o.L_) fail(ErrorKind::InvalidArgument, "local elements of different fields");
}

LocalElement LocalElement::operator-() const {
  LocalElement r = *this;
  for (auto& c : r.c_) c = subm(0, c, mod_);
  return r;
}

LocalElement& LocalElement::operator+=(const LocalElement& o) {
  require_same(o);
  if (o.N_ < N_) *this = reduce(o.N_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = addm(c_[i], o.c_[i] % mod_, mod_);
  return *this;
}

LocalElement& LocalElement::operator-=(const LocalElement& o) {
  require_same(o);
  if (o.N_ < N_) *this = reduce(o.N_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = subm(c_[i], o.c_[i] % mod_, mod_);
  return *this;
}

LocalElement operator*(const LocalElement& a, const LocalElement& b) {
  a.require_same(b);
  const int N = std::min(a.N_, b.N_);
  const auto& L = a.L_;
  const int r = L->r(), e = L->e();
  LocalElement out(L, N);
  const u64 M = out.mod_;
  // Kronecker packing: x^i y^j -> z^{i + (2r-1) j}
  const int stride = 2 * r - 1;
  const size_t len = static_cast<size_t>(stride) * (e - 1) + r;
  std::vector<u64> pa(len, 0), pb(len, 0);
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < r; ++i) {
      pa[j * stride + i] = a.c_[j * r + i] % M;
      pb[j * stride + i] = b.c_[j * r + i] % M;
    }
  std::vector<u64> prod(2 * len - 1, 0);
  conv_mod(pa.data(), len, pb.data(), len, M, prod.data());
  // unpack to rows indexed by y-degree 0..2e-2, each an x-poly of length 2r-1
  const int ydeg = 2 * e - 1;
  std::vector<u64> rows(static_cast<size_t>(ydeg) * stride, 0);
  for (size_t k = 0; k < prod.size(); ++k) {
    if (prod[k] == 0) continue;
    size_t j = k / stride, i = k % stride;
    rows[j * stride + i] = addm(rows[j * stride + i], prod[k], M);
  }
  // y^j = -sum_{i=0}^{p-2} y^{j - e + i p^m} for j >= e
  if (e > 1) {
    const long p = L->p();
    const long pm = L->ppow() / p;
    for (int j = ydeg - 1; j >= e; --j) {
      u64* src = &rows[static_cast<size_t>(j) * stride];
      for (long t = 0; t <= p - 2; ++t) {
        u64* dst = &rows[static_cast<size_t>(j - e + t * pm) * stride];
        for (int i = 0; i < stride; ++i) dst[i] = subm(dst[i], src[i], M);
      }
      std::fill(src, src + stride, 0);
    }
  }
  for (int j = 0; j < e; ++j) {
    u64* row = &rows[static_cast<size_t>(j) * stride];
    reduce_mod_g(row, stride, L->ghat(), M);
    for (int i = 0; i < r; ++i) out.c_[j * r + i] = row[i];
  }
  return out;
}

LocalElement LocalElement::scaled(const ModPN& s) const {
  const int N = std::min(N_, s.precision());
  LocalElement r = reduce(N);
  const u64 v = s.value() % r.mod_;
  for (auto& c : r.c_) c = mulmod_u64(c, v, r.mod_);
  return r;
}

LocalElement LocalElement::pow(std::uint64_t k) const {
  LocalElement r = from_int(L_, N_, 1), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool operator==(const LocalElement& a, const LocalElement& b) {
  return a.L_ == b.L_ && a.N_ == b.N_ && a.c_ == b.c_;
}

LocalElement LocalElement::inverse() const {
  const long p = L_->p();
  const int r = L_->r(), e = L_->e();
  // residue: set y = 1 and reduce mod p, in F_p[x]/(g mod p)
  Poly res(r, 0);
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < r; ++i) res[i] = (res[i] + static_cast<long>(c_[j * r + i] % p)) % p;
  trim(res);
  if (res.empty()) fail(ErrorKind::NonUnitResidue, "element is not a unit");
  Poly gp = to_fp(L_->ghat(), p);
  auto [one, s, t] = pxgcd(res, gp, p);
  if (one != Poly{1}) fail(ErrorKind::NonUnitResidue, "residue is not invertible");
  LocalElement b(L_, N_);
  for (size_t i = 0; i < s.size(); ++i) b.c_[i] = static_cast<u64>(s[i]);
  const LocalElement two = from_int(L_, N_, 2);
  // 1 - u b lies in the maximal ideal, and each step doubles its valuation
  for (int it = 0; it < 64; ++it) {
    LocalElement err = from_int(L_, N_, 1) - (*this) * b;
    if (err.is_zero()) return b;
    b = b * (two - (*this) * b);
  }
  fail(ErrorKind::PrecisionTooLow, "Newton inversion did not converge");
}

LocalElement LocalElement::automorphism(long dx, long dy) const {
  const int r = L_->r(), e = L_->e();
  dx = mod_floor(dx, L_->fprime());
  dy = mod_floor(dy, L_->ppow());
  {
    bool ok = false;
    long t = 1 % L_->fprime();
    for (long k = 0; k <= L_->fprime() && !ok; ++k) {
      if (t == dx) ok = true;
      t = t * L_->p() % L_->fprime();
    }
    if (!ok) fail(ErrorKind::InvalidArgument, "x-part of the automorphism is not a Frobenius power");
    if (L_->m() >= 0 && gcd_l(dy, L_->p()) != 1) fail(ErrorKind::InvalidArgument, "y-part must be a unit");
  }
  LocalElement out(L_, N_);
  for (int j = 0; j < e; ++j) {
    const auto& yp = L_->ypow(static_cast<long>(j) * dy % L_->ppow());
    for (int i = 0; i < r; ++i) {
      const u64 c = c_[j * r + i];
      if (c == 0) continue;
      const auto& xp = L_->xpow(static_cast<long>(i) * dx % L_->fprime());
      for (const auto& [jj, sgn] : yp) {
        u64* row = &out.c_[static_cast<size_t>(jj) * r];
        for (int k = 0; k < r; ++k) {
          u64 t = mulmod_u64(c, xp[k] % mod_, mod_);
          row[k] = sgn > 0 ? addm(row[k], t, mod_) : subm(row[k], t, mod_);
        }
      }
    }
  }
  return out;
}

std::string LocalElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  const int r = L_->r();
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[k];
    int i = static_cast<int>(k) % r, j = static_cast<int>(k) / r;
    if (i) os << "*x^" << i;
    if (j) os << "*y^" << j;
  }
  if (first) os << "0";
  os << " (mod " << L_->p() << "^" << N_ << ")";
  return os.str();
}

std::vector<std::pair<long, long>> local_automorphisms(const LocalPtr& L) {
  std::vector<long> xs;
  long t = 1 % L->fprime();
  for (int k = 0; k < L->r(); ++k) {
    xs.push_back(t);
    t = t * L->p() % L->fprime();
  }
  std::vector<long> ys;
  for (long d = 0; d < L->ppow(); ++d)
    if (L->ppow() == 1 || gcd_l(d, L->p()) == 1) ys.push_back(d);
  std::vector<std::pair<long, long>> out;
  for (long a : xs)
    for (long b : ys) out.push_back({a, b});
  return out;
}

namespace {

// Number of terms K such that k vz - e v_p(k) >= e N for every k >= K.
int series_length(int vz, int e, long p, int N, const std::function<int(long)>& vden) {
  const long bound = 4L * e * (N + 10) / vz + 4 * p;
  long K = 1;
  for (long k = 1; k <= bound; ++k)
    if (k * vz - static_cast<long>(e) * vden(k) < static_cast<long>(e) * N) K = k + 1;
  return static_cast<int>(K);
}

}  // namespace

LocalElement log_p(const LocalElement& u) {
  const auto& L = u.field();
  const int N = u.precision(), e = L->e();
  const long p = L->p();
  LocalElement z = u - LocalElement::from_int(L, N, 1);
  if (z.is_zero()) return LocalElement(L, N);
  int vz = z.valuation();
  if (vz < 1) fail(ErrorKind::NotPrincipalUnit, "log_p needs a principal unit");
  // Raise to p-th powers until v(w - 1) > e/(p-1), where every term z^k/k is integral;
  // then log u = p^{-t} log(u^{p^t}).
  int t = 0;
  LocalElement w = u;
  while (static_cast<long>(vz) * (p - 1) <= e) {
    ++t;
    if (N + t > L->max_precision()) fail(ErrorKind::PrecisionTooLow, "log_p: precision budget exhausted");
    w = w.lift_precision(N + t).pow(static_cast<u64>(p));
    LocalElement zz = w - LocalElement::from_int(L, N + t, 1);
    if (zz.is_zero()) return LocalElement(L, N);
    vz = zz.valuation();
  }
  const int Nt = N + t;
  auto vden = [p](long k) { return vp_int(k, p); };
  const int K = series_length(vz, e, p, Nt, vden);
  int extra = 0;
  for (long k = 1; k < K; ++k) extra = std::max(extra, vden(k));
  if (Nt + extra > L->max_precision()) fail(ErrorKind::PrecisionTooLow, "log_p needs more digits than available");
  // Residues of z^k are exact modulo p^{Nt + v_p(k)} whatever lift of z is used.
  LocalElement zw = w.lift_precision(Nt + extra) - LocalElement::from_int(L, Nt + extra, 1);
  LocalElement acc(L, Nt), term = zw;
  for (long k = 1; k < K; ++k) {
    const int v = vden(k);
    long unit = k;
    for (int i = 0; i < v; ++i) unit /= p;
    LocalElement tk = term.divide_by_p(v).reduce(Nt).scaled(
        ModPN(static_cast<u64>(p), Nt, static_cast<long long>(unit)).inverse());
    if (k % 2 == 0) acc -= tk;
    else acc += tk;
    term = term * zw;
  }
  if (t == 0) return acc;
  try {
    return acc.divide_by_p(t);
  } catch (const StarkError&) {
    fail(ErrorKind::NonIntegral, "log_p(u) is not integral");
  }
}

LocalElement exp_p(const LocalElement& z) {
  const auto& L = z.field();
  const int N = z.precision(), e = L->e();
  const long p = L->p();
  if (z.is_zero()) return LocalElement::from_int(L, N, 1);
  const int vz = z.valuation();
  if (static_cast<long>(vz) * (p - 1) <= e) fail(ErrorKind::NonIntegral, "exp_p: z outside the convergence disc");
  auto vfact = [p](long k) {
    int v = 0;
    for (long q = p; q <= k; q *= p) v += static_cast<int>(k / q);
    return v;
  };
  const int K = series_length(vz, e, p, N, vfact);
  const int extra = vfact(K);
  if (N + extra > L->max_precision()) fail(ErrorKind::PrecisionTooLow, "exp_p needs more digits than available");
  LocalElement zw = z.lift_precision(N + extra);
  LocalElement acc = LocalElement::from_int(L, N, 1), term = zw;
  ModPN unit_inv(static_cast<u64>(p), N, 1LL);
  for (long k = 1; k < K; ++k) {
    long kk = k;
    while (kk % p == 0) kk /= p;
    unit_inv = unit_inv * ModPN(static_cast<u64>(p), N, static_cast<long long>(kk)).inverse();
    acc += term.divide_by_p(vfact(k)).reduce(N).scaled(unit_inv);
    term = term * zw;
  }
  return acc;
}

ModPN trace_to_Qp(const LocalElement& x) {
  const auto& L = x.field();
  const u64 M = x.modulus();
  u64 acc = 0;
  for (int j = 0; j < L->e(); ++j)
    for (int i = 0; i < L->r(); ++i)
      acc = addm(acc, mulmod_u64(x.coeff(i, j), L->basis_trace(i, j) % M, M), M);
  return ModPN(static_cast<u64>(L->p()), x.precision(), static_cast<long long>(acc));
}

ModPN norm_to_Qp(const LocalElement& x) {
  LocalElement acc = LocalElement::from_int(x.field(), x.precision(), 1);
  for (auto [dx, dy] : local_automorphisms(x.field())) acc = acc * x.automorphism(dx, dy);
  if (!acc.is_rational()) fail(ErrorKind::InvalidArgument, "norm is not in Z_p");
  return acc.constant_term();
}

// ---------------------------------------------------------------------------

UnramifiedEmbedding::UnramifiedEmbedding(long p, long e, int N) : L_(build_local(p, e, -1)), e_(e), N_(N) {}

LocalElement UnramifiedEmbedding::image(const CyclotomicNumber& z) const {
  if (e_ % z.modulus() != 0) fail(ErrorKind::InvalidArgument, "number is not in Q(xi_e)");
  CyclotomicNumber w = cyc_embed(z, e_);
  LocalElement out(L_, N_);
  const auto& c = w.coeffs();
  for (size_t k = 0; k < c.size(); ++k) {
    if (sgn(c[k]) == 0) continue;
    ModPN v = ModPN::from_rational(static_cast<u64>(L_->p()), N_, c[k]);
    out += LocalElement::monomial(L_, N_, static_cast<long>(k), 0).scaled(v);
  }
  return out;
}

bool UnramifiedEmbedding::congruent_mod_p(const CyclotomicNumber& z, long a) const {
  LocalElement d = image(z) - LocalElement::from_int(L_, N_, a);
  return d.valuation() >= 1;
}

int prime_valuation(const CyclotomicNumber& z, long p) {
  if (z.is_zero()) fail(ErrorKind::InvalidArgument, "valuation of zero");
  if (z.modulus() % p == 0) fail(ErrorKind::InvalidArgument, "p divides the cyclotomic modulus");
  int s = INT32_MAX;
  for (const auto& c : z.coeffs())
    if (sgn(c) != 0) s = std::min(s, vp_rat(c, p));
  Integer ps = 1;
  for (int i = 0; i < std::abs(s); ++i) ps *= p;
  CyclotomicNumber w = s >= 0 ? z * Rational(Integer(1), ps) : z * Rational(ps);
  const int Nmax = max_precision_for(p);
  for (int N = 4;; N = std::min(2 * N, Nmax)) {
    UnramifiedEmbedding emb(p, z.modulus(), N);
    LocalElement img = emb.image(w);
    if (!img.is_zero()) return s + img.valuation();
    if (N == Nmax) fail(ErrorKind::PrecisionTooLow, "valuation exceeds the available precision");
  }
}

}  // namespace starklab
