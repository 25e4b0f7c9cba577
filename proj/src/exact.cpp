#include "starklab/exact.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace starklab {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonUnitResidue: return "NonUnitResidue";
    case ErrorKind::NotInSubfield: return "NotInSubfield";
    case ErrorKind::NoComplexConjugation: return "NoComplexConjugation";
    case ErrorKind::CharacterUndefined: return "CharacterUndefined";
    case ErrorKind::RamifiedPrime: return "RamifiedPrime";
    case ErrorKind::NotCM: return "NotCM";
    case ErrorKind::BadPlaceSet: return "BadPlaceSet";
    case ErrorKind::PDividesGroupOrder: return "PDividesGroupOrder";
    case ErrorKind::EvenCharacter: return "EvenCharacter";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::NotPrincipalUnit: return "NotPrincipalUnit";
    case ErrorKind::NonIntegral: return "NonIntegral";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::UnsupportedFirstArgument: return "UnsupportedFirstArgument";
    case ErrorKind::IntegralityFailure: return "IntegralityFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------

long mod_floor(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long gcd_l(long a, long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long lcm_l(long a, long b) { return a / gcd_l(a, b) * b; }

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<long, int>> factorize(long n) {
  std::vector<std::pair<long, int>> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

long euler_phi(long n) {
  long r = n;
  for (auto [q, e] : factorize(n)) r = r / q * (q - 1);
  return r;
}

long pow_mod(long a, long e, long m) {
  if (m == 1) return 0;
  unsigned __int128 base = static_cast<unsigned long>(mod_floor(a, m));
  unsigned __int128 r = 1;
  while (e > 0) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<long>(r);
}

long inv_mod(long a, long m) {
  if (m == 1) return 0;
  long g = m, x = mod_floor(a, m), s0 = 0, s1 = 1;
  long r0 = g, r1 = x;
  while (r1 != 0) {
    long q = r0 / r1;
    long t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) fail(ErrorKind::NonUnitResidue, std::to_string(a) + " is not a unit mod " + std::to_string(m));
  return mod_floor(s0, m);
}

long mult_order(long a, long m) {
  if (gcd_l(a, m) != 1) fail(ErrorKind::NonUnitResidue, "order of a non-unit");
  long x = mod_floor(a, m) % m, k = 1;
  if (m == 1) return 1;
  long y = x;
  while (y != 1) {
    y = static_cast<long>(static_cast<__int128>(y) * x % m);
    ++k;
  }
  return k;
}

int vp_int(long n, long p) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int vp_int(const Integer& n, long p) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "valuation of zero");
  Integer m = n;
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

int vp_rat(const Rational& q, long p) { return vp_int(q.get_num(), p) - vp_int(q.get_den(), p); }

std::pair<int, long> split_p_part(long f, long p) {
  int v = 0;
  while (f % p == 0) {
    f /= p;
    ++v;
  }
  return {v, f};
}

long lift_unit(long a, long m0, long m) {
  if (m == 1) return 0;
  for (long b = mod_floor(a, m0); b < m + m0; b += m0)
    if (gcd_l(b, m) == 1) return b % m;
  fail(ErrorKind::NonUnitResidue, "no unit lift of " + std::to_string(a) + " mod " + std::to_string(m0));
}

long crt_pair(long a, long m1, long b, long m2) {
  if (m1 == 1) return mod_floor(b, m2);
  if (m2 == 1) return mod_floor(a, m1);
  long t = static_cast<long>(static_cast<__int128>(mod_floor(b - a, m2)) * inv_mod(m1, m2) % m2);
  return mod_floor(a + m1 * t, m1 * m2);
}

// ---------------------------------------------------------------------------

namespace {

struct CycloData {
  IntPoly phi;
  long deg = 0;
  std::vector<std::vector<Integer>> xpow;  // x^k mod Phi_f, 0 <= k < f
};

IntPoly poly_divexact_monic(const IntPoly& a, const IntPoly& b) {
  IntPoly r = a;
  size_t db = b.size() - 1;
  if (r.size() < b.size()) return IntPoly{0};
  IntPoly q(r.size() - db, 0);
  for (size_t i = r.size(); i-- > db;) {
    Integer c = r[i];
    q[i - db] = c;
    if (c == 0) continue;
    for (size_t j = 0; j <= db; ++j) r[i - db + j] -= c * b[j];
  }
  return q;
}

std::shared_mutex g_cyclo_mutex;
std::map<long, std::unique_ptr<CycloData>> g_cyclo;

const CycloData& cyclo_data(long f) {
  if (f < 1) fail(ErrorKind::InvalidArgument, "cyclotomic modulus must be positive");
  {
    std::shared_lock lock(g_cyclo_mutex);
    auto it = g_cyclo.find(f);
    if (it != g_cyclo.end()) return *it->second;
  }
  auto data = std::make_unique<CycloData>();
  IntPoly num(f + 1, 0);
  num[0] = -1;
  num[f] = 1;
  for (long d = 1; d < f; ++d)
    if (f % d == 0) num = poly_divexact_monic(num, cyclotomic_poly(d));
  data->phi = num;
  data->deg = static_cast<long>(num.size()) - 1;
  const long n = data->deg;
  data->xpow.assign(f, std::vector<Integer>(n, 0));
  std::vector<Integer> cur(n, 0);
  if (n > 0) cur[0] = 1;
  for (long k = 0; k < f; ++k) {
    data->xpow[k] = cur;
    // multiply by x and reduce with the monic relation
    Integer top = cur[n - 1];
    for (long i = n - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0)
      for (long i = 0; i < n; ++i) cur[i] -= top * data->phi[i];
  }
  std::unique_lock lock(g_cyclo_mutex);
  auto [it, inserted] = g_cyclo.emplace(f, std::move(data));
  return *it->second;
}

}  // namespace

const IntPoly& cyclotomic_poly(long f) { return cyclo_data(f).phi; }

std::string poly_to_string(const IntPoly& p) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = p.size(); i-- > 0;) {
    if (p[i] == 0) continue;
    Integer c = p[i];
    if (!first) os << (c > 0 ? "+" : "-");
    else if (c < 0) os << "-";
    Integer a = abs(c);
    if (a != 1 || i == 0) os << a.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

CyclotomicNumber::CyclotomicNumber() : CyclotomicNumber(1) {}

CyclotomicNumber::CyclotomicNumber(long f) : f_(f), c_(cyclo_data(f).deg, Rational(0)) {}

CyclotomicNumber::CyclotomicNumber(long f, const Rational& c) : CyclotomicNumber(f) { c_[0] = c; }

CyclotomicNumber::CyclotomicNumber(long f, const std::vector<Rational>& poly) : CyclotomicNumber(f) {
  const CycloData& d = cyclo_data(f);
  for (size_t k = 0; k < poly.size(); ++k) {
    if (sgn(poly[k]) == 0) continue;
    if (static_cast<long>(k) < d.deg) {
      c_[k] += poly[k];
    } else {
      const auto& xp = d.xpow[k % f];
      for (long i = 0; i < d.deg; ++i)
        if (xp[i] != 0) c_[i] += poly[k] * xp[i];
    }
  }
}

CyclotomicNumber CyclotomicNumber::xi(long f, long k) {
  std::vector<Rational> poly(mod_floor(k, f) + 1, Rational(0));
  poly.back() = 1;
  return CyclotomicNumber(f, poly);
}

bool CyclotomicNumber::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool CyclotomicNumber::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Rational CyclotomicNumber::rational_value() const {
  if (!is_rational()) fail(ErrorKind::NotInSubfield, "cyclotomic number is not rational");
  return c_[0];
}

void CyclotomicNumber::require_same(const CyclotomicNumber& o) const {
  if (f_ != o.f_)
    fail(ErrorKind::InvalidArgument,
         "mixing Q(xi_" + std::to_string(f_) + ") and Q(xi_" + std::to_string(o.f_) + ") without an explicit embedding");
}

CyclotomicNumber CyclotomicNumber::operator-() const {
  CyclotomicNumber r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

CyclotomicNumber& CyclotomicNumber::operator+=(const CyclotomicNumber& o) {
  require_same(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CyclotomicNumber& CyclotomicNumber::operator-=(const CyclotomicNumber& o) {
  require_same(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const Rational& q) {
  for (auto& c : c_) c *= q;
  return *this;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const CyclotomicNumber& o) {
  *this = *this * o;
  return *this;
}

CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
  a.require_same(b);
  const size_t n = a.c_.size();
  if (a.is_rational()) return CyclotomicNumber(b) *= a.c_[0];
  if (b.is_rational()) return CyclotomicNumber(a) *= b.c_[0];
  std::vector<Rational> prod(2 * n - 1, Rational(0));
  for (size_t i = 0; i < n; ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (size_t j = 0; j < n; ++j)
      if (sgn(b.c_[j]) != 0) prod[i + j] += a.c_[i] * b.c_[j];
  }
  return CyclotomicNumber(a.f_, prod);
}

bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) { return a.f_ == b.f_ && a.c_ == b.c_; }

CyclotomicNumber CyclotomicNumber::inverse() const {
  if (is_zero()) fail(ErrorKind::InvalidArgument, "inverse of zero in Q(xi_f)");
  if (is_rational()) return CyclotomicNumber(f_, Rational(1) / c_[0]);
  const size_t n = c_.size();
  // column j of the multiplication matrix is z * x^j
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
  CyclotomicNumber col = *this;
  const CyclotomicNumber x = xi(f_, 1);
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = 0; i < n; ++i) A[i][j] = col.c_[i];
    col = col * x;
  }
  std::vector<Rational> rhs(n, Rational(0));
  rhs[0] = 1;
  auto sol = solve_rational(A, rhs);
  if (!sol) fail(ErrorKind::InvalidArgument, "singular multiplication matrix");
  return CyclotomicNumber(f_, *sol);
}

CyclotomicNumber CyclotomicNumber::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CyclotomicNumber r(f_, Rational(1)), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::string CyclotomicNumber::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    if (!first) os << " + ";
    os << "(" << c_[i].get_str() << ")";
    if (i >= 1) os << "*z" << f_;
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

CyclotomicNumber operator/(const CyclotomicNumber& a, const CyclotomicNumber& b) { return a * b.inverse(); }

CyclotomicNumber cyc_galois(long a, const CyclotomicNumber& z) {
  const long f = z.modulus();
  if (gcd_l(a, f) != 1) fail(ErrorKind::NonUnitResidue, "galois element " + std::to_string(a) + " mod " + std::to_string(f));
  const long am = mod_floor(a, f);
  std::vector<Rational> poly(f, Rational(0));
  const auto& c = z.coeffs();
  for (size_t i = 0; i < c.size(); ++i)
    if (sgn(c[i]) != 0) poly[(am * static_cast<long>(i)) % f] += c[i];
  return CyclotomicNumber(f, poly);
}

CyclotomicNumber cyc_embed(const CyclotomicNumber& z, long g) {
  const long f = z.modulus();
  if (g % f != 0) fail(ErrorKind::InvalidArgument, "cyc_embed needs f | g");
  const long s = g / f;
  std::vector<Rational> poly(g, Rational(0));
  const auto& c = z.coeffs();
  for (size_t i = 0; i < c.size(); ++i)
    if (sgn(c[i]) != 0) poly[(s * static_cast<long>(i)) % g] += c[i];
  return CyclotomicNumber(g, poly);
}

CyclotomicNumber cyc_project(const CyclotomicNumber& z, long f0) {
  const long f = z.modulus();
  if (f % f0 != 0) fail(ErrorKind::InvalidArgument, "cyc_project needs f0 | f");
  if (f0 == f) return z;
  const long n0 = euler_phi(f0), n = euler_phi(f);
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n0));
  for (long j = 0; j < n0; ++j) {
    CyclotomicNumber img = cyc_embed(CyclotomicNumber::xi(f0, j), f);
    for (long i = 0; i < n; ++i) A[i][j] = img.coeffs()[i];
  }
  auto sol = solve_rational(A, z.coeffs());
  if (!sol) fail(ErrorKind::NotInSubfield, "element of Q(xi_" + std::to_string(f) + ") not in Q(xi_" + std::to_string(f0) + ")");
  return CyclotomicNumber(f0, *sol);
}

std::optional<std::vector<Rational>> solve_rational(std::vector<std::vector<Rational>> A, std::vector<Rational> b) {
  const size_t rows = A.size();
  const size_t cols = rows ? A[0].size() : 0;
  std::vector<size_t> pivcol;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && sgn(A[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(A[piv], A[r]);
    std::swap(b[piv], b[r]);
    Rational inv = Rational(1) / A[r][c];
    for (size_t k = c; k < cols; ++k) A[r][k] *= inv;
    b[r] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(A[i][c]) == 0) continue;
      Rational m = A[i][c];
      for (size_t k = c; k < cols; ++k)
        if (sgn(A[r][k]) != 0) A[i][k] -= m * A[r][k];
      b[i] -= m * b[r];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (sgn(b[i]) != 0) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (size_t i = 0; i < r; ++i) x[pivcol[i]] = b[i];
  return x;
}

// ---------------------------------------------------------------------------

std::uint64_t checked_prime_power(std::uint64_t p, int N) {
  if (N < 1) fail(ErrorKind::InvalidArgument, "precision must be >= 1");
  unsigned __int128 m = 1;
  for (int i = 0; i < N; ++i) {
    m *= p;
    if (m >= (static_cast<unsigned __int128>(1) << 62))
      fail(ErrorKind::PrecisionTooLow, "p^N exceeds the 62-bit residue capacity");
  }
  return static_cast<std::uint64_t>(m);
}

ModPN::ModPN(std::uint64_t p, int N, long long value) : p_(p), N_(N), mod_(checked_prime_power(p, N)) {
  long long r = value % static_cast<long long>(mod_);
  if (r < 0) r += static_cast<long long>(mod_);
  v_ = static_cast<std::uint64_t>(r);
}

ModPN::ModPN(std::uint64_t p, int N, const Integer& value) : p_(p), N_(N), mod_(checked_prime_power(p, N)) {
  Integer m;
  mpz_set_ui(m.get_mpz_t(), mod_);
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), m.get_mpz_t());
  v_ = mpz_get_ui(r.get_mpz_t());
}

ModPN ModPN::from_rational(std::uint64_t p, int N, const Rational& q) {
  ModPN num(p, N, q.get_num());
  ModPN den(p, N, q.get_den());
  if (!den.is_unit()) fail(ErrorKind::NonIntegral, "rational " + q.get_str() + " is not p-integral");
  return num * den.inverse();
}

long long ModPN::centered() const {
  long long v = static_cast<long long>(v_);
  if (v_ > mod_ / 2) v -= static_cast<long long>(mod_);
  return v;
}

int ModPN::valuation() const {
  if (v_ == 0) return N_;
  int k = 0;
  std::uint64_t x = v_;
  while (x % p_ == 0) {
    x /= p_;
    ++k;
  }
  return k;
}

ModPN ModPN::reduce(int N) const {
  if (N > N_) fail(ErrorKind::InvalidArgument, "cannot raise precision by reduction");
  ModPN r = *this;
  r.N_ = N;
  r.mod_ = checked_prime_power(p_, N);
  r.v_ = v_ % r.mod_;
  return r;
}

void ModPN::require_same_prime(const ModPN& o) const {
  if (p_ != o.p_) fail(ErrorKind::InvalidArgument, "ModPN prime mismatch");
}

ModPN ModPN::operator-() const {
  ModPN r = *this;
  r.v_ = v_ == 0 ? 0 : mod_ - v_;
  return r;
}

ModPN& ModPN::operator+=(const ModPN& o) {
  require_same_prime(o);
  if (o.N_ < N_) *this = reduce(o.N_);
  std::uint64_t ov = o.v_ % mod_;
  v_ = (v_ + ov) % mod_;
  return *this;
}

ModPN& ModPN::operator-=(const ModPN& o) {
  require_same_prime(o);
  if (o.N_ < N_) *this = reduce(o.N_);
  std::uint64_t ov = o.v_ % mod_;
  v_ = (v_ + mod_ - ov) % mod_;
  return *this;
}

ModPN& ModPN::operator*=(const ModPN& o) {
  require_same_prime(o);
  if (o.N_ < N_) *this = reduce(o.N_);
  v_ = mulmod_u64(v_, o.v_ % mod_, mod_);
  return *this;
}

ModPN ModPN::inverse() const {
  if (!is_unit()) fail(ErrorKind::NonUnitResidue, "ModPN inverse of non-unit " + to_string());
  Integer a, m, r;
  mpz_set_ui(a.get_mpz_t(), v_);
  mpz_set_ui(m.get_mpz_t(), mod_);
  mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return ModPN(p_, N_, r);
}

ModPN ModPN::pow(std::uint64_t e) const {
  ModPN r(p_, N_, 1LL), b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

std::string ModPN::to_string() const {
  return std::to_string(v_) + " mod " + std::to_string(p_) + "^" + std::to_string(N_);
}

}  // namespace starklab
