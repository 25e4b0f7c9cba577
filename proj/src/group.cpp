#include "starklab/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace starklab {

std::vector<long> unit_subgroup(long f, const std::vector<long>& gens) {
  std::set<long> seen{1 % f};
  std::vector<long> frontier{1 % f};
  std::vector<long> g;
  for (long a : gens) {
    long r = mod_floor(a, f);
    if (gcd_l(r, f) != 1 && f > 1) fail(ErrorKind::NonUnitResidue, "subgroup generator " + std::to_string(a) + " mod " + std::to_string(f));
    g.push_back(r);
  }
  while (!frontier.empty()) {
    std::vector<long> next;
    for (long x : frontier)
      for (long a : g) {
        long y = f == 1 ? 0 : static_cast<long>(static_cast<__int128>(x) * a % f);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier.swap(next);
  }
  return {seen.begin(), seen.end()};
}

namespace {

long primitive_root_prime_power(long q, int v) {
  long m = ipow(q, v);
  long target = euler_phi(m);
  for (long g = 2; g < m; ++g) {
    if (gcd_l(g, q) != 1) continue;
    if (mult_order(g, m) == target) return g;
  }
  return 1;
}

}  // namespace

std::vector<long> unit_group_generators(long f) {
  std::vector<long> gens;
  if (f <= 2) return gens;
  auto fac = factorize(f);
  for (auto [q, v] : fac) {
    long qv = ipow(q, v);
    long rest = f / qv;
    auto embed = [&](long local) { return crt_pair(local, qv, 1, rest); };
    if (q == 2) {
      if (v >= 2) gens.push_back(embed(qv - 1));
      if (v >= 3) gens.push_back(embed(5));
    } else {
      gens.push_back(embed(primitive_root_prime_power(q, v)));
    }
  }
  return gens;
}

GroupPtr AbelianGroup::make(long f, const std::vector<long>& H_gens, const std::optional<std::vector<long>>& Hprime_gens) {
  if (f < 1) fail(ErrorKind::InvalidArgument, "modulus must be positive");
  auto G = std::shared_ptr<AbelianGroup>(new AbelianGroup());
  G->f_ = f;
  G->H_ = unit_subgroup(f, H_gens);
  std::vector<long> gens;
  if (Hprime_gens) {
    std::vector<long> all = *Hprime_gens;
    all.insert(all.end(), H_gens.begin(), H_gens.end());
    G->Hp_ = unit_subgroup(f, all);
    gens = *Hprime_gens;
  } else {
    gens = unit_group_generators(f);
    G->Hp_ = unit_subgroup(f, gens);
  }
  for (long h : G->H_)
    if (!std::binary_search(G->Hp_.begin(), G->Hp_.end(), h)) fail(ErrorKind::InvalidArgument, "H must be contained in H'");

  // cosets of H inside H', labelled by smallest representative
  G->index_.assign(f, -1);
  for (long a : G->Hp_) {
    if (G->index_[a] >= 0) continue;
    int idx = static_cast<int>(G->reps_.size());
    G->reps_.push_back(a);
    for (long h : G->H_) {
      long b = f == 1 ? 0 : static_cast<long>(static_cast<__int128>(a) * h % f);
      G->index_[b] = idx;
    }
  }
  const int n = G->order();
  G->mul_.resize(static_cast<size_t>(n) * n);
  G->inv_.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G->mul_[i * n + j] = G->index_of(static_cast<long>(static_cast<__int128>(G->reps_[i]) * G->reps_[j] % f));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (G->mul_[i * n + j] == 0) G->inv_[i] = j;
  // Greedy irredundant generating list keeps the relation box small.
  std::vector<long> gclean;
  std::vector<int> gidx;
  for (long a : gens) {
    int i = G->index_of(a);
    if (i < 0) fail(ErrorKind::InvalidArgument, "generator outside H'");
    auto span = G->subgroup_generated(gidx);
    if (std::binary_search(span.begin(), span.end(), i)) continue;
    gidx.push_back(i);
    gclean.push_back(mod_floor(a, f));
  }
  G->build_structure(gclean);
  return G;
}

int AbelianGroup::index_of(long a) const {
  long r = mod_floor(a, f_);
  return index_[r];
}

int AbelianGroup::pow(int i, long e) const {
  int r = 0;
  int b = e < 0 ? inv(i) : i;
  long k = e < 0 ? -e : e;
  while (k > 0) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

int AbelianGroup::element_order(int i) const {
  int k = 1, x = i;
  while (x != 0) {
    x = mul(x, i);
    ++k;
  }
  return k;
}

std::optional<int> AbelianGroup::complex_conjugation() const {
  int c = index_of(f_ - 1);
  if (c <= 0) return std::nullopt;
  return c;
}

std::vector<int> AbelianGroup::subgroup_generated(const std::vector<int>& gens) const {
  std::vector<char> in(order(), 0);
  std::vector<int> elems{0};
  in[0] = 1;
  for (size_t k = 0; k < elems.size(); ++k)
    for (int g : gens) {
      int y = mul(elems[k], g);
      if (!in[y]) {
        in[y] = 1;
        elems.push_back(y);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

GroupPtr AbelianGroup::subgroup(const std::vector<int>& elems) const {
  std::vector<long> gens;
  for (int e : elems) gens.push_back(reps_[e]);
  return make(f_, H_, gens);
}

GroupPtr AbelianGroup::quotient(const std::vector<long>& extra_H_gens) const {
  std::vector<long> hg = H_;
  hg.insert(hg.end(), extra_H_gens.begin(), extra_H_gens.end());
  return make(f_, hg, Hp_);
}

std::pair<std::vector<Integer>, std::vector<std::vector<Integer>>> smith_normal_form(std::vector<std::vector<Integer>> M,
                                                                                     size_t cols) {
  const size_t rows = M.size();
  // Qi is the inverse of the accumulated column transform Q.
  std::vector<std::vector<Integer>> Qi(cols, std::vector<Integer>(cols, 0));
  for (size_t i = 0; i < cols; ++i) Qi[i][i] = 1;
  auto col_op = [&](size_t dst, size_t src, const Integer& q) {  // col_dst -= q col_src
    for (size_t i = 0; i < rows; ++i) M[i][dst] -= q * M[i][src];
    for (size_t i = 0; i < cols; ++i) Qi[src][i] += q * Qi[dst][i];
  };
  auto col_swap = [&](size_t a, size_t b) {
    for (size_t i = 0; i < rows; ++i) std::swap(M[i][a], M[i][b]);
    std::swap(Qi[a], Qi[b]);
  };
  std::vector<Integer> diag;
  for (size_t t = 0; t < cols && t < rows; ++t) {
    while (true) {
      // smallest nonzero pivot in the trailing block
      size_t bi = rows, bj = cols;
      for (size_t i = t; i < rows; ++i)
        for (size_t j = t; j < cols; ++j)
          if (M[i][j] != 0 && (bi == rows || abs(M[i][j]) < abs(M[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == rows) {
        diag.resize(cols, 0);
        return {diag, Qi};
      }
      std::swap(M[t], M[bi]);
      if (bj != t) col_swap(t, bj);
      bool dirty = false;
      for (size_t i = t + 1; i < rows; ++i) {
        if (M[i][t] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), M[i][t].get_mpz_t(), M[t][t].get_mpz_t());
        for (size_t j = t; j < cols; ++j) M[i][j] -= q * M[t][j];
        if (M[i][t] != 0) dirty = true;
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (M[t][j] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), M[t][j].get_mpz_t(), M[t][t].get_mpz_t());
        col_op(j, t, q);
        if (M[t][j] != 0) dirty = true;
      }
      if (dirty) continue;
      bool divisible = true;
      for (size_t i = t + 1; i < rows && divisible; ++i)
        for (size_t j = t + 1; j < cols; ++j)
          if (M[i][j] % M[t][t] != 0) {
            for (size_t k = t; k < cols; ++k) M[t][k] += M[i][k];
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    diag.push_back(abs(M[t][t]));
  }
  diag.resize(cols, 0);
  return {diag, Qi};
}

void AbelianGroup::build_structure(const std::vector<long>& gens) {
  const int n = order();
  std::vector<int> g;
  for (long a : gens) {
    int i = index_of(a);
    if (i < 0) fail(ErrorKind::InvalidArgument, "generator outside H'");
    g.push_back(i);
  }
  const size_t k = g.size();
  std::vector<long> ord(k);
  for (size_t i = 0; i < k; ++i) ord[i] = element_order(g[i]);

  // Relations: ord_i e_i, plus differences of box vectors with equal image.
  std::vector<std::vector<Integer>> rel;
  for (size_t i = 0; i < k; ++i) {
    std::vector<Integer> r(k, 0);
    r[i] = ord[i];
    rel.push_back(r);
  }
  std::vector<std::vector<long>> first(n);
  std::vector<long> v(k, 0);
  bool done = (k == 0);
  if (k == 0) first[0] = {};
  while (!done) {
    int e = 0;
    for (size_t i = 0; i < k; ++i) e = mul(e, pow(g[i], v[i]));
    if (first[e].empty() && e != 0) {
      first[e] = v;
    } else {
      std::vector<long> base = e == 0 ? std::vector<long>(k, 0) : first[e];
      std::vector<Integer> r(k);
      bool nz = false;
      for (size_t i = 0; i < k; ++i) {
        r[i] = v[i] - base[i];
        if (r[i] != 0) nz = true;
      }
      if (nz) rel.push_back(r);
    }
    size_t i = 0;
    while (i < k) {
      if (++v[i] < ord[i]) break;
      v[i] = 0;
      ++i;
    }
    if (i == k) done = true;
  }

  inv_factors_.clear();
  basis_.clear();
  if (k > 0) {
    // Exponent vectors x map to y = xQ, so the new generators are the rows of Q^{-1}.
    auto [diag, Qi] = smith_normal_form(rel, k);
    for (size_t j = 0; j < k; ++j) {
      if (diag[j] <= 1) continue;
      int h = 0;
      for (size_t i = 0; i < k; ++i) h = mul(h, pow(g[i], Qi[j][i].get_si()));
      inv_factors_.push_back(diag[j].get_si());
      basis_.push_back(h);
    }
  }
  exponent_ = 1;
  for (long d : inv_factors_) exponent_ = lcm_l(exponent_, d);

  coords_.assign(n, {});
  std::vector<char> hit(n, 0);
  const size_t r = inv_factors_.size();
  std::vector<long> y(r, 0);
  long count = 0;
  while (true) {
    int e = 0;
    for (size_t j = 0; j < r; ++j) e = mul(e, pow(basis_[j], y[j]));
    if (hit[e]) fail(ErrorKind::InvalidArgument, "invariant-factor basis is not independent");
    hit[e] = 1;
    coords_[e] = y;
    ++count;
    size_t j = 0;
    while (j < r) {
      if (++y[j] < inv_factors_[j]) break;
      y[j] = 0;
      ++j;
    }
    if (j == r) break;
  }
  if (count != n) fail(ErrorKind::InvalidArgument, "invariant-factor basis does not reproduce the group");
}

// ---------------------------------------------------------------------------

Character::Character(GroupPtr G, std::vector<long> k) : G_(std::move(G)), k_(std::move(k)) {
  const auto& d = G_->invariant_factors();
  if (k_.size() != d.size()) fail(ErrorKind::InvalidArgument, "character exponent vector has the wrong length");
  for (size_t j = 0; j < d.size(); ++j) k_[j] = mod_floor(k_[j], d[j]);
}

std::vector<Character> Character::all(const GroupPtr& G) {
  const auto& d = G->invariant_factors();
  std::vector<Character> out;
  std::vector<long> k(d.size(), 0);
  while (true) {
    out.emplace_back(G, k);
    size_t j = 0;
    while (j < d.size()) {
      if (++k[j] < d[j]) break;
      k[j] = 0;
      ++j;
    }
    if (j == d.size()) break;
  }
  return out;
}

Character Character::trivial(const GroupPtr& G) { return Character(G, std::vector<long>(G->invariant_factors().size(), 0)); }

long Character::log_value(int g) const {
  const auto& d = G_->invariant_factors();
  const auto& y = G_->coords(g);
  const long e = G_->exponent();
  long t = 0;
  for (size_t j = 0; j < d.size(); ++j) t = (t + k_[j] * (e / d[j]) % e * y[j]) % e;
  return t;
}

CyclotomicNumber Character::value(int g) const { return CyclotomicNumber::xi(G_->exponent(), log_value(g)); }

bool Character::is_trivial() const {
  return std::all_of(k_.begin(), k_.end(), [](long x) { return x == 0; });
}

long Character::order() const {
  const auto& d = G_->invariant_factors();
  long o = 1;
  for (size_t j = 0; j < d.size(); ++j) o = lcm_l(o, d[j] / gcd_l(k_[j], d[j]));
  return o;
}

Character Character::inverse() const {
  std::vector<long> k = k_;
  for (auto& x : k) x = -x;
  return Character(G_, k);
}

Character Character::operator*(const Character& o) const {
  if (G_ != o.G_) fail(ErrorKind::InvalidArgument, "characters of different groups");
  std::vector<long> k = k_;
  for (size_t j = 0; j < k.size(); ++j) k[j] += o.k_[j];
  return Character(G_, k);
}

bool Character::is_odd() const {
  auto c = G_->complex_conjugation();
  if (!c) fail(ErrorKind::NoComplexConjugation, "group has no complex conjugation");
  return log_value(*c) != 0;
}

// ---------------------------------------------------------------------------

GroupRingElem<Rational> e_plus(const GroupPtr& G) {
  auto c = G->complex_conjugation();
  if (!c) fail(ErrorKind::NoComplexConjugation, "-1 lies in H (or is trivial): no e+/e-");
  GroupRingElem<Rational> e(G, Rational(0));
  e[0] = Rational(1, 2);
  e[*c] = Rational(1, 2);
  return e;
}

GroupRingElem<Rational> e_minus(const GroupPtr& G) {
  auto c = G->complex_conjugation();
  if (!c) fail(ErrorKind::NoComplexConjugation, "-1 lies in H (or is trivial): no e+/e-");
  GroupRingElem<Rational> e(G, Rational(0));
  e[0] = Rational(1, 2);
  e[*c] = Rational(-1, 2);
  return e;
}

GroupRingElem<CyclotomicNumber> e_chi(const Character& chi) {
  const auto& G = chi.group();
  const long e = G->exponent();
  GroupRingElem<CyclotomicNumber> r(G, CyclotomicNumber(e));
  Rational w(1, G->order());
  for (int g = 0; g < G->order(); ++g) r[G->inv(g)] = chi.value(g) * w;
  return r;
}

CyclotomicNumber apply_character(const Character& chi, const GroupRingElem<CyclotomicNumber>& x) {
  const long f = x.zero().modulus();
  const long e = chi.value_modulus();
  const long L = lcm_l(f, e);
  CyclotomicNumber acc(L);
  for (int g = 0; g < x.size(); ++g) {
    if (x[g].is_zero()) continue;
    acc += cyc_embed(x[g], L) * CyclotomicNumber::xi(L, chi.log_value(g) * (L / e));
  }
  return acc;
}

CyclotomicNumber apply_character(const Character& chi, const GroupRingElem<Rational>& x) {
  const long e = chi.value_modulus();
  std::vector<Rational> poly(e, Rational(0));
  for (int g = 0; g < x.size(); ++g) poly[chi.log_value(g)] += x[g];
  return CyclotomicNumber(e, poly);
}

GroupRingElem<CyclotomicNumber> to_cyclotomic(const GroupRingElem<Rational>& x, long f) {
  GroupRingElem<CyclotomicNumber> r(x.group(), CyclotomicNumber(f));
  for (int g = 0; g < x.size(); ++g) r[g] = CyclotomicNumber(f, x[g]);
  return r;
}

ModPN kappa_n(const GroupPtr& G, int g, long p, int n) {
  const long q = ipow(p, n + 1);
  if (G->modulus() % q != 0)
    fail(ErrorKind::CharacterUndefined, "p^{n+1} does not divide the modulus");
  for (long h : G->H())
    if (h % q != 1 % q) fail(ErrorKind::CharacterUndefined, "mu_{p^{n+1}} is not contained in the fixed field");
  return ModPN(static_cast<std::uint64_t>(p), n + 1, static_cast<long long>(G->rep(g) % q));
}

GroupRingElem<ModPN> kappa_bar_star(const GroupRingElem<ModPN>& x, const GroupPtr& G, long p, int n) {
  const auto& Gb = x.group();
  auto c = G->complex_conjugation();
  if (!c) fail(ErrorKind::NoComplexConjugation, "kappa_bar_star needs a CM group");
  const ModPN proto(static_cast<std::uint64_t>(p), n + 1, 0LL);
  const ModPN half = ModPN(static_cast<std::uint64_t>(p), n + 1, 2LL).inverse();
  // lift each class of Gbar to G
  std::vector<int> lift(Gb->order(), -1);
  for (int g = 0; g < G->order(); ++g) {
    int b = Gb->index_of(G->rep(g));
    if (b < 0) fail(ErrorKind::InvalidArgument, "kappa_bar_star: Gbar is not a quotient of G");
    if (lift[b] < 0) lift[b] = g;
  }
  GroupRingElem<ModPN> r(G, proto);
  for (int b = 0; b < Gb->order(); ++b) {
    if (x[b].is_zero()) continue;
    int g = lift[b];
    ModPN k = kappa_n(G, g, p, n) * x[b] * half;
    int gi = G->inv(g);
    r[gi] += k;                  // (1/2) kappa(g) g^{-1}
    r[G->mul(*c, gi)] -= k;      // -(1/2) kappa(g) c g^{-1}
  }
  return r;
}

}  // namespace starklab
