#include "starklab/properties.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace starklab {

namespace {

using u64 = std::uint64_t;

// Records the first failure and counts comparisons.
struct Tally {
  PropertyResult r;
  explicit Tally(std::string name) {
    r.name = std::move(name);
    r.pass = true;
  }
  void expect(bool ok, const std::string& what) {
    ++r.checks;
    if (!ok && r.pass) {
      r.pass = false;
      r.detail = what;
    }
  }
  PropertyResult done() {
    if (r.pass) r.detail = std::to_string(r.checks) + " checks";
    return r;
  }
};

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 6);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

GroupRingElem<Rational> random_element(const GroupPtr& G, std::mt19937_64& rng) {
  GroupRingElem<Rational> x(G, Rational(0));
  for (int g = 0; g < G->order(); ++g) x[g] = random_rational(rng);
  return x;
}

long random_unit(long f, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(1, f - 1);
  for (;;) {
    long a = d(rng);
    if (gcd_l(a, f) == 1) return a;
  }
}

PAdicGroupElem negated(PAdicGroupElem a) {
  for (auto& m : a.mantissa) m = -m;
  return a;
}

std::string case_name(long f, long p, int n) {
  std::ostringstream os;
  os << "f=" << f << " p=" << p << " n=" << n;
  return os.str();
}

}  // namespace

PAdicGroupElem padic_times_rational(const PAdicGroupElem& a, const GroupRingElem<Rational>& x) {
  if (!same_group(a.G, x.group())) fail(ErrorKind::InvalidArgument, "padic_times_rational: different groups");
  const u64 p = a.mantissa.at(0).prime();
  const int N = a.precision();
  PAdicGroupElem out{a.G, std::vector<ModPN>(a.mantissa.size(), ModPN(p, N, 0LL)), a.shift};
  for (int g = 0; g < x.size(); ++g) {
    if (sgn(x[g]) == 0) continue;
    const ModPN xg = ModPN::from_rational(p, N, x[g]);
    for (int h = 0; h < x.size(); ++h) out.mantissa[a.G->mul(g, h)] += xg * a.mantissa[h];
  }
  return out;
}

PAdicGroupElem padic_restrict(const PAdicGroupElem& a, const GroupPtr& target) {
  GroupRingElem<ModPN> m(a.G, zero_like(a.mantissa.at(0)));
  for (int g = 0; g < m.size(); ++g) m[g] = a.mantissa[g];
  return PAdicGroupElem{target, restrict_pi(m, target).coeffs(), a.shift};
}

ModPN direct_bracket(const ModelPtr& M, long b, const SemilocalElement& beta, int n, int N) {
  const long p = M->p();
  const long f = M->f();
  const ModPN bk(static_cast<u64>(p), n + 1, static_cast<long long>(mod_floor(b, f)));
  ModPN acc(static_cast<u64>(p), n + 1, 0LL);
  for (int P = 0; P < M->num_primes(); ++P) {
    // iota_P(xi^b)^{f'} = (iota_P(xi)^{f'})^b, and iota_P(zeta) = (iota_P(xi)^{f'})^t
    const LocalElement xi_hat = M->X_power(M->prime_rep(P) * mod_floor(b, f) % f, N);
    const ModPN cb = coleman_b(xi_hat, f, beta[P].reduce(N)).reduce(n + 1);
    const ModPN tinv = ModPN(static_cast<u64>(p), n + 1, static_cast<long long>(bracket_normalization(M, P, n))).inverse();
    acc -= cb * bk * tinv;
  }
  return acc;
}

PropertyResult check_delta_laws(std::uint64_t seed, int samples) {
  Tally t("determinantal map: multilinear, alternating, translation");
  std::mt19937_64 rng(seed);
  using M = GroupRingElem<Rational>;
  for (long f : {15L, 21L}) {
    const GroupPtr G = FieldSpec(f).Gamma();
    const std::function<M(const M&, int)> act = [](const M& m, int h) { return m.translated(h); };
    for (int s = 0; s < samples; ++s) {
      const size_t l = 2 + static_cast<size_t>(s % 2);
      std::vector<std::function<Rational(const M&)>> fs;
      for (size_t i = 0; i < l; ++i) {
        const M w = random_element(G, rng);
        fs.push_back([w](const M& m) {
          Rational acc(0);
          for (int g = 0; g < m.size(); ++g) acc += w[g] * m[g];
          return acc;
        });
      }
      std::vector<M> ms;
      for (size_t i = 0; i < l; ++i) ms.push_back(random_element(G, rng));
      const Rational zero(0);
      auto delta = [&](const std::vector<M>& v) { return determinantal_map<M, Rational>(fs, v, G, act, zero); };
      const auto base = delta(ms);

      const size_t slot = static_cast<size_t>(rng() % l);
      const Rational a = random_rational(rng), b = random_rational(rng);
      const M other = random_element(G, rng);
      auto mixed = ms, alt = ms;
      mixed[slot] = ms[slot].scaled(a) + other.scaled(b);
      alt[slot] = other;
      t.expect(delta(mixed) == base.scaled(a) + delta(alt).scaled(b), "multilinearity failed (f=" + std::to_string(f) + ")");

      auto swapped = ms;
      std::swap(swapped[0], swapped[1]);
      t.expect(delta(swapped) == -base, "swapping two arguments did not change the sign");
      auto repeated = ms;
      repeated[1] = repeated[0];
      t.expect(delta(repeated).is_zero(), "a repeated argument did not give zero");

      const int g = static_cast<int>(rng() % static_cast<u64>(G->order()));
      auto moved = ms;
      moved[slot] = ms[slot].translated(g);
      t.expect(delta(moved) == base.translated(g), "translation by g did not multiply by g");
    }
  }
  return t.done();
}

PropertyResult check_bracket_equivariance(std::uint64_t seed, int samples) {
  Tally t("bracket kappa-equivariance");
  std::mt19937_64 rng(seed);
  struct Case { long f, p; int n; };
  for (const Case& c : {Case{9, 3, 1}, Case{63, 3, 1}, Case{25, 5, 1}}) {
    const FieldSpec K(c.f);
    CaseParams cp;
    cp.p = c.p;
    cp.n = c.n;
    cp.S = minimal_place_set(K);
    const int N = working_precision(K, cp);
    const auto M = SemilocalModel::get(c.f, c.p);
    for (int s = 0; s < samples; ++s) {
      const SemilocalElement beta = sample_minus_unit(K, c.p, rng(), N);
      const long b = random_unit(c.f, rng), g = random_unit(c.f, rng);
      const ModPN kg(static_cast<u64>(c.p), c.n + 1, static_cast<long long>(g));
      const ModPN lhs = direct_bracket(M, b * g % c.f, beta.galois(g), c.n, N);
      const ModPN rhs = kg * direct_bracket(M, b, beta, c.n, N);
      t.expect(lhs == rhs, "[g a, g b] != kappa(g)[a, b] for " + case_name(c.f, c.p, c.n));
      GroupRingElem<Rational> x(K.Gamma(), Rational(0));
      x[K.Gamma()->index_of(b)] = 1;
      t.expect(hilbert_bracket(K, x, beta, c.n, N) == direct_bracket(M, b, beta, c.n, N),
               "translated and direct Coleman evaluations disagree for " + case_name(c.f, c.p, c.n));
    }
  }
  return t.done();
}

PropertyResult check_euler_functoriality(std::uint64_t seed, int samples) {
  Tally t("Euler-factor functoriality of s in S");
  std::mt19937_64 rng(seed);
  struct Case { long f, p; std::vector<long> extra; };
  for (const Case& c : {Case{9, 3, {2, 5}}, Case{7, 5, {2, 3}}, Case{25, 5, {3}}}) {
    const FieldSpec K(c.f);
    const PlaceSet S0 = minimal_place_set(K);
    PlaceSet S = S0;
    for (long q : c.extra) S = S.with(q);
    CaseParams cp;
    cp.p = c.p;
    cp.S = S;
    const int N = working_precision(K, cp);
    GroupRingElem<Rational> factor = GroupRingElem<Rational>::one(K.G(), Rational(0));
    for (long q : c.extra) {
      GroupRingElem<Rational> e = GroupRingElem<Rational>::one(K.G(), Rational(0));
      e[K.G()->index_of(q % c.f)] -= Rational(1, q);
      factor = factor * e;
    }
    for (int s = 0; s < samples; ++s) {
      const auto us = sample_theta(K, c.p, rng(), N);
      const auto big = s_map(K, S, us, N);
      const auto small = padic_times_rational(s_map(K, S0, us, N), factor);
      t.expect(padic_agreement(big, small) > 0, "s_S != prod(1 - q^{-1} sigma_q) s_S' for f=" + std::to_string(c.f));
    }
  }
  return t.done();
}

PropertyResult check_norm_descent(std::uint64_t seed, int samples) {
  Tally t("norm descent pi o s_K = s_F o N");
  std::mt19937_64 rng(seed);
  struct Case { long f, p; std::vector<long> HF; };
  // Q(xi_9) inside Q(xi_63) and Q(xi_45): the classes that are 1 mod 9.
  for (const Case& c : {Case{63, 3, {10}}, Case{45, 3, {19, 28}}}) {
    const FieldSpec K(c.f), F(c.f, c.HF);
    const PlaceSet S = minimal_place_set(K);
    CaseParams cp;
    cp.p = c.p;
    cp.S = S;
    const int N = std::max(working_precision(K, cp), working_precision(F, cp));
    for (int s = 0; s < samples; ++s) {
      const SemilocalElement u = sample_minus_unit(K, c.p, rng(), N);
      const auto lhs = padic_restrict(s_map(K, S, {u}, N), F.G());
      const auto rhs = s_map(F, S, {semilocal_norm(u, K, F)}, N);
      t.expect(padic_agreement(lhs, rhs) > 0, "pi(s_K(u)) != s_F(N u) for f=" + std::to_string(c.f));
    }
  }
  return t.done();
}

PropertyResult check_n_reduction(std::uint64_t seed, int samples) {
  Tally t("n-reduction of CC verdicts");
  std::mt19937_64 rng(seed);
  struct Case { long f, p; int n; };
  for (const Case& c : {Case{9, 3, 1}, Case{25, 5, 1}, Case{27, 3, 2}}) {
    const FieldSpec K(c.f);
    for (int s = 0; s < samples; ++s) {
      const u64 sd = rng();
      CaseParams hi;
      hi.p = c.p;
      hi.n = c.n;
      hi.S = minimal_place_set(K);
      const TrialResult top = cc_trial(K, hi, sd);
      for (int m = 0; m < c.n; ++m) {
        CaseParams lo = hi;
        lo.n = m;
        const TrialResult low = cc_trial(K, lo, sd);
        const long long pm = ipow(c.p, m + 1);
        bool compatible = top.lhs.size() == low.lhs.size();
        for (size_t i = 0; compatible && i < top.lhs.size(); ++i)
          compatible = top.lhs[i] % pm == low.lhs[i] && top.rhs[i] % pm == low.rhs[i];
        t.expect(compatible, "the level-" + std::to_string(m) + " sides are not the reductions for " +
                                 case_name(c.f, c.p, c.n));
        t.expect(!top.equal || low.equal, "CC at n held but failed at a lower level for " + case_name(c.f, c.p, c.n));
      }
    }
  }
  return t.done();
}

PropertyResult check_split_prime(std::uint64_t seed, int samples) {
  Tally t("split prime forces s into p^{n+1}");
  std::mt19937_64 rng(seed);
  struct Case { long f, p; int n; std::vector<long> qs; };
  // q = +-1 mod f splits completely in K^+.
  for (const Case& c : {Case{9, 3, 1, {17, 19}}, Case{25, 5, 1, {101, 149}}, Case{63, 3, 1, {127, 251}}}) {
    const FieldSpec K(c.f);
    for (long q : c.qs) {
      CaseParams cp;
      cp.p = c.p;
      cp.n = c.n;
      cp.S = minimal_place_set(K).with(q);
      const int N = working_precision(K, cp);
      for (int s = 0; s < samples; ++s) {
        const u64 sd = rng();
        const auto red = s_map(K, cp.S, sample_theta(K, c.p, sd, N), N).reduce_integral(c.n + 1);
        t.expect(red.is_zero(), "s is not divisible by p^{n+1} with q=" + std::to_string(q) + " for " +
                                    case_name(c.f, c.p, c.n));
        const TrialResult r = cc_trial(K, cp, sd);
        bool zero = true;
        for (long long v : r.rhs) zero = zero && v == 0;
        t.expect(r.equal && zero, "CC with the split prime q=" + std::to_string(q) + " failed for " +
                                      case_name(c.f, c.p, c.n));
      }
    }
  }
  return t.done();
}

PropertyResult check_H_torsion(std::uint64_t seed, int samples) {
  Tally t("H vanishes on torsion (d = 1)");
  std::mt19937_64 rng(seed);
  struct Case { long f, p; };
  // p does not divide |G| and mu_p lies in K
  for (const Case& c : {Case{5, 5}, Case{15, 5}, Case{7, 7}, Case{35, 5}}) {
    const FieldSpec K(c.f);
    CaseParams cp;
    cp.p = c.p;
    cp.n = 0;
    cp.S = minimal_place_set(K);
    const int N = working_precision(K, cp);
    const auto M = SemilocalModel::get(c.f, c.p);
    const auto eta = rubin_stark_eta(K, cp.S);
    for (int s = 0; s < samples; ++s) {
      const long k = 1 + static_cast<long>(rng() % static_cast<u64>(c.p - 1));
      const SemilocalElement zeta =
          SemilocalElement::from_cyclotomic(M, CyclotomicNumber::xi(c.f, (c.f / c.p) * k), N);
      t.expect(H_pairing(K, eta, {zeta}, c.p, 0, N).is_zero(), "H(eta, zeta) != 0 for f=" + std::to_string(c.f));
      const auto sz = s_map(K, cp.S, {zeta}, N);
      t.expect(sz.min_valuation() >= sz.absolute_precision(), "s(zeta) != 0 for f=" + std::to_string(c.f));
      const SemilocalElement u = sample_minus_unit(K, c.p, rng(), N);
      t.expect(H_pairing(K, eta, {u * zeta}, c.p, 0, N) == H_pairing(K, eta, {u}, c.p, 0, N),
               "H(eta, u zeta) != H(eta, u) for f=" + std::to_string(c.f));
    }
  }
  return t.done();
}

PropertyResult check_cyclotomic_norm_relations() {
  Tally t("cyclotomic norm relations");
  for (long f : {3L, 4L, 5L, 7L, 9L, 12L, 15L}) {
    for (long q : {2L, 3L, 5L, 7L}) {
      const long F = f * q;
      if (F > 105) continue;
      const CyclotomicNumber one(F, Rational(1));
      CyclotomicNumber norm = one;
      for (long a = 1; a < F; ++a)
        if (gcd_l(a, F) == 1 && a % f == 1 % f) norm *= one - CyclotomicNumber::xi(F, a);
      // xi_f = xi_F^q
      CyclotomicNumber expect = one - CyclotomicNumber::xi(F, q);
      if (f % q != 0) expect = expect * (one - CyclotomicNumber::xi(F, q * inv_mod(q % f, f))).inverse();
      t.expect(norm == expect, "N(1 - xi_" + std::to_string(F) + ") is wrong over Q(xi_" + std::to_string(f) + ")");
    }
  }
  return t.done();
}

PropertyResult check_group_ring_determinants(std::uint64_t seed, int max_order) {
  Tally t("group-ring determinants over subgroups");
  std::mt19937_64 rng(seed);
  // One subquotient of (Z/f)^x for each isomorphism type of abelian group of order <= 12,
  // with its invariant factors.
  struct Rep { long f; std::vector<long> H; std::vector<long> type; };
  const std::vector<Rep> reps = {
      {3, {2}, {}},        {3, {}, {2}},        {7, {6}, {3}},       {5, {}, {4}},        {8, {}, {2, 2}},
      {11, {10}, {5}},     {7, {}, {6}},        {29, {12}, {7}},     {17, {16}, {8}},     {15, {}, {2, 4}},
      {24, {}, {2, 2, 2}}, {19, {18}, {9}},     {63, {62, 8}, {3, 3}}, {11, {}, {10}},    {23, {22}, {11}},
      {13, {}, {12}},      {21, {}, {2, 6}},
  };
  for (const Rep& r : reps) {
    const GroupPtr B = AbelianGroup::make(r.f, r.H);
    if (B->order() > max_order) continue;
    t.expect(B->invariant_factors() == r.type, "unexpected structure for the representative mod " + std::to_string(r.f));
    // every subgroup, found as the span of at most three elements
    std::set<std::vector<int>> subgroups;
    const int n = B->order();
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c) subgroups.insert(B->subgroup_generated({a, b, c}));
    const GroupRingElem<Rational> x = random_element(B, rng);
    const auto chars = Character::all(B);
    for (const auto& Celems : subgroups) {
      const GroupPtr C = B->subgroup(Celems);
      // coset representatives y_i of C in B
      std::vector<int> cosetrep, coset_of(n, -1);
      for (int g = 0; g < n; ++g) {
        if (coset_of[g] >= 0) continue;
        const int idx = static_cast<int>(cosetrep.size());
        cosetrep.push_back(g);
        for (int c : Celems) coset_of[B->mul(g, c)] = idx;
      }
      const size_t m = cosetrep.size();
      std::vector<std::vector<GroupRingElem<Rational>>> T(
          m, std::vector<GroupRingElem<Rational>>(m, GroupRingElem<Rational>(C, Rational(0))));
      for (size_t j = 0; j < m; ++j)
        for (int b = 0; b < n; ++b) {
          if (sgn(x[b]) == 0) continue;
          const int target = B->mul(b, cosetrep[j]);
          const size_t i = static_cast<size_t>(coset_of[target]);
          // target = c y_i with c in C
          const int c = B->mul(target, B->inv(cosetrep[i]));
          T[i][j][C->index_of(B->rep(c))] += x[b];
        }
      const GroupRingElem<Rational> det = gr_determinant(T);
      // group the characters of B by their restriction to C
      std::map<std::vector<long>, std::vector<size_t>> by_restriction;
      for (size_t k = 0; k < chars.size(); ++k) {
        std::vector<long> res;
        for (int c : Celems) res.push_back(chars[k].log_value(c));
        by_restriction[res].push_back(k);
      }
      const long e = B->exponent();
      for (const auto& [res, ks] : by_restriction) {
        const Character& chi = chars[ks[0]];
        CyclotomicNumber lhs(e, Rational(0));
        for (int ci = 0; ci < C->order(); ++ci) {
          if (sgn(det[ci]) == 0) continue;
          lhs += chi.value(B->index_of(C->rep(ci))) * det[ci];
        }
        CyclotomicNumber rhs(e, Rational(1));
        for (size_t k : ks) {
          CyclotomicNumber phix(e, Rational(0));
          for (int b = 0; b < n; ++b) phix += chars[k].value(b) * x[b];
          rhs *= phix;
        }
        t.expect(lhs == rhs, "chi(det_C(x|B)) != prod phi(x) for |B|=" + std::to_string(n) +
                                 ", |C|=" + std::to_string(C->order()));
      }
    }
  }
  return t.done();
}

PropertyResult check_tau_reordering(std::uint64_t seed, int samples) {
  Tally t("tau-reordering for d = 2");
  std::mt19937_64 rng(seed);
  const FieldSpec K(45, {}, std::vector<long>{11, 19});
  CaseParams cp;
  cp.p = 3;
  cp.n = 1;
  cp.S = minimal_place_set(K);
  const int N = working_precision(K, cp);
  const auto gs = default_gammas(K);
  const std::vector<long> rev = {gs[1], gs[0]};
  for (int s = 0; s < samples; ++s) {
    const u64 sd = rng();
    const auto us = sample_theta(K, cp.p, sd, N);
    t.expect(padic_agreement(s_map(K, cp.S, us, N, rev), negated(s_map(K, cp.S, us, N, gs))) > 0,
             "the regulator did not change sign under the transposition");
    const auto H = H_pairing(K, rubin_stark_eta(K, cp.S, gs), us, cp.p, cp.n, N);
    const auto Hr = H_pairing(K, rubin_stark_eta(K, cp.S, rev), us, cp.p, cp.n, N);
    t.expect(Hr == -H, "H did not change sign under the transposition");
    CaseParams cr = cp;
    cr.gammas = rev;
    t.expect(cc_trial(K, cr, sd).equal == cc_trial(K, cp, sd).equal, "the CC verdict depends on the tau order");
  }
  return t.done();
}

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, int samples) {
  std::vector<PropertyResult> out;
  auto guarded = [&](const char* name, const std::function<PropertyResult()>& fn) {
    try {
      out.push_back(fn());
    } catch (const StarkError& e) {
      out.push_back(PropertyResult{name, false, 0, e.what()});
    }
  };
  guarded("delta laws", [&] { return check_delta_laws(seed, samples); });
  guarded("bracket equivariance", [&] { return check_bracket_equivariance(seed + 1, samples); });
  guarded("Euler functoriality", [&] { return check_euler_functoriality(seed + 2, samples); });
  guarded("norm descent", [&] { return check_norm_descent(seed + 3, samples); });
  guarded("n-reduction", [&] { return check_n_reduction(seed + 4, samples); });
  guarded("split prime", [&] { return check_split_prime(seed + 5, samples); });
  guarded("H on torsion", [&] { return check_H_torsion(seed + 6, samples); });
  guarded("norm relations", [] { return check_cyclotomic_norm_relations(); });
  guarded("group-ring determinants", [&] { return check_group_ring_determinants(seed + 7, 12); });
  guarded("tau reordering", [&] { return check_tau_reordering(seed + 8, samples); });
  return out;
}

}  // namespace starklab
