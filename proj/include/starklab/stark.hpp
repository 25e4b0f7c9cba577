#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "starklab/lvalues.hpp"
#include "starklab/semilocal.hpp"

namespace starklab {

inline LocalElement zero_like(const LocalElement& z) { return LocalElement(z.field(), z.precision()); }
inline LocalElement one_like(const LocalElement& z) { return LocalElement::from_int(z.field(), z.precision(), 1); }
inline bool is_zero(const LocalElement& z) { return z.is_zero(); }

// An element of Q_p G stored as p^{-shift} * (mantissa), every mantissa known mod p^N.
struct PAdicGroupElem {
  GroupPtr G;
  std::vector<ModPN> mantissa;
  int shift = 0;

  int precision() const { return mantissa.empty() ? 0 : mantissa[0].precision(); }
  // Digits of the coefficients themselves that are known.
  int absolute_precision() const { return precision() - shift; }
  // v_p of coefficient g; a coefficient that vanishes to working precision
  // reports absolute_precision().
  int valuation(int g) const { return mantissa[g].valuation() - shift; }
  int min_valuation() const;
  // The coefficients mod p^k. NonIntegral if some coefficient has negative
  // valuation, InsufficientPrecision if fewer than k digits are known.
  GroupRingElem<ModPN> reduce_integral(int k) const;
};

// Coefficientwise agreement of two elements of Q_p G; returns the number of
// digits (absolute) on which they were compared, or -1 on a mismatch.
int padic_agreement(const PAdicGroupElem& a, const PAdicGroupElem& b);

// Delta_{f_1..f_l}(m_1 ^ ... ^ m_l) = det(f_i^H(m_t)) with f^H(m) = sum_h f(h^{-1} m) h.
// act(m, h) is the action of the element h of H on m.
template <class M, class R>
GroupRingElem<R> determinantal_map(const std::vector<std::function<R(const M&)>>& fs, const std::vector<M>& ms,
                                   const GroupPtr& H, const std::function<M(const M&, int)>& act, const R& proto) {
  const size_t l = fs.size();
  if (l == 0 || ms.size() != l) fail(ErrorKind::InvalidArgument, "determinantal_map needs l maps and l elements");
  std::vector<std::vector<GroupRingElem<R>>> mat(l, std::vector<GroupRingElem<R>>(l, GroupRingElem<R>(H, proto)));
  for (size_t t = 0; t < l; ++t)
    for (int h = 0; h < H->order(); ++h) {
      const M moved = act(ms[t], H->inv(h));
      for (size_t i = 0; i < l; ++i) mat[i][t][h] = fs[i](moved);
    }
  return gr_determinant(mat);
}

// Residues gamma_1 = 1, gamma_2, ... mod f: the smallest representatives of the cosets of G in Gamma.
std::vector<long> default_gammas(const FieldSpec& K);

// R^{(j)}_{K/k,p}(u_1 ^ ... ^ u_d) with f_i(v) = log_p(iota_{P_1}(gamma_i v)), at precision N.
GroupRingElem<LocalElement> regulator(const FieldSpec& K, const std::vector<SemilocalElement>& us,
                                      const std::vector<long>& gammas, int N);

// j(a^{-,*}) as exact data: the k = Q element a^-_{K/Q,S}^* or, for k != Q, the relative
// element built from S (read as a set of rational primes). Memoized.
const GroupRingElem<CyclotomicNumber>& a_minus_star(const FieldSpec& K, const PlaceSet& S);
// p-adic denominator exponent of j(a^{-,*}).
int a_minus_shift(const FieldSpec& K, const PlaceSet& S, long p);

// s_{K/k,S}(u_1 ^ ... ^ u_d) = j(a^{-,*}) R(u_1 ^ ... ^ u_d). The mantissas carry
// precision N; IntegralityFailure if a coefficient fails to lie in Q_p.
PAdicGroupElem s_map(const FieldSpec& K, const PlaceSet& S, const std::vector<SemilocalElement>& us, int N,
                     const std::optional<std::vector<long>>& gammas = std::nullopt);

// b(xi_hat, v) = (1/f) Tr_{L/Q_p}(xi_hat/(1 - xi_hat) log_p v) for xi_hat of exact order f.
// The result is in Z_p (IntegralityFailure otherwise) and loses the digits divided out.
ModPN coleman_b(const LocalElement& xi_hat, long f, const LocalElement& v);

// Precomputed Coleman data for [1 - xi_f, .]_{K_f,n} on the semilocal model of (f, p).
class BracketEvaluator {
 public:
  // N is the working precision of the logarithms that will be fed in.
  BracketEvaluator(const ModelPtr& M, int n, int N);
  int n() const { return n_; }
  // Digits lost to the division inside coleman_b.
  int loss() const { return loss_; }
  // [1 - xi_f, beta]_{K_f,n} from the componentwise log of beta.
  ModPN from_log(const SemilocalElement& log_beta) const;
  // [1 - xi_f, sigma_c beta]_{K_f,n} from the log of beta, for a unit c mod f.
  ModPN from_log_translate(const SemilocalElement& log_beta, long c) const;

 private:
  ModelPtr M_;
  int n_, N_, loss_ = 0;
  std::vector<LocalElement> w_;  // iota_P(xi_f)/(1 - iota_P(xi_f)) scaled by p^k
  std::vector<ModPN> tinv_;      // t_P^{-1} mod p^{n+1}
  ModPN funit_inv_;
};

// The bracket normalization: t with iota_P(zeta_n) = (iota_P(xi_f)^{f'})^t, by a scan of mu_{p^{m+1}}.
long bracket_normalization(const ModelPtr& M, int P, int n);

// [x (1 - xi_f), beta]_{K,n} for x in Z_(p)[Gal(Q(xi_f)/Q)] with x(1 - xi_f) in K.
// For K inside K_f with p not dividing [K_f : K] the bracket is [K_f:K]^{-1} times the K_f one.
ModPN hilbert_bracket(const FieldSpec& K, const GroupRingElem<Rational>& x, const SemilocalElement& beta, int n,
                      int N);

// eta = scalar * eps_1 ^ ... ^ eps_d with eps_i = (1 - xi_f)^{factors[i]}, factors in Z[Gal(Q(xi_f)/Q)].
struct WedgeUnits {
  long f = 1;
  Rational scalar{1};
  std::vector<GroupRingElem<Rational>> factors;
  int d() const { return static_cast<int>(factors.size()); }
};

// The explicit Rubin-Stark element: -1/2 (1 - xi_f)^{(1+c) N_H prod(1 - sigma_q^{-1})} for k = Q;
// for real quadratic k with Bad(S) = {} the wedge gamma_1^{-1} alpha ^ gamma_2^{-1} alpha with
// alpha = 1/2 (1 - xi_f)^{(1+c) N_H prod(1 - sigma_q^{-1})} (q running over S_Q prime to f).
WedgeUnits rubin_stark_eta(const FieldSpec& K, const PlaceSet& S,
                           const std::optional<std::vector<long>>& gammas = std::nullopt);

// prod_b (1 - xi_f^b)^{x_b} as an exact cyclotomic number (x with integer coefficients).
CyclotomicNumber cyclotomic_unit_value(long f, const GroupRingElem<Rational>& x);

// The eigenspace condition for a d = 1 element in the form N_{D_q} eps in {torsion} or
// fixed modulo torsion, checked exactly. Small conductors only.
bool eigenspace_condition_holds(const FieldSpec& K, const PlaceSet& S, const WedgeUnits& eta);

// H_{K/k,n}(eta, u_1 ^ ... ^ u_d) = scalar * det(sum_g [eps_i, g u_t]_{K,n} g^{-1}), logs at precision N.
GroupRingElem<ModPN> H_pairing(const FieldSpec& K, const WedgeUnits& eta, const std::vector<SemilocalElement>& us,
                               long p, int n, int N);

// kappa_n(tau_1 ... tau_d) for the chosen gammas.
ModPN kappa_of_gammas(const std::vector<long>& gammas, long p, int n);

// ---------------------------------------------------------------------------
// Verification drivers.

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<long long> lhs, rhs;  // residues mod p^{n+1} (CC) or valuations (IC, pndivG)
  bool equal = false;
};

struct CaseParams {
  long p = 3;
  int n = 0;
  int guard = 8;
  PlaceSet S;
  std::optional<std::vector<long>> gammas;
};

// Working precision for s and H on this case; InsufficientPrecision if it exceeds the cap.
int working_precision(const FieldSpec& K, const CaseParams& c);

// The d sample units of a trial: u_t from the 64-bit seed mixed with t.
std::vector<SemilocalElement> sample_theta(const FieldSpec& K, long p, std::uint64_t seed, int N);

// Congruence check for one trial.
TrialResult cc_trial(const FieldSpec& K, const CaseParams& c, std::uint64_t seed);
// Integrality check for one trial: lhs holds the valuations of the coefficients, rhs the known digits.
TrialResult ic_trial(const FieldSpec& K, const CaseParams& c, std::uint64_t seed);
// p not dividing |G| (S must contain p): lhs[phi] = v(phi(s(u))), rhs[phi] = the L-value valuation, over the odd characters.
TrialResult pndivg_trial(const FieldSpec& K, const CaseParams& c, std::uint64_t seed);
// Validate CC preconditions (CM, mu_{p^{n+1}} in K, S, Bad(S)); throws HypothesisViolated etc.
void require_cc_case(const FieldSpec& K, const CaseParams& c);

}  // namespace starklab
