#include "starklab/basechange.hpp"

namespace starklab {

namespace {

GroupRingElem<ModPN> mantissa_elem(const PAdicGroupElem& y) {
  GroupRingElem<ModPN> out(y.G, zero_like(y.mantissa.at(0)));
  for (int g = 0; g < out.size(); ++g) out[g] = y.mantissa[g];
  return out;
}

}  // namespace

BaseChangeMatrices base_change_matrices(const FieldSpec& K, const PlaceSet& S, const std::vector<SemilocalElement>& us,
                                        int n, int N, const std::optional<std::vector<long>>& gammas) {
  const long dk = K.degree_k();
  if (dk != 1 && dk != 2) fail(ErrorKind::InvalidArgument, "base change is set up for k = Q or real quadratic k");
  K.require_CM();
  if (!bad_primes(K, S).empty())
    fail(ErrorKind::HypothesisViolated, "only Bad(S) = {} is supported for the base-change matrices");
  const size_t d = static_cast<size_t>(dk);
  if (us.size() != d) fail(ErrorKind::InvalidArgument, "the wedge must have d factors");
  const long p = us[0].model()->p();

  const std::vector<long> gs = gammas ? *gammas : default_gammas(K);
  const FieldSpec KQ = K.over_Q();
  // For quadratic k, alpha = 1/2 (1 - xi_f)^x, the negative of the k = Q element with the same
  // exponent. For k = Q the single column is the k = Q element itself.
  WedgeUnits alpha = rubin_stark_eta(KQ, S);
  if (d == 2) alpha.scalar = Rational(1, 2);

  std::vector<std::vector<PAdicGroupElem>> c(d, std::vector<PAdicGroupElem>(d));
  std::vector<std::vector<GroupRingElem<ModPN>>> cm(d), dm(d);
  int shift = 0;
  for (size_t l = 0; l < d; ++l) {
    const PAdicGroupElem y = s_map(KQ, S, {us[l]}, N);
    const GroupRingElem<ModPN> Hl = H_pairing(KQ, alpha, {us[l]}, p, n, N);
    const GroupRingElem<ModPN> ym = mantissa_elem(y);
    shift += y.shift;
    for (size_t i = 0; i < d; ++i) {
      cm[i].push_back(gamma_coordinate(K, ym, gs[i]));
      c[i][l] = PAdicGroupElem{K.G(), cm[i].back().coeffs(), y.shift};
      dm[i].push_back(gamma_coordinate(K, Hl, gs[i]));
    }
  }
  // Every term of the determinant takes one entry from each column, so the shifts add.
  PAdicGroupElem det_c{K.G(), gr_determinant(cm).coeffs(), shift};
  GroupRingElem<ModPN> det_d = gr_determinant(dm);
  return BaseChangeMatrices{gs, std::move(c), std::move(dm), std::move(det_c), std::move(det_d)};
}

BaseChangeReport base_change_check(const FieldSpec& K, const CaseParams& c, std::uint64_t seed) {
  require_cc_case(K, c);
  const int N = working_precision(K, c);
  const auto gs = c.gammas ? *c.gammas : default_gammas(K);
  const auto us = sample_theta(K, c.p, seed, N);
  const auto bc = base_change_matrices(K, c.S, us, c.n, N, gs);

  BaseChangeReport r;
  const PAdicGroupElem direct = s_map(K, c.S, us, N, gs);
  r.agreement_digits = padic_agreement(bc.det_c, direct);

  const auto eta = rubin_stark_eta(K, c.S, gs);
  const auto H = H_pairing(K, eta, us, c.p, c.n, N).scaled(kappa_of_gammas(gs, c.p, c.n));
  r.det_d_matches_H = bc.det_d == H;
  r.det_c_matches_det_d = bc.det_c.reduce_integral(c.n + 1) == bc.det_d;
  return r;
}

}  // namespace starklab
