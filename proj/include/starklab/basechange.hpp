#pragma once

#include <optional>
#include <vector>

#include "starklab/stark.hpp"

namespace starklab {

// Absolutely abelian K over a real quadratic k, with the rank-two maps rebuilt from K/Q;
// for k = Q the matrices are 1x1 and hold the direct maps. Only Bad(S) = {} is handled:
// the inertia group A of the bad primes is trivial and the sum over characters of A
// collapses to the single term for K itself.
struct BaseChangeMatrices {
  std::vector<long> gammas;
  // c[i][l]: coefficient of gamma_i^{-1} in s_{K/Q,S_Q}(u_l), over Q_p G.
  std::vector<std::vector<PAdicGroupElem>> c;
  // d[i][l]: coefficient of gamma_i^{-1} in H_{K/Q,n}(alpha, u_l), over (Z/p^{n+1})G.
  std::vector<std::vector<GroupRingElem<ModPN>>> d;
  PAdicGroupElem det_c;
  GroupRingElem<ModPN> det_d;
};

// The coefficient of gamma^{-1} when y in R Gamma is written over R G.
template <class R>
GroupRingElem<R> gamma_coordinate(const FieldSpec& K, const GroupRingElem<R>& y, long gamma) {
  const auto& G = K.G();
  const auto& Gamma = y.group();
  const long f = K.modulus();
  const long ginv = inv_mod(mod_floor(gamma, f), f);
  GroupRingElem<R> out(G, y.zero());
  for (int g = 0; g < G->order(); ++g) out[g] = y[Gamma->index_of(G->rep(g) * ginv % f)];
  return out;
}

BaseChangeMatrices base_change_matrices(const FieldSpec& K, const PlaceSet& S, const std::vector<SemilocalElement>& us,
                                        int n, int N, const std::optional<std::vector<long>>& gammas = std::nullopt);

struct BaseChangeReport {
  int agreement_digits = -1;  // padic_agreement(det c, direct s); -1 on mismatch
  bool det_d_matches_H = false;  // det d == kappa(tau_1 tau_2) H_{K/k,n}
  bool det_c_matches_det_d = false;  // det c mod p^{n+1} == det d
};

// Both cross-checks for one wedge u_1 ^ u_2.
BaseChangeReport base_change_check(const FieldSpec& K, const CaseParams& c, std::uint64_t seed);

}  // namespace starklab
