#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starklab/stark.hpp"

namespace starklab {

struct PropertyResult {
  std::string name;
  bool pass = false;
  int checks = 0;      // individual comparisons made
  std::string detail;  // first failure, or a short summary
};

// Elementwise helpers on Q_p G elements stored as p^{-shift} * mantissa.
PAdicGroupElem padic_times_rational(const PAdicGroupElem& a, const GroupRingElem<Rational>& x);
PAdicGroupElem padic_restrict(const PAdicGroupElem& a, const GroupPtr& target);

// [1 - xi_f^b, beta]_{K_f,n} straight from Coleman's law at every prime above p,
// without going through Galois translates of the log.
ModPN direct_bracket(const ModelPtr& M, long b, const SemilocalElement& beta, int n, int N);

// The individual suites. Randomized ones draw their inputs from `seed`.
PropertyResult check_delta_laws(std::uint64_t seed, int samples);
PropertyResult check_bracket_equivariance(std::uint64_t seed, int samples);
PropertyResult check_euler_functoriality(std::uint64_t seed, int samples);
PropertyResult check_norm_descent(std::uint64_t seed, int samples);
PropertyResult check_n_reduction(std::uint64_t seed, int samples);
PropertyResult check_split_prime(std::uint64_t seed, int samples);
PropertyResult check_H_torsion(std::uint64_t seed, int samples);
PropertyResult check_cyclotomic_norm_relations();
PropertyResult check_group_ring_determinants(std::uint64_t seed, int max_order = 12);
PropertyResult check_tau_reordering(std::uint64_t seed, int samples);

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, int samples);

}  // namespace starklab
