#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "starklab/stark.hpp"

namespace starklab {

inline constexpr int kReportSchemaVersion = 1;

// Exit statuses shared by the command-line driver and its tests.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitRejected = 2,
  kExitInsufficientPrecision = 3,
  kExitUsage = 64,
};

struct CaseSpec {
  std::string suite;                        // verify-ic, verify-cc, verify-pndivg, property-suite, show-case
  long f = 0;                               // modulus of K = Q(xi_f)^H
  std::vector<long> H;                      // generators of H
  std::optional<std::vector<long>> Hprime;  // generators of H' (k = Q(xi_f)^{H'}); absent means k = Q
  long p = 3;
  int n = 0;
  std::vector<long> extra_S;
  int samples = 20;
  std::uint64_t seed = 1;
  int guard = 8;
};

nlohmann::ordered_json case_to_json(const CaseSpec& c);
// Fields present in j replace those of base; UsageError on malformed input.
CaseSpec case_from_json(const nlohmann::json& j, CaseSpec base);

// Raised for malformed case descriptions (exit 64), as opposed to valid cases that
// fail the hypotheses (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The effective place set for the suite: {oo} and the primes of f, p for the
// p-does-not-divide-|G| check, and the extra primes.
PlaceSet effective_place_set(const CaseSpec& c, const FieldSpec& K);
FieldSpec field_of(const CaseSpec& c);

struct SuiteOutcome {
  nlohmann::ordered_json report;
  int exit_code = kExitFail;
};

// Runs the suite at c.guard and, on InsufficientPrecision, once more at the doubled guard (at least 16).
// The report is a pure function of c except for the "wall_time_ms" field.
SuiteOutcome run_suite(const CaseSpec& c);

// Serialization used for report files: two-space indent, trailing newline.
std::string render_report(const nlohmann::ordered_json& report);

}  // namespace starklab
