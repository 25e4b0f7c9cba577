#include "starklab/report.hpp"

#include <chrono>
#include <functional>
#include <numeric>

#include "starklab/basechange.hpp"
#include "starklab/kernels.hpp"
#include "starklab/properties.hpp"

namespace starklab {

using ojson = nlohmann::ordered_json;

namespace {

const char* const kSuites[] = {"verify-ic", "verify-cc", "verify-pndivg", "property-suite", "show-case"};

bool known_suite(const std::string& s) {
  for (const char* k : kSuites)
    if (s == k) return true;
  return false;
}

std::vector<long> long_list(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw UsageError(std::string("\"") + key + "\" must be an array of integers");
  std::vector<long> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw UsageError(std::string("\"") + key + "\" must be an array of integers");
    out.push_back(x.get<long>());
  }
  return out;
}

template <class T>
T integer_field(const nlohmann::json& j, const char* key) {
  if (!j.is_number_integer()) throw UsageError(std::string("\"") + key + "\" must be an integer");
  return j.get<T>();
}

void validate(const CaseSpec& c) {
  if (!known_suite(c.suite)) throw UsageError("unknown suite \"" + c.suite + "\"");
  if (c.suite == "property-suite") {
    if (c.samples < 1) throw UsageError("--samples must be positive");
    return;
  }
  if (c.f < 1) throw UsageError("--f must be a positive integer");
  if (c.p < 2 || !is_prime(c.p)) throw UsageError("--p must be a prime");
  if (c.n < 0) throw UsageError("--n must be non-negative");
  if (c.samples < 1) throw UsageError("--samples must be positive");
  if (c.guard < 1) throw UsageError("the guard must be at least one digit");
  for (long q : c.extra_S)
    if (q < 2 || !is_prime(q)) throw UsageError("extra places must be rational primes");
  auto check_units = [&](const std::vector<long>& gens) {
    for (long h : gens)
      if (std::gcd(((h % c.f) + c.f) % c.f, c.f) != 1)
        throw UsageError("subgroup generators must be units mod f");
  };
  check_units(c.H);
  if (c.Hprime) check_units(*c.Hprime);
}

bool is_rejection(ErrorKind k) {
  switch (k) {
    case ErrorKind::HypothesisViolated:
    case ErrorKind::NotCM:
    case ErrorKind::BadPlaceSet:
    case ErrorKind::PDividesGroupOrder:
    case ErrorKind::UnsupportedFirstArgument:
    case ErrorKind::NoComplexConjugation:
    case ErrorKind::RamifiedPrime:
    case ErrorKind::CharacterUndefined:
    case ErrorKind::EvenCharacter:
    case ErrorKind::NotInSubfield:
      return true;
    default:
      return false;
  }
}

bool is_precision_error(ErrorKind k) {
  return k == ErrorKind::InsufficientPrecision || k == ErrorKind::PrecisionTooLow;
}

ojson place_set_json(const PlaceSet& S) {
  ojson out = ojson::array();
  if (S.infinity) out.push_back("inf");
  for (long q : S.primes) out.push_back(q);
  return out;
}

ojson error_json(const StarkError& e) {
  return ojson{{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
}

ojson wrap(const std::vector<long long>& v) { return ojson::array({ojson(v)}); }

// One attempt at a fixed guard. Precision errors escape to the caller, which retries.
struct Attempt {
  ojson trials = ojson::array();
  ojson extra = ojson::object();
  std::string verdict = "pass";
  std::optional<ojson> error;
  int precision = 0;
};

Attempt attempt_verify(const CaseSpec& spec, const FieldSpec& K, int guard) {
  Attempt a;
  CaseParams cp;
  cp.p = spec.p;
  cp.n = spec.n;
  cp.guard = guard;
  cp.S = effective_place_set(spec, K);
  a.extra["S"] = place_set_json(cp.S);
  a.extra["embedding"] = "iota_P1: xi_f -> X, canonical Hensel factor";

  std::function<TrialResult(std::uint64_t)> run;
  if (spec.suite == "verify-cc") {
    require_cc_case(K, cp);
    run = [&](std::uint64_t s) { return cc_trial(K, cp, s); };
    a.extra["relation"] = "==";
    a.extra["modulus"] = ipow(spec.p, spec.n + 1);
    // the tau ordering and kappa_n(tau_1 ... tau_d) that normalize the right-hand side
    const auto gs = default_gammas(K);
    a.extra["gammas"] = gs;
    a.extra["kappa"] = kappa_of_gammas(gs, spec.p, spec.n).value();
  } else if (spec.suite == "verify-ic") {
    run = [&](std::uint64_t s) { return ic_trial(K, cp, s); };
    a.extra["relation"] = ">=";
  } else {
    run = [&](std::uint64_t s) { return pndivg_trial(K, cp, s); };
    a.extra["relation"] = ">=";
  }
  a.precision = working_precision(K, cp);

  std::vector<bool> attained;
  std::vector<long long> min_valuation;
  bool all_equal = true;
  for (int i = 0; i < spec.samples; ++i) {
    const std::uint64_t s = spec.seed + static_cast<std::uint64_t>(i);
    ojson t;
    t["seed"] = s;
    try {
      const TrialResult r = run(s);
      t["lhs"] = wrap(r.lhs);
      if (spec.suite == "verify-ic") {
        // the claim is v(coefficient) >= 0; rhs records the bound, known_digits what was resolved
        t["rhs"] = wrap(std::vector<long long>(r.lhs.size(), 0));
        t["known_digits"] = r.rhs.empty() ? 0 : r.rhs[0];
        if (min_valuation.empty()) min_valuation = r.lhs;
        for (size_t g = 0; g < r.lhs.size(); ++g) min_valuation[g] = std::min(min_valuation[g], r.lhs[g]);
      } else {
        t["rhs"] = wrap(r.rhs);
      }
      t["equal"] = r.equal;
      all_equal = all_equal && r.equal;
      if (spec.suite == "verify-pndivg") {
        attained.resize(r.lhs.size(), false);
        for (size_t j = 0; j < r.lhs.size(); ++j)
          if (r.lhs[j] == r.rhs[j]) attained[j] = true;
      }
      if (spec.suite == "verify-cc" && K.degree_k() == 2) {
        const BaseChangeReport bc = base_change_check(K, cp, s);
        const bool ok = bc.agreement_digits >= 0 && bc.det_d_matches_H && bc.det_c_matches_det_d;
        t["base_change"] = ojson{{"agreement_digits", bc.agreement_digits},
                                 {"det_d_matches_H", bc.det_d_matches_H},
                                 {"det_c_matches_det_d", bc.det_c_matches_det_d},
                                 {"ok", ok}};
        all_equal = all_equal && ok;
      }
    } catch (const StarkError& e) {
      if (is_precision_error(e.kind()) || is_rejection(e.kind())) throw;
      t["lhs"] = ojson::array();
      t["rhs"] = ojson::array();
      t["equal"] = false;
      t["error"] = error_json(e);
      all_equal = false;
    }
    a.trials.push_back(std::move(t));
  }
  if (spec.suite == "verify-ic") a.extra["min_valuation"] = min_valuation;
  bool all_attained = true;
  if (spec.suite == "verify-pndivg") {
    // characters are listed in the order of the odd characters of G
    ojson att = ojson::array();
    for (bool b : attained) {
      att.push_back(b);
      all_attained = all_attained && b;
    }
    a.extra["attained"] = std::move(att);
  }
  a.verdict = all_equal && all_attained ? "pass" : "fail";
  return a;
}

Attempt attempt_show(const CaseSpec& spec, const FieldSpec& K, int guard) {
  Attempt a;
  CaseParams cp;
  cp.p = spec.p;
  cp.n = spec.n;
  cp.guard = guard;
  cp.S = effective_place_set(spec, K);
  ojson info;
  info["degree_K"] = K.Gamma()->order();
  info["order_G"] = K.G()->order();
  info["degree_k"] = K.degree_k();
  info["conductor"] = K.conductor();
  info["cm"] = K.is_CM();
  info["S"] = place_set_json(cp.S);
  info["gammas"] = default_gammas(K);
  info["conv_kernel"] = conv_kernel_name();
  if (K.is_CM() && K.degree_k() <= 2) {
    info["a_minus_shift"] = a_minus_shift(K, cp.S, spec.p);
    a.precision = working_precision(K, cp);
  }
  info["precision_digits"] = a.precision;
  a.extra["info"] = std::move(info);
  return a;
}

Attempt attempt_properties(const CaseSpec& spec) {
  Attempt a;
  a.precision = 0;
  for (const auto& r : run_property_suite(spec.seed, spec.samples)) {
    a.trials.push_back(ojson{{"seed", spec.seed},
                             {"name", r.name},
                             {"checks", r.checks},
                             {"equal", r.pass},
                             {"detail", r.detail}});
    if (!r.pass) a.verdict = "fail";
  }
  return a;
}

int exit_for(const std::string& verdict) {
  if (verdict == "pass") return kExitPass;
  if (verdict == "rejected") return kExitRejected;
  return kExitFail;
}

}  // namespace

ojson case_to_json(const CaseSpec& c) {
  ojson j;
  j["suite"] = c.suite;
  j["f"] = c.f;
  j["H"] = c.H;
  j["Hprime"] = c.Hprime ? ojson(*c.Hprime) : ojson(nullptr);
  j["p"] = c.p;
  j["n"] = c.n;
  j["extra_S"] = c.extra_S;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["guard"] = c.guard;
  return j;
}

CaseSpec case_from_json(const nlohmann::json& j, CaseSpec base) {
  if (!j.is_object()) throw UsageError("a case description must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto& v = it.value();
    if (key == "suite") {
      if (!v.is_string()) throw UsageError("\"suite\" must be a string");
      base.suite = v.get<std::string>();
    } else if (key == "f") {
      base.f = integer_field<long>(v, "f");
    } else if (key == "H") {
      base.H = long_list(v, "H");
    } else if (key == "Hprime") {
      if (v.is_null())
        base.Hprime.reset();
      else
        base.Hprime = long_list(v, "Hprime");
    } else if (key == "p") {
      base.p = integer_field<long>(v, "p");
    } else if (key == "n") {
      base.n = integer_field<int>(v, "n");
    } else if (key == "extra_S") {
      base.extra_S = long_list(v, "extra_S");
    } else if (key == "samples") {
      base.samples = integer_field<int>(v, "samples");
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw UsageError("\"seed\" must be a non-negative integer");
      base.seed = v.get<std::uint64_t>();
    } else if (key == "guard") {
      base.guard = integer_field<int>(v, "guard");
    } else {
      throw UsageError("unknown case field \"" + key + "\"");
    }
  }
  return base;
}

FieldSpec field_of(const CaseSpec& c) { return FieldSpec(c.f, c.H, c.Hprime); }

PlaceSet effective_place_set(const CaseSpec& c, const FieldSpec& K) {
  PlaceSet S = minimal_place_set(K);
  if (c.suite == "verify-pndivg") S = S.with(c.p);
  for (long q : c.extra_S) S = S.with(q);
  return S;
}

SuiteOutcome run_suite(const CaseSpec& c) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();

  std::optional<FieldSpec> K;
  if (c.suite != "property-suite") {
    try {
      K.emplace(field_of(c));
    } catch (const StarkError& e) {
      throw UsageError(std::string("cannot build the field: ") + e.what());
    }
  }

  auto attempt = [&](int guard) {
    if (c.suite == "property-suite") return attempt_properties(c);
    if (c.suite == "show-case") return attempt_show(c, *K, guard);
    return attempt_verify(c, *K, guard);
  };

  Attempt a;
  int guard = c.guard;
  bool retried = false;
  bool out_of_precision = false;
  for (int round = 0; round < 2; ++round) {
    try {
      a = attempt(guard);
      out_of_precision = false;
      break;
    } catch (const StarkError& e) {
      a = Attempt{};
      a.error = error_json(e);
      if (is_precision_error(e.kind())) {
        out_of_precision = true;
        if (round == 0) {
          guard = std::max(16, 2 * guard);
          retried = true;
        }
        continue;
      }
      a.verdict = is_rejection(e.kind()) ? "rejected" : "fail";
      break;
    }
  }
  if (out_of_precision) a.verdict = "fail";

  ojson r;
  r["schema_version"] = kReportSchemaVersion;
  r["case"] = case_to_json(c);
  r["suite"] = c.suite;
  for (auto it = a.extra.begin(); it != a.extra.end(); ++it) r[it.key()] = it.value();
  r["trials"] = std::move(a.trials);
  r["verdict"] = a.verdict;
  r["precision"] = a.precision;
  r["guard_digits"] = guard;
  r["retried"] = retried;
  if (a.error) r["error"] = *a.error;
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  r["wall_time_ms"] = ms.count();

  SuiteOutcome out;
  out.exit_code = out_of_precision ? kExitInsufficientPrecision : exit_for(a.verdict);
  out.report = std::move(r);
  return out;
}

std::string render_report(const ojson& report) { return report.dump(2) + "\n"; }

}  // namespace starklab
