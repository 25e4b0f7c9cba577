// starklab: command-line front end for the congruence, integrality and
// p-does-not-divide-|G| checks. Writes one JSON report per invocation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "starklab/errors.hpp"
#include "starklab/report.hpp"

using namespace starklab;

namespace {

struct Flags {
  std::string case_file, out_file;
  long f = 0, p = 0;
  int n = 0, samples = 0, guard = 0;
  std::uint64_t seed = 0;
  std::vector<long> H, Hprime, extra_S;
};

struct Bound {
  CLI::App* sub = nullptr;
  Flags flags;
};

void add_case_options(CLI::App* sub, Flags& fl, bool field_flags) {
  sub->add_option("--case", fl.case_file, "JSON case description; flags given explicitly take precedence");
  sub->add_option("--out", fl.out_file, "write the report here instead of stdout");
  sub->add_option("--samples", fl.samples, "number of trials")->check(CLI::PositiveNumber);
  sub->add_option("--seed", fl.seed, "seed of the first trial; trial i uses seed + i");
  if (!field_flags) return;
  sub->add_option("--f", fl.f, "K is the fixed field of H inside Q(xi_f)")->check(CLI::PositiveNumber);
  sub->add_option("--H", fl.H, "generators of H, comma separated")->delimiter(',');
  sub->add_option("--k,--Hprime", fl.Hprime, "generators of H' with k the fixed field of H'; omit for k = Q")
      ->delimiter(',');
  sub->add_option("--p", fl.p, "the prime p");
  sub->add_option("--n", fl.n, "mu_{p^{n+1}} must lie in K for verify-cc")->check(CLI::NonNegativeNumber);
  sub->add_option("--extra-S", fl.extra_S, "additional finite places of S, comma separated")->delimiter(',');
  sub->add_option("--guard", fl.guard, "guard digits (default 8, or STARKLAB_GUARD_DIGITS)")
      ->check(CLI::PositiveNumber);
}

bool given(const CLI::App* sub, const char* name) {
  const CLI::Option* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

CaseSpec assemble(const std::string& suite, const CLI::App* sub, const Flags& fl) {
  CaseSpec c;
  c.suite = suite;
  if (const char* env = std::getenv("STARKLAB_GUARD_DIGITS"); env && *env) {
    try {
      size_t used = 0;
      c.guard = std::stoi(env, &used);
      if (used != std::string(env).size() || c.guard < 1) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("STARKLAB_GUARD_DIGITS must be a positive integer, got \"") + env + "\"");
    }
  }
  if (!fl.case_file.empty()) {
    std::ifstream in(fl.case_file);
    if (!in) throw UsageError("cannot read case file " + fl.case_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("malformed case file: " + std::string(e.what()));
    }
    if (j.is_object() && j.contains("suite") && j["suite"] != suite)
      throw UsageError("case file is for suite " + j["suite"].dump() + ", not " + suite);
    c = case_from_json(j, c);
  }
  if (given(sub, "--f")) c.f = fl.f;
  if (given(sub, "--H")) c.H = fl.H;
  if (given(sub, "--k")) c.Hprime = fl.Hprime;
  if (given(sub, "--p")) c.p = fl.p;
  if (given(sub, "--n")) c.n = fl.n;
  if (given(sub, "--extra-S")) c.extra_S = fl.extra_S;
  if (given(sub, "--samples")) c.samples = fl.samples;
  if (given(sub, "--seed")) c.seed = fl.seed;
  if (given(sub, "--guard")) c.guard = fl.guard;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of refined Stark conjectures over abelian fields"};
  app.require_subcommand(1);

  const char* names[] = {"verify-ic", "verify-cc", "verify-pndivg", "property-suite", "show-case"};
  const char* help[] = {
      "check that s_{K/k,S}(u) lies in Z_p G",
      "check s_{K/k,S}(u) = kappa H_{K/k,n}(eta, u) mod p^{n+1}",
      "check v(phi(s(u))) against the L-value bound for p not dividing |G|",
      "run the algebraic property checks",
      "print the derived data of a case",
  };
  std::vector<Bound> subs(std::size(names));
  for (size_t i = 0; i < subs.size(); ++i) {
    subs[i].sub = app.add_subcommand(names[i], help[i]);
    add_case_options(subs[i].sub, subs[i].flags, std::string(names[i]) != "property-suite");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].sub->parsed()) continue;
    try {
      const CaseSpec c = assemble(names[i], subs[i].sub, subs[i].flags);
      const SuiteOutcome out = run_suite(c);
      const std::string text = render_report(out.report);
      if (subs[i].flags.out_file.empty()) {
        std::cout << text;
      } else {
        std::ofstream os(subs[i].flags.out_file);
        if (!os) throw UsageError("cannot write " + subs[i].flags.out_file);
        os << text;
      }
      std::cerr << names[i] << ": " << out.report["verdict"].get<std::string>() << "\n";
      return out.exit_code;
    } catch (const UsageError& e) {
      std::cerr << "starklab: " << e.what() << "\n";
      return kExitUsage;
    } catch (const StarkError& e) {
      // only reached for failures outside the suite proper
      std::cerr << "starklab: " << e.what() << "\n";
      return kExitFail;
    }
  }
  return kExitUsage;
}
