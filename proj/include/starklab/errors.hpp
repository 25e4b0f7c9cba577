#pragma once

#include <stdexcept>
#include <string>

namespace starklab {

enum class ErrorKind {
  NonUnitResidue,
  NotInSubfield,
  NoComplexConjugation,
  CharacterUndefined,
  RamifiedPrime,
  NotCM,
  BadPlaceSet,
  PDividesGroupOrder,
  EvenCharacter,
  PrecisionTooLow,
  NotPrincipalUnit,
  NonIntegral,
  InsufficientPrecision,
  HypothesisViolated,
  UnsupportedFirstArgument,
  IntegralityFailure,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

// Every library failure is reported through this one exception type; callers
// that need to distinguish cases switch on kind().
class StarkError : public std::runtime_error {
 public:
  StarkError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw StarkError(kind, what); }

}  // namespace starklab
