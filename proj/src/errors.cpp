#include "lotto/errors.hpp"

namespace lotto {

const char* to_string(Err code) noexcept {
  switch (code) {
    case Err::NonPositiveValue: return "NonPositiveValue";
    case Err::NegativeBudget: return "NegativeBudget";
    case Err::NoConsistentPartition: return "NoConsistentPartition";
    case Err::ZeroRealTimeA: return "ZeroRealTimeA";
    case Err::ConvergenceFailure: return "ConvergenceFailure";
    case Err::NumericUnsupported: return "NumericUnsupported";
    case Err::OutOfBudget: return "OutOfBudget";
    case Err::NoRootInInterval: return "NoRootInInterval";
    case Err::BracketFailure: return "BracketFailure";
    case Err::TooManyBattlefields: return "TooManyBattlefields";
    case Err::UnknownCheck: return "UnknownCheck";
  }
  return "UnknownError";
}

int exit_category(Err code) noexcept {
  switch (code) {
    case Err::NonPositiveValue:
    case Err::NegativeBudget:
    case Err::OutOfBudget:
    case Err::TooManyBattlefields:
    case Err::UnknownCheck:
      return 1;
    default:
      return 2;
  }
}

Error::Error(Err code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace lotto
