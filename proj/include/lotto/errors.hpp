#pragma once

#include <stdexcept>
#include <string>

namespace lotto {

// Every failure mode the library reports. Codes map onto CLI exit
// categories: input validation (1) or solver/numeric failure (2).
enum class Err {
  NonPositiveValue,
  NegativeBudget,
  NoConsistentPartition,
  ZeroRealTimeA,
  ConvergenceFailure,
  NumericUnsupported,
  OutOfBudget,
  NoRootInInterval,
  BracketFailure,
  TooManyBattlefields,
  UnknownCheck,
};

const char* to_string(Err code) noexcept;

// 1 = caller passed bad input, 2 = a numeric routine could not deliver.
int exit_category(Err code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& detail);
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

}  // namespace lotto
