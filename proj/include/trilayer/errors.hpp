#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trilayer {

enum class Errc {
  AssumptionViolated,
  NonFinite,
  NegativeConcentration,
  CapExceeded,
  NonMonotoneTarget,
  OutOfRange,
  BelowEtaStar,
  NonPositiveEta,
  SigmaBelowQuiescent,
  BelowCriticalRadius,
  BracketNotFound,
  NonPositiveInputs,
  InvalidArgument,
  ConfigFormat,
};

std::string_view to_string(Errc code);

/// Base error for every failure raised by the library. `name()` is the
/// structured error name reported by the CLI.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  Errc code_;
};

struct Violation {
  std::string name;
  std::string detail;
};

/// Raised by validate_config with one entry per failed assumption clause.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace trilayer
