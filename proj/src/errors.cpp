#include "trilayer/errors.hpp"

namespace trilayer {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::AssumptionViolated: return "AssumptionViolated";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NegativeConcentration: return "NegativeConcentration";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::NonMonotoneTarget: return "NonMonotoneTarget";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::BelowEtaStar: return "BelowEtaStar";
    case Errc::NonPositiveEta: return "NonPositiveEta";
    case Errc::SigmaBelowQuiescent: return "SigmaBelowQuiescent";
    case Errc::BelowCriticalRadius: return "BelowCriticalRadius";
    case Errc::BracketNotFound: return "BracketNotFound";
    case Errc::NonPositiveInputs: return "NonPositiveInputs";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigFormat: return "ConfigFormat";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

namespace {

std::string join(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += "; ";
    out += v.name;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(Errc::AssumptionViolated, join(violations)), violations_(std::move(violations)) {}

}  // namespace trilayer
