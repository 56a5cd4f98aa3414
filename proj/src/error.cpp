#include "vfdr/error.hpp"

namespace vfdr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::ConstantSeries: return "ConstantSeries";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::MissingEstimates: return "MissingEstimates";
    case ErrorKind::NonPositiveArea: return "NonPositiveArea";
    case ErrorKind::AreaSumMismatch: return "AreaSumMismatch";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::UnsupportedScheme: return "UnsupportedScheme";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveArea:
    case ErrorKind::AreaSumMismatch:
    case ErrorKind::DegenerateFit:
      return 3;
    case ErrorKind::UnsupportedScheme:
    case ErrorKind::InvalidConfig:
      return 4;
    default:
      return 2;
  }
}

Error::Error(ErrorKind kind, std::string module, const std::string& what)
    : std::runtime_error(module + ": " + std::string(to_string(kind)) + ": " + what),
      kind_(kind),
      module_(std::move(module)) {}

}  // namespace vfdr
