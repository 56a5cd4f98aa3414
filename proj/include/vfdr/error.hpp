#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vfdr {

enum class ErrorKind {
  EmptyInput,
  OutOfDomain,
  DuplicatePoints,
  DuplicateId,
  ParseError,
  TooFewPoints,
  TooShort,
  ConstantSeries,
  IndexMismatch,
  MissingEstimates,
  NonPositiveArea,
  AreaSumMismatch,
  DegenerateFit,
  UnsupportedScheme,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Exit-code class of an error: 2 input validation, 3 numerical, 4 configuration.
int exit_code(ErrorKind kind);

/// All library failures are reported through this type. `module` names the
/// component that raised it so CLI messages carry provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace vfdr
