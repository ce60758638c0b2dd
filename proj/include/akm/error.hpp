#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace akm {

enum class ErrorKind {
  // input / schema
  Syntax,
  UnknownIdentifier,
  Schema,
  HolomorphyViolation,
  DimensionMismatch,
  NonAnalyticComponent,
  DimensionLimit,
  UnknownEntry,
  ParamOutOfRange,
  OddDimension,
  Io,
  // numerical
  DivisionNearZero,
  BranchCutViolation,
  ComplexInRealField,
  SingularMetric,
  FrameSingular,
  NearNullEigenvalue,
};

const char* to_string(ErrorKind kind);

/// True for failures caused by where a function was evaluated rather than by
/// malformed input. Sampling loops skip points that raise these.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  /// Character offset for syntax errors.
  std::optional<std::size_t> offset() const noexcept { return offset_; }
  /// Path of the AST node that raised an arithmetic error ("" at the root).
  const std::string& path() const noexcept { return path_; }
  const std::string& detail() const noexcept { return detail_; }

  Error with_path_prefix(const std::string& segment) const;

 private:
  ErrorKind kind_;
  std::optional<std::size_t> offset_;
  std::string detail_;
  std::string path_;
};

}  // namespace akm
