#pragma once

#include <stdexcept>
#include <string>

namespace homi {

enum class ErrorCode {
  // numerical
  SingularMatrix,
  NotSymmetric,
  DegenerateDenominator,
  ZeroColumn,
  DegenerateStatistic,
  NoEvaluableInstance,
  NoEvaluableLabel,
  // input / data
  DimensionMismatch,
  ShapeMismatch,
  InvalidS,
  InvalidK,
  InvalidAlpha,
  InvalidArgument,
  EmptyDataset,
  ParseError,
  UnknownLabelName,
  NonBinaryLabelValue,
};

/// Coarse grouping used by the command-line front end to pick an exit code.
enum class ErrorKind { Data, Numerical };

const char* to_string(ErrorCode code) noexcept;
ErrorKind kind_of(ErrorCode code) noexcept;

/// Library-wide exception. `what()` reads "<CodeName>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace homi
