#include "homi/error.hpp"

namespace homi {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::DegenerateStatistic: return "DegenerateStatistic";
    case ErrorCode::NoEvaluableInstance: return "NoEvaluableInstance";
    case ErrorCode::NoEvaluableLabel: return "NoEvaluableLabel";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidS: return "InvalidS";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownLabelName: return "UnknownLabelName";
    case ErrorCode::NonBinaryLabelValue: return "NonBinaryLabelValue";
  }
  return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix:
    case ErrorCode::NotSymmetric:
    case ErrorCode::DegenerateDenominator:
    case ErrorCode::ZeroColumn:
    case ErrorCode::DegenerateStatistic:
    case ErrorCode::NoEvaluableInstance:
    case ErrorCode::NoEvaluableLabel:
      return ErrorKind::Numerical;
    default:
      return ErrorKind::Data;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace homi
