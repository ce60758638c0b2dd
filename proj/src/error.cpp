#include "akm/error.hpp"

namespace akm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::HolomorphyViolation: return "HolomorphyViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonAnalyticComponent: return "NonAnalyticComponent";
    case ErrorKind::DimensionLimit: return "DimensionLimit";
    case ErrorKind::UnknownEntry: return "UnknownEntry";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::OddDimension: return "OddDimension";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::DivisionNearZero: return "DivisionNearZero";
    case ErrorKind::BranchCutViolation: return "BranchCutViolation";
    case ErrorKind::ComplexInRealField: return "ComplexInRealField";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::FrameSingular: return "FrameSingular";
    case ErrorKind::NearNullEigenvalue: return "NearNullEigenvalue";
  }
  return "Error";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionNearZero:
    case ErrorKind::BranchCutViolation:
    case ErrorKind::SingularMetric:
    case ErrorKind::FrameSingular:
    case ErrorKind::NearNullEigenvalue:
      return true;
    default:
      return false;
  }
}

namespace {

std::string compose(ErrorKind kind, const std::string& detail,
                    const std::optional<std::size_t>& offset,
                    const std::string& path) {
  std::string out = to_string(kind);
  if (offset) out += " at offset " + std::to_string(*offset);
  if (!path.empty()) out += " at " + path;
  out += ": " + detail;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(compose(kind, message, offset, "")),
      kind_(kind),
      offset_(offset),
      detail_(message) {}

Error Error::with_path_prefix(const std::string& segment) const {
  Error e(kind_, detail_, offset_);
  e.path_ = path_.empty() ? segment : segment + "/" + path_;
  static_cast<std::runtime_error&>(e) =
      std::runtime_error(compose(kind_, detail_, offset_, e.path_));
  return e;
}

}  // namespace akm
