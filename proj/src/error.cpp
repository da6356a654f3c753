#include "rpm3/error.hpp"

namespace rpm3 {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DuplicateNode: return "DuplicateNode";
    case Errc::DuplicateAbscissa: return "DuplicateAbscissa";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::InconsistentSamples: return "InconsistentSamples";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InconsistentPacket: return "InconsistentPacket";
    case Errc::TooFewWorkers: return "TooFewWorkers";
    case Errc::PlanViolation: return "PlanViolation";
    case Errc::MissingSharedEvals: return "MissingSharedEvals";
    case Errc::Timeout: return "Timeout";
    case Errc::EmptyQueue: return "EmptyQueue";
    case Errc::Infeasible: return "Infeasible";
    case Errc::RegimeViolation: return "RegimeViolation";
    case Errc::ModelUnsupported: return "ModelUnsupported";
    case Errc::ConventionViolation: return "ConventionViolation";
    case Errc::PrecisionLoss: return "PrecisionLoss";
    case Errc::InsufficientShares: return "InsufficientShares";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace rpm3
