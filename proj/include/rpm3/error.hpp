#pragma once

#include <stdexcept>
#include <string>

namespace rpm3 {

enum class Errc {
  ZeroInverse,
  DimensionMismatch,
  FieldMismatch,
  InvalidArgument,
  DuplicateNode,
  DuplicateAbscissa,
  InsufficientSamples,
  InconsistentSamples,
  IndexOutOfRange,
  InconsistentPacket,
  TooFewWorkers,
  PlanViolation,
  MissingSharedEvals,
  Timeout,
  EmptyQueue,
  Infeasible,
  RegimeViolation,
  ModelUnsupported,
  ConventionViolation,
  PrecisionLoss,
  InsufficientShares,
  InstanceTooLarge,
  ConfigError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace rpm3
