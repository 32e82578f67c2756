#pragma once

#include <stdexcept>
#include <string>

namespace totmom {

// Numeric values are part of the C ABI (see totmom.h) and must not change.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  InvalidDomain = 2,
  NoConvergence = 3,
  CutoffTooSmall = 4,
  EnumerationGuard = 5,
  MissingZero = 6,
  IncompleteSupport = 7,
  NotPositiveDefinite = 8,
  OffLatticeVelocity = 9,
  NegativeKernel = 10,
  PhaseWrap = 11,
  ZeroAmplitude = 12,
  InvalidParams = 13,
  ScheduleNotMonotone = 14,
  WindowNotClosed = 15,
  Config = 16,
  Io = 17,
  Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace totmom
