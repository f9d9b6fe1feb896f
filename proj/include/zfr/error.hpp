#pragma once

#include <stdexcept>
#include <string>

namespace zfr {

// Mirrors zfr_status in zfr.h; the numeric values are part of the C ABI.
enum class ErrorCode : int {
  InvalidArgument = 1,
  RatioOutOfRange = 2,
  MultipleRoots = 3,
  NonnegativityFailure = 4,
  DomainError = 5,
  CapacityError = 6,
  PoleError = 7,
  DivisionByZero = 8,
  DegreeOverflow = 9,
  NoFeasiblePoint = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace zfr
