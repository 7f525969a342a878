#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bcov {

enum class ErrorCode {
  InvalidArgument,
  NotSymmetric,
  Degenerate,
  NonInteger,
  UnknownName,
  ZeroScale,
  OddLattice,
  NotTwoElementary,
  WrongSignature,
  NotUpperHalf,
  NotSiegel,
  OddCharacteristic,
  ThetaZeroDivision,
  SizeMismatch,
  PrecisionLoss,
  UnknownCase,
  IndefiniteUnbounded,
  NotPositiveCone,
  TailTooLarge,
  MissingCoefficient,
  NonIntegralExponent,
  BadHodgeSplit,
  NotDetOne,
  TooLarge,
  CommonFixedAxis,
  NotCoprime,
  InvalidData,
  InvalidTriple,
  SingularGram,
  NonPositiveKaehler,
  InconsistentKaehler,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace bcov
