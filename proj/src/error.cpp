#include "bcov/error.hpp"

namespace bcov {

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NonInteger: return "NonInteger";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::OddLattice: return "OddLattice";
    case ErrorCode::NotTwoElementary: return "NotTwoElementary";
    case ErrorCode::WrongSignature: return "WrongSignature";
    case ErrorCode::NotUpperHalf: return "NotUpperHalf";
    case ErrorCode::NotSiegel: return "NotSiegel";
    case ErrorCode::OddCharacteristic: return "OddCharacteristic";
    case ErrorCode::ThetaZeroDivision: return "ThetaZeroDivision";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::IndefiniteUnbounded: return "IndefiniteUnbounded";
    case ErrorCode::NotPositiveCone: return "NotPositiveCone";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::MissingCoefficient: return "MissingCoefficient";
    case ErrorCode::NonIntegralExponent: return "NonIntegralExponent";
    case ErrorCode::BadHodgeSplit: return "BadHodgeSplit";
    case ErrorCode::NotDetOne: return "NotDetOne";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::CommonFixedAxis: return "CommonFixedAxis";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::InvalidTriple: return "InvalidTriple";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::NonPositiveKaehler: return "NonPositiveKaehler";
    case ErrorCode::InconsistentKaehler: return "InconsistentKaehler";
  }
  return "Unknown";
}

}  // namespace bcov
