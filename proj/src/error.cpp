#include "orka/error.hpp"

namespace orka {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidLambda: return "InvalidLambda";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DegeneratePade: return "DegeneratePade";
    case ErrorKind::ZeroReference: return "ZeroReference";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace orka
