#include "mmsched/errors.hpp"

namespace mmsched {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PilotOverflow: return "PilotOverflow";
    case ErrorCode::InsufficientAntennas: return "InsufficientAntennas";
    case ErrorCode::UnsupportedReuse: return "UnsupportedReuse";
    case ErrorCode::ConvergenceError: return "ConvergenceError";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptyFeasibleSet: return "EmptyFeasibleSet";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mmsched
