#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmsched {

enum class ErrorCode {
  DomainError,
  PilotOverflow,
  InsufficientAntennas,
  UnsupportedReuse,
  ConvergenceError,
  IndexError,
  RankDeficient,
  EmptyFeasibleSet,
  NotFound,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mmsched
