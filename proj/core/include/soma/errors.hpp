#pragma once

#include <stdexcept>
#include <string>

namespace soma {

/// Base class for every error raised by the library. `code()` is a stable
/// identifier used by the command line tool for machine-readable output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define SOMA_DEFINE_ERROR(Name, Code)                                 \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(Code, what) {}     \
  }

SOMA_DEFINE_ERROR(OverlapError, "overlap");
SOMA_DEFINE_ERROR(PieceReuseError, "piece_reuse");
SOMA_DEFINE_ERROR(EmptyStateError, "empty_state");
SOMA_DEFINE_ERROR(EmptyStatsError, "empty_stats");
SOMA_DEFINE_ERROR(NoLandmarksError, "no_landmarks");
SOMA_DEFINE_ERROR(SamplingExhaustedError, "sampling_exhausted");
SOMA_DEFINE_ERROR(ResourceLimitError, "resource_limit");
SOMA_DEFINE_ERROR(DivisionByZeroError, "division_by_zero");
SOMA_DEFINE_ERROR(InvalidModelError, "invalid_model");
SOMA_DEFINE_ERROR(ParseError, "parse");
SOMA_DEFINE_ERROR(FormatError, "format");

#undef SOMA_DEFINE_ERROR

}  // namespace soma
