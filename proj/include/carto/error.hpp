#pragma once

#include <stdexcept>
#include <string>

namespace carto {

enum class ErrorCode {
  ClipTooLarge,
  FormatError,
  IoError,
  EmptyMask,
  EmptyCorpus,
  EmptyMarker,
  MarkerOverlap,
  EmptyInput,
  BudgetExceeded,
  SpecError,
  DimensionMismatch,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace carto
