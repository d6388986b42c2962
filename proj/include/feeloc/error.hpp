#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace feeloc {

enum class ErrorKind {
  kNegativeFee,
  kUnsortedBreakpoints,
  kDuplicateOverride,
  kLscViolation,
  kNoFiniteFee,
  kEmptyInterval,
  kEmptyProfile,
  kInfeasible,
  kBadRange,
  kBadIndex,
  kTooLarge,
  kBadParams,
  kInvalidLottery,
  kParse,
  kIo,
};

std::string_view error_kind_name(ErrorKind kind);

// Single exception type for every library failure; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace feeloc
