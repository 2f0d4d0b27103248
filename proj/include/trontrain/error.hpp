// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tt {

// Mirrors tt_status in trontrain.h; values must stay in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kEmptyInput = 3,
  kHypothesis = 4,
  kNumeric = 5,
  kIo = 6,
  kParse = 7,
  kAlreadyConverged = 8,
  kTargetBelowFloor = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace tt
