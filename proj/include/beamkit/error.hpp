// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>

namespace beamkit {

enum class ErrorCode {
  kInvalidConfig,
  kInvalidInput,
  kShape,
  kNumerical,
  kInvalidGeometry,
  kParse,
  kIo,
};

const char* ToString(ErrorCode code);

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define BEAMKIT_REQUIRE(cond, code, msg)                \
  do {                                                  \
    if (!(cond)) throw ::beamkit::Error((code), (msg)); \
  } while (0)

}  // namespace beamkit
