// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/error.hpp"

namespace beamkit {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kInvalidGeometry: return "invalid-geometry";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(ToString(code)) + " error: " + what), code_(code) {}

}  // namespace beamkit
