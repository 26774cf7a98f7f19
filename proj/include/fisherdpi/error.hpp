// Copyright 2026 The fisherdpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fisherdpi {

enum class ErrorCode {
  NotHermitian,
  DimensionMismatch,
  InvalidState,
  InvalidPovm,
  InvalidChannel,
  NotNormalized,
  NotUnitary,
  SingularOutcome,
  DerivativeOffSupport,
  ZeroEvidence,
  InvalidArgument,
  ParseError,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::SingularOutcome: return "SingularOutcome";
    case ErrorCode::DerivativeOffSupport: return "DerivativeOffSupport";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an `Error` carrying a
/// machine-readable code; the message holds the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace fisherdpi
