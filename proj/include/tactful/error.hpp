// Copyright 2026 The Tactful Authors
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

namespace tactful {

enum class ErrorCode {
  kParse,
  kValidation,
  kUnknownStrategy,
  kInsufficientData,
  kInfeasible,
  kNoSafeStrategy,
  kEmptyPool,
  kUniverseTooLarge,
  kEmptyInput,
  kNoApplicableTemplate,
  kConfig,
  kTransport,
  kUnknownProfile,
  kIo,
};

inline std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kUnknownStrategy: return "unknown_strategy";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kNoSafeStrategy: return "no_safe_strategy";
    case ErrorCode::kEmptyPool: return "empty_pool";
    case ErrorCode::kUniverseTooLarge: return "universe_too_large";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kNoApplicableTemplate: return "no_applicable_template";
    case ErrorCode::kConfig: return "config_error";
    case ErrorCode::kTransport: return "transport_error";
    case ErrorCode::kUnknownProfile: return "unknown_profile";
    case ErrorCode::kIo: return "io_error";
  }
  return "error";
}

// All domain failures surface as this exception; `code()` is what the CLI
// and the HTTP service key their exit status / error body on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tactful
