// Copyright 2026 The agreelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AGREELAB_ERRORS_HPP_
#define AGREELAB_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace agree {

enum class ErrorCode {
  kDimensionMismatch,
  kNegativeMass,
  kNotNormalized,
  kEmptyAxes,
  kZeroProbabilityConditioning,
  kZeroMassCell,
  kInvalidState,
  kInvalidModel,
  kInvalidInstrument,
  kInvalidProcess,
  kParameterOutOfRange,
  kBadWeights,
  kNoConvergence,
  kParseError,
  kValidationError,
};

std::string_view ErrorName(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kEmptyAxes: return "EmptyAxes";
    case ErrorCode::kZeroProbabilityConditioning:
      return "ZeroProbabilityConditioning";
    case ErrorCode::kZeroMassCell: return "ZeroMassCell";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kInvalidInstrument: return "InvalidInstrument";
    case ErrorCode::kInvalidProcess: return "InvalidProcess";
    case ErrorCode::kParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::kBadWeights: return "BadWeights";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace agree

#endif  // AGREELAB_ERRORS_HPP_
