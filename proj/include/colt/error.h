// Copyright 2026 The colt Authors.
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

#ifndef COLT_ERROR_H_
#define COLT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace colt {

enum class ErrorCode {
  // taxonomy-core
  kEmptyEntity,
  kMultipleRoots,
  kCycleDetected,
  kDisconnectedNode,
  kDuplicateParent,
  kDuplicateEdge,
  kNonMonotoneUpdate,
  kNotALeaf,
  kUnknownEdge,
  // outline
  kEmptyInput,
  kNoRootLine,
  // prompts and engine
  kRootNotInEntityList,
  kPrecondition,
  kInsufficientDemos,
  // gateway
  kAuthError,
  kRateLimited,
  kTimeout,
  kServerError,
  kScriptExhausted,
  kMalformedResponse,
  kIoError,
  kInvalidConfig,
  // scoring
  kScorerUnavailable,
  // metrics and harness
  kEmptyReportList,
  kParseError,
  kInvariantViolation,
  kTargetTooLarge,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported with this exception. `entities` names the
// offending entities (keys or surfaces) when the error is structural.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> entities = {})
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        entities_(std::move(entities)) {}

  ErrorCode code() const { return code_; }
  const std::vector<std::string>& entities() const { return entities_; }

 private:
  ErrorCode code_;
  std::vector<std::string> entities_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyEntity: return "EmptyEntity";
    case ErrorCode::kMultipleRoots: return "MultipleRoots";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kDisconnectedNode: return "DisconnectedNode";
    case ErrorCode::kDuplicateParent: return "DuplicateParent";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kNonMonotoneUpdate: return "NonMonotoneUpdate";
    case ErrorCode::kNotALeaf: return "NotALeaf";
    case ErrorCode::kUnknownEdge: return "UnknownEdge";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNoRootLine: return "NoRootLine";
    case ErrorCode::kRootNotInEntityList: return "RootNotInEntityList";
    case ErrorCode::kPrecondition: return "PreconditionViolated";
    case ErrorCode::kInsufficientDemos: return "InsufficientDemos";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kServerError: return "ServerError";
    case ErrorCode::kScriptExhausted: return "ScriptExhausted";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kScorerUnavailable: return "ScorerUnavailable";
    case ErrorCode::kEmptyReportList: return "EmptyReportList";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kTargetTooLarge: return "TargetTooLarge";
  }
  return "Unknown";
}

}  // namespace colt

#endif  // COLT_ERROR_H_
