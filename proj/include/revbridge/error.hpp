// Copyright 2026 The revbridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace revbridge {

/// Closed set of failure classes shared by both services and the bridge.
/// The names double as the wire-level `error` field of HTTP error bodies.
enum class ErrorCode {
  kIllegalTransition,
  kMissingFeedback,
  kUnknownRole,
  kRoleConflict,
  kNoGrant,
  kNotEditor,
  kNotAuthor,
  kNotAuthorized,
  kEmptyTitle,
  kStaleRevision,
  kBadAnchor,
  kParseError,
  kBadSignature,
  kTokenExpired,
  kTokenReplayed,
  kUnknownJournal,
  kDuplicateReviewer,
  kAuthorReviewerConflict,
  kRoundLimitExceeded,
  kEmptySecret,
  kMissingField,
  kBadRole,
  kDeliveryExhausted,
  kProtocolError,
  kScriptParseError,
  kEndpointUnreachable,
  kNotFound,
  kBadRequest,
  kUnauthenticated,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> error_code_from_string(std::string_view name);

/// HTTP status used when the error crosses a service boundary.
/// 4xx statuses are non-retryable for the bridge.
int http_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string const& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}
  explicit Error(ErrorCode code)
      : std::runtime_error(std::string(to_string(code))), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string const& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace revbridge
