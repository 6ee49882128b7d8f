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

#include "revbridge/error.hpp"

#include <array>
#include <utility>

namespace revbridge {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 29> kNames{{
    {ErrorCode::kIllegalTransition, "IllegalTransition"},
    {ErrorCode::kMissingFeedback, "MissingFeedback"},
    {ErrorCode::kUnknownRole, "UnknownRole"},
    {ErrorCode::kRoleConflict, "RoleConflict"},
    {ErrorCode::kNoGrant, "NoGrant"},
    {ErrorCode::kNotEditor, "NotEditor"},
    {ErrorCode::kNotAuthor, "NotAuthor"},
    {ErrorCode::kNotAuthorized, "NotAuthorized"},
    {ErrorCode::kEmptyTitle, "EmptyTitle"},
    {ErrorCode::kStaleRevision, "StaleRevision"},
    {ErrorCode::kBadAnchor, "BadAnchor"},
    {ErrorCode::kParseError, "ParseError"},
    {ErrorCode::kBadSignature, "BadSignature"},
    {ErrorCode::kTokenExpired, "TokenExpired"},
    {ErrorCode::kTokenReplayed, "TokenReplayed"},
    {ErrorCode::kUnknownJournal, "UnknownJournal"},
    {ErrorCode::kDuplicateReviewer, "DuplicateReviewer"},
    {ErrorCode::kAuthorReviewerConflict, "AuthorReviewerConflict"},
    {ErrorCode::kRoundLimitExceeded, "RoundLimitExceeded"},
    {ErrorCode::kEmptySecret, "EmptySecret"},
    {ErrorCode::kMissingField, "MissingField"},
    {ErrorCode::kBadRole, "BadRole"},
    {ErrorCode::kDeliveryExhausted, "DeliveryExhausted"},
    {ErrorCode::kProtocolError, "ProtocolError"},
    {ErrorCode::kScriptParseError, "ScriptParseError"},
    {ErrorCode::kEndpointUnreachable, "EndpointUnreachable"},
    {ErrorCode::kNotFound, "NotFound"},
    {ErrorCode::kBadRequest, "BadRequest"},
    {ErrorCode::kUnauthenticated, "Unauthenticated"},
}};

}  // namespace

std::string_view to_string(ErrorCode code) {
  for (auto const& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) {
  for (auto const& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadSignature:
    case ErrorCode::kTokenExpired:
    case ErrorCode::kTokenReplayed:
    case ErrorCode::kUnauthenticated:
      return 401;
    case ErrorCode::kNoGrant:
    case ErrorCode::kNotEditor:
    case ErrorCode::kNotAuthor:
    case ErrorCode::kNotAuthorized:
      return 403;
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownJournal:
      return 404;
    case ErrorCode::kRoleConflict:
    case ErrorCode::kStaleRevision:
    case ErrorCode::kIllegalTransition:
    case ErrorCode::kDuplicateReviewer:
    case ErrorCode::kAuthorReviewerConflict:
    case ErrorCode::kRoundLimitExceeded:
      return 409;
    case ErrorCode::kDeliveryExhausted:
    case ErrorCode::kEndpointUnreachable:
      return 502;
    default:
      return 400;
  }
}

}  // namespace revbridge
