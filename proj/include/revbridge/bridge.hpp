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

#include <chrono>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "revbridge/clock.hpp"
#include "revbridge/core.hpp"
#include "revbridge/error.hpp"

namespace revbridge::bridge {

inline constexpr char kSignatureHeader[] = "X-Bridge-Signature";
inline constexpr char kIdempotencyHeader[] = "X-Bridge-Idempotency-Key";

enum class MessageKind {
  kSubmitDocument,
  kResubmission,
  kReviewerAssigned,
  kDecisionRelayed,
};

std::string_view to_string(MessageKind kind);
MessageKind message_kind_from_string(std::string_view name);

/// Receiver path for each message kind.
std::string_view endpoint_path(MessageKind kind);

struct BridgeMessage {
  MessageKind kind = MessageKind::kSubmitDocument;
  std::string idempotency_key;
  Json payload = Json::object();
  Timestamp issued_at = 0;
  std::string signature;  // hex HMAC-SHA-256 over canonical_body()
};

/// SHA-256 over the kind name and the canonical form of the kind's
/// identifying fields. Throws MissingField when one is absent or empty.
///
///   SubmitDocument   document_id, journal_id, corresponding_author_email
///   Resubmission     submission_id, round_index
///   ReviewerAssigned submission_id, document_id, round_index, email
///   DecisionRelayed  submission_id, document_id, round_index
std::string idempotency_key(MessageKind kind, Json const& payload);
std::string idempotency_key(BridgeMessage const& message);

/// Builds an unsigned message with its idempotency key filled in.
BridgeMessage make_message(MessageKind kind, Json payload, Timestamp issued_at);

/// Canonical JSON of {idempotency_key, issued_at, kind, payload}; this is the
/// request body on the wire.
std::string canonical_body(BridgeMessage const& message);

BridgeMessage sign_message(std::string_view secret, BridgeMessage message);
bool verify_message(std::string_view secret, BridgeMessage const& message);
bool verify_body(std::string_view secret, std::string_view body,
                 std::string_view signature);

// ---------------------------------------------------------------------------
// Wire transport
// ---------------------------------------------------------------------------

struct WireRequest {
  std::string path;
  std::string body;
  std::string signature;
  std::string idempotency_key;
};

/// status == 0 means the transport failed before any response arrived.
struct WireResponse {
  int status = 0;
  std::string body;
};

WireRequest to_wire(BridgeMessage const& message);

/// Receiver side: checks the signature (BadSignature), parses the body,
/// confirms kind and key match (BadRequest otherwise).
BridgeMessage parse_wire(std::string_view secret, WireRequest const& request,
                         MessageKind expected);

class Transport {
 public:
  virtual ~Transport() = default;
  virtual WireResponse post(WireRequest const& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds max_backoff{10'000};

  /// Wait after failed attempt `attempt` (1-based): 100, 200, 400, ... ms,
  /// capped at max_backoff.
  std::chrono::milliseconds backoff_after(int attempt) const;
};

struct DeliveryReport {
  enum class Outcome { kDelivered, kDuplicate, kProtocolError, kExhausted };

  MessageKind kind = MessageKind::kSubmitDocument;
  std::string idempotency_key;
  int attempts = 0;
  std::vector<std::chrono::milliseconds> backoffs;
  Outcome outcome = Outcome::kExhausted;
  int last_status = 0;
  std::string response_body;
  std::optional<ErrorCode> remote_error;  // decoded from a 4xx body

  bool ok() const {
    return outcome == Outcome::kDelivered || outcome == Outcome::kDuplicate;
  }
  Json response_json() const;
  /// Throws ProtocolError / DeliveryExhausted (or the receiver's own error
  /// code when it reported one) unless ok().
  void raise_if_failed() const;
};

std::string_view to_string(DeliveryReport::Outcome outcome);
Json to_json(DeliveryReport const& report);

/// At-least-once delivery. Transport failures and 5xx are retried per
/// `policy`, sleeping on `clock`; 4xx is a non-retryable ProtocolError.
/// A receiver acknowledging a duplicate counts as success.
DeliveryReport deliver(BridgeMessage const& message, Transport& transport,
                       RetryPolicy const& policy, Clock& clock);

// ---------------------------------------------------------------------------
// Single sign-on
// ---------------------------------------------------------------------------

inline constexpr std::chrono::hours kDefaultSsoTtl{24};

struct SsoClaims {
  std::string email;
  std::string document_id;
  RoleKind role = RoleKind::kReviewer;  // document-side role
  Timestamp issued_at = 0;
  Timestamp expires_at = 0;
  std::string nonce;  // 128-bit, hex

  friend bool operator==(SsoClaims const&, SsoClaims const&) = default;
};

struct SsoToken {
  SsoClaims claims;
  std::string signature;

  /// hex(canonical claims) "." hex(HMAC)
  std::string encode() const;
  /// Throws BadSignature for anything that is not a well-formed token.
  static SsoToken decode(std::string_view text);
};

/// Mints a one-time login token. `review_role` is the recipient's role on the
/// review service and is mapped to its document-side counterpart; anything
/// that has no counterpart throws BadRole.
SsoToken make_sso_token(std::string_view secret, std::string const& email,
                        std::string const& document_id, RoleKind review_role,
                        std::chrono::milliseconds ttl, Clock const& clock,
                        std::mt19937_64& rng);

/// Checks only the signature; expiry and replay are the consumer's job.
bool verify_sso_token(std::string_view secret, SsoToken const& token);

bool sso_expired(SsoClaims const& claims, Timestamp now);

}  // namespace revbridge::bridge
