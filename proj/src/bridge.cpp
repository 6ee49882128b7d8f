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

#include "revbridge/bridge.hpp"

#include <algorithm>
#include <array>

#include "revbridge/crypto.hpp"
#include "revbridge/permissions.hpp"

namespace revbridge::bridge {
namespace {

struct KindInfo {
  MessageKind kind;
  std::string_view name;
  std::string_view path;
  std::array<std::string_view, 4> identifying;
};

constexpr std::array<KindInfo, 4> kKinds{{
    {MessageKind::kSubmitDocument, "SubmitDocument", "/bridge/submissions",
     {"document_id", "journal_id", "corresponding_author_email", ""}},
    {MessageKind::kResubmission, "Resubmission", "/bridge/resubmissions",
     {"submission_id", "round_index", "", ""}},
    {MessageKind::kReviewerAssigned, "ReviewerAssigned", "/bridge/accounts",
     {"submission_id", "document_id", "round_index", "email"}},
    {MessageKind::kDecisionRelayed, "DecisionRelayed", "/bridge/decisions",
     {"submission_id", "document_id", "round_index", ""}},
}};

KindInfo const& info(MessageKind kind) {
  for (auto const& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw Error(ErrorCode::kBadRequest, "unknown message kind");
}

bool is_duplicate_ack(std::string const& body) {
  auto const j = Json::parse(body, nullptr, false);
  return j.is_object() && j.value("duplicate", false);
}

}  // namespace

std::string_view to_string(MessageKind kind) { return info(kind).name; }

MessageKind message_kind_from_string(std::string_view name) {
  for (auto const& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  throw Error(ErrorCode::kBadRequest, "unknown message kind '" + std::string(name) + "'");
}

std::string_view endpoint_path(MessageKind kind) { return info(kind).path; }

std::string idempotency_key(MessageKind kind, Json const& payload) {
  Json identifying = Json::object();
  for (auto field : info(kind).identifying) {
    if (field.empty()) continue;
    std::string const name(field);
    auto it = payload.is_object() ? payload.find(name) : payload.end();
    if (it == payload.end() || it->is_null() ||
        (it->is_string() && it->get<std::string>().empty())) {
      throw Error(ErrorCode::kMissingField, name);
    }
    identifying[name] = *it;
  }
  return sha256_hex(std::string(to_string(kind)) + "\n" + canonical_json(identifying));
}

std::string idempotency_key(BridgeMessage const& message) {
  return idempotency_key(message.kind, message.payload);
}

BridgeMessage make_message(MessageKind kind, Json payload, Timestamp issued_at) {
  BridgeMessage m;
  m.kind = kind;
  m.idempotency_key = idempotency_key(kind, payload);
  m.payload = std::move(payload);
  m.issued_at = issued_at;
  return m;
}

std::string canonical_body(BridgeMessage const& message) {
  return canonical_json(Json{{"idempotency_key", message.idempotency_key},
                             {"issued_at", message.issued_at},
                             {"kind", to_string(message.kind)},
                             {"payload", message.payload}});
}

BridgeMessage sign_message(std::string_view secret, BridgeMessage message) {
  if (secret.empty()) throw Error(ErrorCode::kEmptySecret, "bridge secret is empty");
  message.signature = hmac_sha256_hex(secret, canonical_body(message));
  return message;
}

bool verify_body(std::string_view secret, std::string_view body,
                 std::string_view signature) {
  if (secret.empty()) throw Error(ErrorCode::kEmptySecret, "bridge secret is empty");
  return constant_time_equal(hmac_sha256_hex(secret, body), signature);
}

bool verify_message(std::string_view secret, BridgeMessage const& message) {
  return verify_body(secret, canonical_body(message), message.signature);
}

WireRequest to_wire(BridgeMessage const& message) {
  return WireRequest{std::string(endpoint_path(message.kind)), canonical_body(message),
                     message.signature, message.idempotency_key};
}

BridgeMessage parse_wire(std::string_view secret, WireRequest const& request,
                         MessageKind expected) {
  if (!verify_body(secret, request.body, request.signature)) {
    throw Error(ErrorCode::kBadSignature, "bridge signature mismatch");
  }
  auto const j = Json::parse(request.body, nullptr, false);
  if (!j.is_object()) throw Error(ErrorCode::kBadRequest, "bridge body is not a JSON object");
  BridgeMessage m;
  try {
    m.kind = message_kind_from_string(j.at("kind").get<std::string>());
    m.idempotency_key = j.at("idempotency_key").get<std::string>();
    m.issued_at = j.at("issued_at").get<Timestamp>();
    m.payload = j.at("payload");
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kBadRequest, e.what());
  }
  m.signature = request.signature;
  if (m.kind != expected) {
    throw Error(ErrorCode::kBadRequest, "unexpected message kind " +
                                            std::string(to_string(m.kind)));
  }
  if (m.idempotency_key != idempotency_key(m) ||
      (!request.idempotency_key.empty() && request.idempotency_key != m.idempotency_key)) {
    throw Error(ErrorCode::kBadRequest, "idempotency key does not match payload");
  }
  return m;
}

// --- Delivery ---------------------------------------------------------------

std::chrono::milliseconds RetryPolicy::backoff_after(int attempt) const {
  auto delay = initial_backoff;
  for (int i = 1; i < attempt && delay < max_backoff; ++i) delay *= 2;
  return std::min(delay, max_backoff);
}

std::string_view to_string(DeliveryReport::Outcome outcome) {
  switch (outcome) {
    case DeliveryReport::Outcome::kDelivered: return "Delivered";
    case DeliveryReport::Outcome::kDuplicate: return "Duplicate";
    case DeliveryReport::Outcome::kProtocolError: return "ProtocolError";
    case DeliveryReport::Outcome::kExhausted: return "DeliveryExhausted";
  }
  return "?";
}

Json DeliveryReport::response_json() const {
  return Json::parse(response_body, nullptr, false);
}

void DeliveryReport::raise_if_failed() const {
  if (ok()) return;
  if (outcome == Outcome::kExhausted) {
    throw Error(ErrorCode::kDeliveryExhausted,
                std::to_string(attempts) + " attempts for " + std::string(to_string(kind)));
  }
  auto const body = response_json();
  std::string detail = body.is_object() ? body.value("message", response_body) : response_body;
  throw Error(remote_error.value_or(ErrorCode::kProtocolError), detail);
}

Json to_json(DeliveryReport const& report) {
  Json backoffs = Json::array();
  for (auto b : report.backoffs) backoffs.push_back(b.count());
  return Json{{"kind", to_string(report.kind)},
              {"idempotency_key", report.idempotency_key},
              {"attempts", report.attempts},
              {"backoffs_ms", backoffs},
              {"outcome", to_string(report.outcome)},
              {"last_status", report.last_status}};
}

DeliveryReport deliver(BridgeMessage const& message, Transport& transport,
                       RetryPolicy const& policy, Clock& clock) {
  if (message.signature.empty()) {
    throw Error(ErrorCode::kBadRequest, "refusing to deliver an unsigned message");
  }
  DeliveryReport report;
  report.kind = message.kind;
  report.idempotency_key = message.idempotency_key;
  auto const wire = to_wire(message);

  for (int attempt = 1; attempt <= std::max(1, policy.max_attempts); ++attempt) {
    report.attempts = attempt;
    WireResponse response;
    try {
      response = transport.post(wire);
    } catch (std::exception const&) {
      response = WireResponse{};
    }
    report.last_status = response.status;
    report.response_body = response.body;

    if (response.status >= 200 && response.status < 300) {
      report.outcome = is_duplicate_ack(response.body) ? DeliveryReport::Outcome::kDuplicate
                                                       : DeliveryReport::Outcome::kDelivered;
      return report;
    }
    if (response.status >= 400 && response.status < 500) {
      report.outcome = DeliveryReport::Outcome::kProtocolError;
      auto const body = Json::parse(response.body, nullptr, false);
      if (body.is_object() && body.contains("error") && body["error"].is_string()) {
        report.remote_error = error_code_from_string(body["error"].get<std::string>());
      }
      return report;
    }
    if (attempt < policy.max_attempts) {
      auto const wait = policy.backoff_after(attempt);
      report.backoffs.push_back(wait);
      clock.sleep_for(wait);
    }
  }
  report.outcome = DeliveryReport::Outcome::kExhausted;
  return report;
}

// --- SSO --------------------------------------------------------------------

namespace {

std::string claims_bytes(SsoClaims const& c) {
  return canonical_json(Json{{"document_id", c.document_id},
                             {"email", c.email},
                             {"expires_at", c.expires_at},
                             {"issued_at", c.issued_at},
                             {"nonce", c.nonce},
                             {"role", to_string(c.role)}});
}

}  // namespace

std::string SsoToken::encode() const {
  return to_hex(claims_bytes(claims)) + "." + signature;
}

SsoToken SsoToken::decode(std::string_view text) {
  auto const dot = text.find('.');
  std::string raw;
  if (dot == std::string_view::npos || !from_hex(text.substr(0, dot), raw)) {
    throw Error(ErrorCode::kBadSignature, "malformed token");
  }
  auto const j = Json::parse(raw, nullptr, false);
  SsoToken token;
  try {
    token.claims.email = j.at("email").get<std::string>();
    token.claims.document_id = j.at("document_id").get<std::string>();
    token.claims.role = role_from_string(j.at("role").get<std::string>());
    token.claims.issued_at = j.at("issued_at").get<Timestamp>();
    token.claims.expires_at = j.at("expires_at").get<Timestamp>();
    token.claims.nonce = j.at("nonce").get<std::string>();
  } catch (std::exception const&) {
    throw Error(ErrorCode::kBadSignature, "malformed token claims");
  }
  // Re-encoding must reproduce the exact bytes that were signed.
  if (claims_bytes(token.claims) != raw) {
    throw Error(ErrorCode::kBadSignature, "non-canonical token claims");
  }
  token.signature = std::string(text.substr(dot + 1));
  return token;
}

SsoToken make_sso_token(std::string_view secret, std::string const& email,
                        std::string const& document_id, RoleKind review_role,
                        std::chrono::milliseconds ttl, Clock const& clock,
                        std::mt19937_64& rng) {
  if (secret.empty()) throw Error(ErrorCode::kEmptySecret, "bridge secret is empty");
  RoleKind doc_role;
  try {
    doc_role = map_role(ServiceSide::kReviewService, review_role);
  } catch (Error const&) {
    throw Error(ErrorCode::kBadRole, "no document-side counterpart");
  }
  SsoToken token;
  token.claims.email = normalize_email(email);
  token.claims.document_id = document_id;
  token.claims.role = doc_role;
  token.claims.issued_at = clock.now();
  token.claims.expires_at = token.claims.issued_at + ttl.count();
  token.claims.nonce = random_hex128(rng);
  token.signature = hmac_sha256_hex(secret, claims_bytes(token.claims));
  return token;
}

bool verify_sso_token(std::string_view secret, SsoToken const& token) {
  if (secret.empty()) throw Error(ErrorCode::kEmptySecret, "bridge secret is empty");
  return constant_time_equal(hmac_sha256_hex(secret, claims_bytes(token.claims)),
                             token.signature);
}

bool sso_expired(SsoClaims const& claims, Timestamp now) {
  return now >= claims.expires_at;
}

}  // namespace revbridge::bridge
