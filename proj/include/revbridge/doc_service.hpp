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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "revbridge/bridge.hpp"
#include "revbridge/clock.hpp"
#include "revbridge/config.hpp"
#include "revbridge/event_log.hpp"
#include "revbridge/manuscript.hpp"
#include "revbridge/permissions.hpp"

namespace revbridge {

struct DocServiceOptions {
  std::string bridge_secret;
  std::vector<JournalConfig> journals;
  std::optional<std::uint64_t> seed;  // unset: seeded from std::random_device
  std::filesystem::path state_file;   // empty: in-memory only
  bridge::RetryPolicy retry;
};

/// Who is looking. SSO sessions are scoped to one document.
struct Viewer {
  std::string user_id;
  std::optional<std::string> scope_document;
};

struct DocSession {
  std::string token;
  Viewer viewer;
  std::optional<RoleKind> role;  // claimed role for SSO sessions
};

/// Review-side status as relayed by the bridge; absent until submitted.
struct ReviewStatus {
  std::string journal_id;
  std::string submission_id;
  SubmissionState state;
  std::optional<DecisionKind> last_decision;
};

struct CommentView {
  Comment comment;
  std::string author_name;  // after blind-mode masking
};

struct DocumentView {
  Manuscript manuscript;
  RoleKind viewer_role = RoleKind::kAuthor;
  BlindMode blind_mode = BlindMode::kOpen;
  std::vector<CommentView> comments;
  std::optional<ReviewStatus> status;
};

struct DocumentListing {
  std::string document_id;
  std::string title;
  RoleKind role = RoleKind::kAuthor;
  std::uint64_t revision = 0;
  std::optional<ReviewStatus> status;
};

struct SubmitResult {
  std::string submission_id;
  std::string snapshot_hash;
  SubmissionState state;
  bridge::DeliveryReport delivery;
};

void to_json(Json& j, ReviewStatus const& s);
void from_json(Json const& j, ReviewStatus& s);
void to_json(Json& j, Manuscript const& m);
void to_json(Json& j, DocumentView const& v);
void to_json(Json& j, DocumentListing const& l);

/// The authoring-side service: manuscripts as semantic blocks, anchored
/// comments, per-document roles, and the document end of the bridge.
///
/// All state lives behind one reader/writer lock; outbound bridge calls are
/// made with the lock released.
class DocService {
 public:
  DocService(DocServiceOptions options, Clock& clock,
             bridge::Transport* review_transport = nullptr);

  DocService(DocService const&) = delete;
  DocService& operator=(DocService const&) = delete;

  void set_review_transport(bridge::Transport* transport);

  // Accounts and sessions.
  UserIdentity register_user(std::string const& email, std::string const& display_name);
  std::optional<UserIdentity> find_user(std::string const& email) const;
  std::optional<UserIdentity> user(std::string const& user_id) const;
  /// Password-less local login (development/test deployments only).
  DocSession open_session(std::string const& email);
  std::optional<DocSession> session(std::string const& token) const;

  // Authoring.
  Manuscript create_document(std::string const& owner_id, std::string const& title);
  RoleGrant invite_collaborator(std::string const& actor_id, std::string const& document_id,
                                std::string const& invitee_email,
                                std::string const& invitee_name = {});
  Manuscript apply_edit(std::string const& actor_id, std::string const& document_id,
                        std::uint64_t base_revision, std::vector<BlockOp> const& ops);
  Comment add_comment(std::string const& actor_id, std::string const& document_id,
                      Anchor const& anchor, std::string const& body,
                      std::optional<Audience> audience = std::nullopt);
  Comment approve_comment(std::string const& actor_id, std::string const& document_id,
                          std::string const& comment_id);
  DocumentView get_document(Viewer const& viewer, std::string const& document_id) const;
  std::vector<DocumentListing> list_documents(std::string const& user_id) const;
  Snapshot export_snapshot(std::string const& document_id) const;
  Manuscript import_manuscript(std::string const& owner_id, std::string_view canonical_bytes);

  // Outbound bridge.
  SubmitResult submit_document(std::string const& actor_id, std::string const& document_id,
                               std::string const& journal_id);
  SubmitResult resubmit_document(std::string const& actor_id,
                                 std::string const& document_id);

  // Inbound bridge. Each returns the acknowledgement body; replays of an
  // already-processed idempotency key return the original body plus
  // "duplicate": true and change nothing.
  Json ensure_account(bridge::WireRequest const& request);
  Json relay_decision(bridge::WireRequest const& request);
  DocSession consume_sso_token(std::string const& token);

  std::optional<RoleKind> role_of(std::string const& user_id,
                                  std::string const& document_id) const;
  std::vector<Comment> comments(std::string const& document_id) const;
  std::vector<EventRecord> events() const { return events_.records(); }
  std::size_t account_count() const;

  /// Full persistent state (accounts, documents, grants, comments, spent
  /// nonces, idempotency keys, event log). Sessions are not included.
  Json state_json() const;
  void load_state(Json const& state);

 private:
  struct DocumentRecord {
    Manuscript manuscript;
    std::optional<ReviewStatus> status;
    BlindMode blind_mode = BlindMode::kOpen;
    std::map<std::string, int> reviewer_numbers;  // user_id -> number
  };

  UserIdentity& find_or_create_user_locked(std::string const& email,
                                           std::string const& display_name,
                                           bool* created);
  UserIdentity* find_user_locked(std::string const& email);
  DocumentRecord& document_locked(std::string const& document_id);
  DocumentRecord const& document_locked(std::string const& document_id) const;
  JournalConfig const& journal(std::string const& journal_id) const;
  std::string next_id(char const* prefix);
  Json state_json_locked() const;
  void persist_locked() const;
  SubmitResult deliver_submission(bridge::BridgeMessage const& message);

  DocServiceOptions options_;
  Clock& clock_;
  bridge::Transport* review_transport_;

  mutable std::shared_mutex mu_;
  std::mt19937_64 rng_;
  std::map<std::string, std::uint64_t> id_counters_;
  std::map<std::string, UserIdentity> users_;        // by user_id
  std::map<std::string, std::string> users_by_email_;
  std::map<std::string, DocumentRecord> documents_;
  std::map<std::string, std::vector<Comment>> comments_;  // by document_id
  GrantStore grants_;
  std::set<std::string> spent_nonces_;
  std::map<std::string, Json> processed_;  // idempotency key -> ack
  std::map<std::string, DocSession> sessions_;
  EventLog events_;
};

}  // namespace revbridge
