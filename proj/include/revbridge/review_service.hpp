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
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "revbridge/bridge.hpp"
#include "revbridge/clock.hpp"
#include "revbridge/config.hpp"
#include "revbridge/core.hpp"
#include "revbridge/event_log.hpp"

namespace revbridge {

struct ReviewServiceOptions {
  std::string bridge_secret;
  std::vector<JournalConfig> journals;
  std::optional<std::uint64_t> seed;
  std::filesystem::path state_file;
  bridge::RetryPolicy retry;
  std::string doc_base_url = "http://localhost:8081";  // for SSO links
  std::chrono::milliseconds sso_ttl = bridge::kDefaultSsoTtl;
};

struct Submission {
  std::string submission_id;
  std::string journal_id;
  std::string remote_document_id;
  std::string title;
  UserIdentity corresponding_author;
  std::vector<std::string> co_author_emails;
  SubmissionState state;
  std::vector<ReviewRound> rounds;
  std::string pending_snapshot_hash;  // pinned to the next round opened
  Timestamp created_at = 0;

  ReviewRound* current_round();
  ReviewRound const* current_round() const;
};

struct OutboxMessage {
  enum class Kind { kReviewerInvited, kFeedbackToAuthors, kDecisionNotice };

  std::string message_id;
  Kind kind = Kind::kDecisionNotice;
  std::string recipient_email;
  std::string subject;
  std::string body;
  std::string submission_id;
  std::string sso_token;  // ReviewerInvited only
  Timestamp created_at = 0;
};

std::string_view to_string(OutboxMessage::Kind kind);

struct JournalSummary {
  std::string journal_id;
  std::string name;
  BlindMode blind_mode = BlindMode::kOpen;
};

/// Assignment plus the outcome of telling the document service about it.
struct AssignResult {
  ReviewAssignment assignment;
  std::optional<bridge::DeliveryReport> delivery;
};

struct DecisionResult {
  Submission submission;
  std::optional<bridge::DeliveryReport> delivery;
};

void to_json(Json& j, Submission const& s);
void from_json(Json const& j, Submission& s);
void to_json(Json& j, OutboxMessage const& m);
void from_json(Json const& j, OutboxMessage& m);
void to_json(Json& j, JournalSummary const& s);

/// The editorial-side service: journals, submissions, rounds, reviewer
/// assignment, decisions, the email outbox, and the review end of the bridge.
class ReviewService {
 public:
  ReviewService(ReviewServiceOptions options, Clock& clock,
                bridge::Transport* doc_transport = nullptr);

  ReviewService(ReviewService const&) = delete;
  ReviewService& operator=(ReviewService const&) = delete;

  void set_doc_transport(bridge::Transport* transport);

  /// Sorted by journal_id.
  std::vector<JournalSummary> list_journals() const;
  bool is_editor(std::string const& email, std::string const& journal_id) const;
  BlindMode blind_mode(std::string const& journal_id) const;

  /// Password-less local login; returns the normalized email for the token.
  std::string open_session(std::string const& email);
  std::optional<std::string> session_email(std::string const& token) const;

  // Inbound bridge.
  Json register_submission(bridge::WireRequest const& request);
  Json receive_resubmission(bridge::WireRequest const& request);

  // Editorial workflow; actors are identified by email.
  AssignResult assign_reviewer(std::string const& editor_email,
                               std::string const& submission_id,
                               std::string const& reviewer_email,
                               std::string const& reviewer_name = {});
  ReviewAssignment respond_invitation(std::string const& reviewer_email,
                                      std::string const& submission_id, bool accept);
  ReviewAssignment submit_review(std::string const& reviewer_email,
                                 std::string const& submission_id,
                                 std::string const& general_feedback,
                                 std::optional<DecisionKind> recommendation);
  DecisionResult record_decision(std::string const& editor_email,
                                 std::string const& submission_id,
                                 EditorDecision const& decision);
  Submission open_round(std::string const& editor_email, std::string const& submission_id);

  Submission submission(std::string const& submission_id) const;
  std::vector<Submission> submissions() const;

  /// Pending messages in creation order; marks them read.
  std::vector<OutboxMessage> drain_outbox();
  std::vector<OutboxMessage> outbox_history() const;

  /// Retries bridge messages whose delivery previously failed.
  std::vector<bridge::DeliveryReport> flush_pending();
  std::size_t pending_count() const;

  std::size_t account_count() const;
  std::optional<UserIdentity> find_account(std::string const& email) const;
  std::vector<EventRecord> events() const { return events_.records(); }

  Json state_json() const;
  void load_state(Json const& state);

 private:
  JournalConfig const& journal_locked(std::string const& journal_id) const;
  Submission& submission_locked(std::string const& submission_id);
  void require_editor_locked(std::string const& email, Submission const& s) const;
  UserIdentity const& find_or_create_account_locked(std::string const& email,
                                                    std::string const& name,
                                                    std::string const& actor);
  ReviewAssignment& assignment_locked(Submission& s, std::string const& reviewer_email);
  void open_round_locked(Submission& s, std::string const& actor);
  void push_outbox_locked(OutboxMessage message);
  std::string next_id(char const* prefix);
  bridge::BridgeMessage sign(bridge::MessageKind kind, Json payload) const;
  std::optional<bridge::DeliveryReport> send(bridge::BridgeMessage const& message);
  Json state_json_locked() const;
  void persist_locked() const;

  ReviewServiceOptions options_;
  Clock& clock_;
  bridge::Transport* doc_transport_;

  mutable std::mutex mu_;
  std::mt19937_64 rng_;
  std::map<std::string, std::uint64_t> id_counters_;
  std::map<std::string, UserIdentity> accounts_;  // by email
  std::map<std::string, Submission> submissions_;
  std::vector<OutboxMessage> outbox_;
  std::size_t outbox_read_ = 0;
  std::map<std::string, Json> processed_;
  std::map<std::string, std::string> sessions_;  // token -> email
  std::deque<bridge::BridgeMessage> pending_;
  EventLog events_;
};

}  // namespace revbridge
