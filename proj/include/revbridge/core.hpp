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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "revbridge/clock.hpp"

namespace revbridge {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Identity and roles
// ---------------------------------------------------------------------------

/// Trims and lowercases; throws BadRequest when the result is not shaped
/// like `local@domain`.
std::string normalize_email(std::string_view raw);

struct UserIdentity {
  std::string user_id;
  std::string email;         // normalized; the cross-service join key
  std::string display_name;  // non-empty

  friend bool operator==(UserIdentity const&, UserIdentity const&) = default;
};

/// Review-service roles are {Author, Reviewer, Editor}; document-service
/// roles are {Author, Reviewer, Admin}.
enum class RoleKind { kAuthor, kReviewer, kEditor, kAdmin };

std::string_view to_string(RoleKind role);
/// Throws UnknownRole for names outside the enumeration.
RoleKind role_from_string(std::string_view name);
bool is_editorial(RoleKind role);  // Editor or Admin

struct RoleGrant {
  std::string user_id;
  std::string document_id;
  RoleKind role = RoleKind::kAuthor;
  Timestamp granted_at = 0;

  friend bool operator==(RoleGrant const&, RoleGrant const&) = default;
};

// ---------------------------------------------------------------------------
// Submission lifecycle
// ---------------------------------------------------------------------------

enum class DecisionKind { kAccept, kReject, kRequestRevision };

std::string_view to_string(DecisionKind kind);
DecisionKind decision_from_string(std::string_view name);

struct EditorDecision {
  DecisionKind kind = DecisionKind::kAccept;
  std::string rationale;

  friend bool operator==(EditorDecision const&, EditorDecision const&) = default;
};

enum class SubmissionPhase {
  kDraft,
  kSubmitted,
  kUnderReview,
  kRevising,
  kAccepted,
  kRejected,
};

/// `round_index` is the most recently opened round (0 before the first).
/// Submitted keeps the prior round so the next OpenRound can number itself.
struct SubmissionState {
  SubmissionPhase phase = SubmissionPhase::kDraft;
  int round_index = 0;

  static SubmissionState draft() { return {}; }
  static SubmissionState submitted(int prior_round = 0) {
    return {SubmissionPhase::kSubmitted, prior_round};
  }
  static SubmissionState under_review(int round) {
    return {SubmissionPhase::kUnderReview, round};
  }
  static SubmissionState revising(int round) {
    return {SubmissionPhase::kRevising, round};
  }
  static SubmissionState accepted(int round) {
    return {SubmissionPhase::kAccepted, round};
  }
  static SubmissionState rejected(int round) {
    return {SubmissionPhase::kRejected, round};
  }

  bool terminal() const {
    return phase == SubmissionPhase::kAccepted ||
           phase == SubmissionPhase::kRejected;
  }

  friend bool operator==(SubmissionState const&, SubmissionState const&) = default;
};

/// "UnderReview(2)", "Revising(1)", "Submitted", ...
std::string to_string(SubmissionState const& state);
std::string_view to_string(SubmissionPhase phase);

struct SubmissionEvent {
  enum class Kind { kSubmit, kOpenRound, kDecide, kResubmit };

  Kind kind = Kind::kSubmit;
  std::optional<EditorDecision> decision;  // set iff kind == kDecide

  static SubmissionEvent submit() { return {Kind::kSubmit, std::nullopt}; }
  static SubmissionEvent open_round() { return {Kind::kOpenRound, std::nullopt}; }
  static SubmissionEvent resubmit() { return {Kind::kResubmit, std::nullopt}; }
  static SubmissionEvent decide(EditorDecision d) {
    return {Kind::kDecide, std::move(d)};
  }
};

std::string_view to_string(SubmissionEvent::Kind kind);

/// Total transition function; throws IllegalTransition for every pair not in
/// the legal-transition table.
SubmissionState advance_submission(SubmissionState const& current,
                                   SubmissionEvent const& event);

// ---------------------------------------------------------------------------
// Reviewer assignments
// ---------------------------------------------------------------------------

enum class AssignmentState { kInvited, kAccepted, kDeclined, kSubmitted };
enum class AssignmentEvent { kAccept, kDecline, kSubmitReview };

std::string_view to_string(AssignmentState state);
AssignmentState assignment_state_from_string(std::string_view name);

/// Throws IllegalTransition, or MissingFeedback when a legal SubmitReview
/// carries blank feedback.
AssignmentState advance_assignment(AssignmentState current,
                                   AssignmentEvent event,
                                   std::string_view feedback = {});

struct ReviewAssignment {
  std::string assignment_id;
  std::string submission_id;
  int round_index = 1;
  UserIdentity reviewer;
  int reviewer_number = 1;  // order within the round, for masking
  AssignmentState state = AssignmentState::kInvited;
  std::optional<std::string> general_feedback;    // iff Submitted
  std::optional<DecisionKind> recommendation;     // iff Submitted
};

struct ReviewRound {
  int round_index = 1;
  std::vector<ReviewAssignment> assignments;
  Timestamp opened_at = 0;
  std::string snapshot_hash;
  std::optional<EditorDecision> closed_by;

  bool open() const { return !closed_by.has_value(); }
};

/// Editors may decide on any open round, even with zero submitted reviews.
/// Returns false for closed rounds so callers can flag the misuse.
bool decision_allowed(ReviewRound const& round);

// JSON mapping (used by persistence, HTTP bodies and harness reports).
void to_json(Json& j, UserIdentity const& u);
void from_json(Json const& j, UserIdentity& u);
void to_json(Json& j, RoleGrant const& g);
void from_json(Json const& j, RoleGrant& g);
void to_json(Json& j, EditorDecision const& d);
void from_json(Json const& j, EditorDecision& d);
void to_json(Json& j, SubmissionState const& s);
void from_json(Json const& j, SubmissionState& s);
void to_json(Json& j, ReviewAssignment const& a);
void from_json(Json const& j, ReviewAssignment& a);
void to_json(Json& j, ReviewRound const& r);
void from_json(Json const& j, ReviewRound& r);

}  // namespace revbridge
