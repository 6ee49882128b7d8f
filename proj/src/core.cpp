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

#include "revbridge/core.hpp"

#include <algorithm>
#include <cctype>

#include "revbridge/error.hpp"

namespace revbridge {

std::string normalize_email(std::string_view raw) {
  auto const is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
  while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);

  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  auto const at = out.find('@');
  bool const shaped = at != std::string::npos && at > 0 &&
                      at + 1 < out.size() &&
                      out.find('@', at + 1) == std::string::npos &&
                      std::none_of(out.begin(), out.end(), is_space);
  if (!shaped) throw Error(ErrorCode::kBadRequest, "malformed email '" + out + "'");
  return out;
}

std::string_view to_string(RoleKind role) {
  switch (role) {
    case RoleKind::kAuthor: return "Author";
    case RoleKind::kReviewer: return "Reviewer";
    case RoleKind::kEditor: return "Editor";
    case RoleKind::kAdmin: return "Admin";
  }
  throw Error(ErrorCode::kUnknownRole, "role value out of range");
}

RoleKind role_from_string(std::string_view name) {
  if (name == "Author") return RoleKind::kAuthor;
  if (name == "Reviewer") return RoleKind::kReviewer;
  if (name == "Editor") return RoleKind::kEditor;
  if (name == "Admin") return RoleKind::kAdmin;
  throw Error(ErrorCode::kUnknownRole, std::string(name));
}

bool is_editorial(RoleKind role) {
  return role == RoleKind::kEditor || role == RoleKind::kAdmin;
}

std::string_view to_string(DecisionKind kind) {
  switch (kind) {
    case DecisionKind::kAccept: return "Accept";
    case DecisionKind::kReject: return "Reject";
    case DecisionKind::kRequestRevision: return "RequestRevision";
  }
  return "?";
}

DecisionKind decision_from_string(std::string_view name) {
  if (name == "Accept") return DecisionKind::kAccept;
  if (name == "Reject") return DecisionKind::kReject;
  if (name == "RequestRevision") return DecisionKind::kRequestRevision;
  throw Error(ErrorCode::kBadRequest, "unknown decision '" + std::string(name) + "'");
}

std::string_view to_string(SubmissionPhase phase) {
  switch (phase) {
    case SubmissionPhase::kDraft: return "Draft";
    case SubmissionPhase::kSubmitted: return "Submitted";
    case SubmissionPhase::kUnderReview: return "UnderReview";
    case SubmissionPhase::kRevising: return "Revising";
    case SubmissionPhase::kAccepted: return "Accepted";
    case SubmissionPhase::kRejected: return "Rejected";
  }
  return "?";
}

std::string to_string(SubmissionState const& state) {
  std::string out(to_string(state.phase));
  if (state.phase == SubmissionPhase::kUnderReview ||
      state.phase == SubmissionPhase::kRevising) {
    out += "(" + std::to_string(state.round_index) + ")";
  }
  return out;
}

std::string_view to_string(SubmissionEvent::Kind kind) {
  switch (kind) {
    case SubmissionEvent::Kind::kSubmit: return "Submit";
    case SubmissionEvent::Kind::kOpenRound: return "OpenRound";
    case SubmissionEvent::Kind::kDecide: return "Decide";
    case SubmissionEvent::Kind::kResubmit: return "Resubmit";
  }
  return "?";
}

SubmissionState advance_submission(SubmissionState const& current,
                                   SubmissionEvent const& event) {
  using Phase = SubmissionPhase;
  using Kind = SubmissionEvent::Kind;
  switch (current.phase) {
    case Phase::kDraft:
      if (event.kind == Kind::kSubmit) return SubmissionState::submitted(0);
      break;
    case Phase::kSubmitted:
      if (event.kind == Kind::kOpenRound) {
        return SubmissionState::under_review(current.round_index + 1);
      }
      break;
    case Phase::kUnderReview:
      if (event.kind == Kind::kDecide && event.decision) {
        switch (event.decision->kind) {
          case DecisionKind::kAccept:
            return SubmissionState::accepted(current.round_index);
          case DecisionKind::kReject:
            return SubmissionState::rejected(current.round_index);
          case DecisionKind::kRequestRevision:
            return SubmissionState::revising(current.round_index);
        }
      }
      break;
    case Phase::kRevising:
      if (event.kind == Kind::kResubmit) {
        return SubmissionState::submitted(current.round_index);
      }
      break;
    case Phase::kAccepted:
    case Phase::kRejected:
      break;
  }
  throw Error(ErrorCode::kIllegalTransition,
              std::string(to_string(event.kind)) + " on " + to_string(current));
}

std::string_view to_string(AssignmentState state) {
  switch (state) {
    case AssignmentState::kInvited: return "Invited";
    case AssignmentState::kAccepted: return "Accepted";
    case AssignmentState::kDeclined: return "Declined";
    case AssignmentState::kSubmitted: return "Submitted";
  }
  return "?";
}

AssignmentState assignment_state_from_string(std::string_view name) {
  if (name == "Invited") return AssignmentState::kInvited;
  if (name == "Accepted") return AssignmentState::kAccepted;
  if (name == "Declined") return AssignmentState::kDeclined;
  if (name == "Submitted") return AssignmentState::kSubmitted;
  throw Error(ErrorCode::kBadRequest, "unknown assignment state");
}

AssignmentState advance_assignment(AssignmentState current,
                                   AssignmentEvent event,
                                   std::string_view feedback) {
  if (current == AssignmentState::kInvited && event == AssignmentEvent::kAccept) {
    return AssignmentState::kAccepted;
  }
  if (current == AssignmentState::kInvited && event == AssignmentEvent::kDecline) {
    return AssignmentState::kDeclined;
  }
  if (current == AssignmentState::kAccepted &&
      event == AssignmentEvent::kSubmitReview) {
    bool const blank = std::all_of(feedback.begin(), feedback.end(), [](unsigned char c) {
      return std::isspace(c) != 0;
    });
    if (blank) throw Error(ErrorCode::kMissingFeedback, "general feedback is empty");
    return AssignmentState::kSubmitted;
  }
  throw Error(ErrorCode::kIllegalTransition,
              "assignment event on " + std::string(to_string(current)));
}

bool decision_allowed(ReviewRound const& round) { return round.open(); }

// --- JSON -------------------------------------------------------------------

void to_json(Json& j, UserIdentity const& u) {
  j = Json{{"user_id", u.user_id}, {"email", u.email}, {"display_name", u.display_name}};
}
void from_json(Json const& j, UserIdentity& u) {
  j.at("user_id").get_to(u.user_id);
  j.at("email").get_to(u.email);
  j.at("display_name").get_to(u.display_name);
}

void to_json(Json& j, RoleGrant const& g) {
  j = Json{{"user_id", g.user_id},
           {"document_id", g.document_id},
           {"role", to_string(g.role)},
           {"granted_at", g.granted_at}};
}
void from_json(Json const& j, RoleGrant& g) {
  j.at("user_id").get_to(g.user_id);
  j.at("document_id").get_to(g.document_id);
  g.role = role_from_string(j.at("role").get<std::string>());
  j.at("granted_at").get_to(g.granted_at);
}

void to_json(Json& j, EditorDecision const& d) {
  j = Json{{"decision", to_string(d.kind)}, {"rationale", d.rationale}};
}
void from_json(Json const& j, EditorDecision& d) {
  d.kind = decision_from_string(j.at("decision").get<std::string>());
  d.rationale = j.value("rationale", "");
}

void to_json(Json& j, SubmissionState const& s) {
  j = Json{{"phase", to_string(s.phase)}, {"round", s.round_index}};
}
void from_json(Json const& j, SubmissionState& s) {
  auto const phase = j.at("phase").get<std::string>();
  static constexpr SubmissionPhase kAll[] = {
      SubmissionPhase::kDraft,    SubmissionPhase::kSubmitted,
      SubmissionPhase::kUnderReview, SubmissionPhase::kRevising,
      SubmissionPhase::kAccepted, SubmissionPhase::kRejected};
  auto it = std::find_if(std::begin(kAll), std::end(kAll),
                         [&](SubmissionPhase p) { return to_string(p) == phase; });
  if (it == std::end(kAll)) throw Error(ErrorCode::kBadRequest, "unknown phase " + phase);
  s.phase = *it;
  j.at("round").get_to(s.round_index);
}

void to_json(Json& j, ReviewAssignment const& a) {
  j = Json{{"assignment_id", a.assignment_id},
           {"submission_id", a.submission_id},
           {"round_index", a.round_index},
           {"reviewer", a.reviewer},
           {"reviewer_number", a.reviewer_number},
           {"state", to_string(a.state)}};
  j["general_feedback"] = a.general_feedback ? Json(*a.general_feedback) : Json();
  j["recommendation"] =
      a.recommendation ? Json(to_string(*a.recommendation)) : Json();
}
void from_json(Json const& j, ReviewAssignment& a) {
  j.at("assignment_id").get_to(a.assignment_id);
  j.at("submission_id").get_to(a.submission_id);
  j.at("round_index").get_to(a.round_index);
  j.at("reviewer").get_to(a.reviewer);
  j.at("reviewer_number").get_to(a.reviewer_number);
  a.state = assignment_state_from_string(j.at("state").get<std::string>());
  if (auto f = j.find("general_feedback"); f != j.end() && !f->is_null()) {
    a.general_feedback = f->get<std::string>();
  }
  if (auto r = j.find("recommendation"); r != j.end() && !r->is_null()) {
    a.recommendation = decision_from_string(r->get<std::string>());
  }
}

void to_json(Json& j, ReviewRound const& r) {
  j = Json{{"round_index", r.round_index},
           {"assignments", r.assignments},
           {"opened_at", r.opened_at},
           {"snapshot_hash", r.snapshot_hash}};
  j["closed_by"] = r.closed_by ? Json(*r.closed_by) : Json();
}
void from_json(Json const& j, ReviewRound& r) {
  j.at("round_index").get_to(r.round_index);
  j.at("assignments").get_to(r.assignments);
  j.at("opened_at").get_to(r.opened_at);
  j.at("snapshot_hash").get_to(r.snapshot_hash);
  if (auto c = j.find("closed_by"); c != j.end() && !c->is_null()) {
    r.closed_by = c->get<EditorDecision>();
  }
}

}  // namespace revbridge
