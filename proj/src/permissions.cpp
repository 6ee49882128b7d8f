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

#include "revbridge/permissions.hpp"

#include <mutex>

#include "revbridge/error.hpp"

namespace revbridge {

std::string_view to_string(ServiceSide side) {
  return side == ServiceSide::kDocumentService ? "DocumentService" : "ReviewService";
}

std::string_view to_string(VisibilityState state) {
  return state == VisibilityState::kPending ? "Pending" : "Approved";
}

std::string_view to_string(BlindMode mode) {
  switch (mode) {
    case BlindMode::kOpen: return "Open";
    case BlindMode::kSingleBlind: return "SingleBlind";
    case BlindMode::kDoubleBlind: return "DoubleBlind";
  }
  return "?";
}

BlindMode blind_mode_from_string(std::string_view name) {
  if (name == "Open") return BlindMode::kOpen;
  if (name == "SingleBlind") return BlindMode::kSingleBlind;
  if (name == "DoubleBlind") return BlindMode::kDoubleBlind;
  throw Error(ErrorCode::kBadRequest, "unknown blind mode '" + std::string(name) + "'");
}

void to_json(Json& j, Audience const& a) {
  switch (a.kind) {
    case Audience::Kind::kAllParticipants: j = Json{{"kind", "AllParticipants"}}; break;
    case Audience::Kind::kAuthorsOnly: j = Json{{"kind", "AuthorsOnly"}}; break;
    case Audience::Kind::kReviewer:
      j = Json{{"kind", "Reviewer"}, {"reviewer_id", a.reviewer_id}};
      break;
  }
}

void from_json(Json const& j, Audience& a) {
  auto const kind = j.at("kind").get<std::string>();
  if (kind == "AllParticipants") {
    a = {Audience::Kind::kAllParticipants, {}};
  } else if (kind == "AuthorsOnly") {
    a = {Audience::Kind::kAuthorsOnly, {}};
  } else if (kind == "Reviewer") {
    a = {Audience::Kind::kReviewer, j.at("reviewer_id").get<std::string>()};
  } else {
    throw Error(ErrorCode::kBadRequest, "unknown audience '" + kind + "'");
  }
}

void to_json(Json& j, Anchor const& a) {
  j = Json{{"block_id", a.block_id}, {"start", a.start}, {"end", a.end}};
}

void from_json(Json const& j, Anchor& a) {
  j.at("block_id").get_to(a.block_id);
  j.at("start").get_to(a.start);
  j.at("end").get_to(a.end);
}

void to_json(Json& j, Comment const& c) {
  j = Json{{"comment_id", c.comment_id},
           {"document_id", c.document_id},
           {"anchor", c.anchor},
           {"author_id", c.author_id},
           {"author_role", to_string(c.author_role)},
           {"body", c.body},
           {"visibility", to_string(c.visibility)},
           {"created_at", c.created_at},
           {"orphaned", c.orphaned}};
  j["audience"] = c.audience ? Json(*c.audience) : Json();
}

void from_json(Json const& j, Comment& c) {
  j.at("comment_id").get_to(c.comment_id);
  j.at("document_id").get_to(c.document_id);
  j.at("anchor").get_to(c.anchor);
  j.at("author_id").get_to(c.author_id);
  c.author_role = role_from_string(j.at("author_role").get<std::string>());
  j.at("body").get_to(c.body);
  c.visibility = j.at("visibility").get<std::string>() == "Pending"
                     ? VisibilityState::kPending
                     : VisibilityState::kApproved;
  j.at("created_at").get_to(c.created_at);
  c.orphaned = j.value("orphaned", false);
  if (auto a = j.find("audience"); a != j.end() && !a->is_null()) {
    c.audience = a->get<Audience>();
  }
}

bool role_valid_on(ServiceSide side, RoleKind role) {
  switch (role) {
    case RoleKind::kAuthor:
    case RoleKind::kReviewer:
      return true;
    case RoleKind::kEditor:
      return side == ServiceSide::kReviewService;
    case RoleKind::kAdmin:
      return side == ServiceSide::kDocumentService;
  }
  return false;
}

RoleKind map_role(ServiceSide from, RoleKind role) {
  if (!role_valid_on(from, role)) {
    throw Error(ErrorCode::kUnknownRole,
                "role is not defined on " + std::string(to_string(from)));
  }
  switch (role) {
    case RoleKind::kAuthor: return RoleKind::kAuthor;
    case RoleKind::kReviewer: return RoleKind::kReviewer;
    case RoleKind::kEditor: return RoleKind::kAdmin;
    case RoleKind::kAdmin: return RoleKind::kEditor;
  }
  throw Error(ErrorCode::kUnknownRole, "role value out of range");
}

// --- GrantStore -------------------------------------------------------------

GrantOutcome GrantStore::grant(std::string const& user_id,
                               std::string const& document_id, RoleKind role,
                               Timestamp at) {
  std::unique_lock lock(mu_);
  auto [it, inserted] = grants_.try_emplace(Key{user_id, document_id},
                                            RoleGrant{user_id, document_id, role, at});
  if (inserted) return GrantOutcome::kCreated;
  if (it->second.role == role) return GrantOutcome::kUnchanged;
  throw Error(ErrorCode::kRoleConflict,
              user_id + " already holds " + std::string(to_string(it->second.role)) +
                  " on " + document_id);
}

std::optional<RoleKind> GrantStore::role_of(std::string const& user_id,
                                            std::string const& document_id) const {
  std::shared_lock lock(mu_);
  auto it = grants_.find(Key{user_id, document_id});
  if (it == grants_.end()) return std::nullopt;
  return it->second.role;
}

std::vector<RoleGrant> GrantStore::grants_for_user(std::string const& user_id) const {
  std::shared_lock lock(mu_);
  std::vector<RoleGrant> out;
  for (auto it = grants_.lower_bound(Key{user_id, ""});
       it != grants_.end() && it->first.first == user_id; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::vector<RoleGrant> GrantStore::grants_for_document(
    std::string const& document_id) const {
  std::shared_lock lock(mu_);
  std::vector<RoleGrant> out;
  for (auto const& [key, g] : grants_) {
    if (key.second == document_id) out.push_back(g);
  }
  return out;
}

std::vector<RoleGrant> GrantStore::all() const {
  std::shared_lock lock(mu_);
  std::vector<RoleGrant> out;
  out.reserve(grants_.size());
  for (auto const& [key, g] : grants_) out.push_back(g);
  return out;
}

Json GrantStore::to_json() const { return Json(all()); }

void GrantStore::restore(Json const& j) {
  std::map<Key, RoleGrant> fresh;
  for (auto const& g : j.get<std::vector<RoleGrant>>()) {
    auto [it, inserted] = fresh.try_emplace(Key{g.user_id, g.document_id}, g);
    if (!inserted) throw Error(ErrorCode::kRoleConflict, "duplicate grant in state");
  }
  std::unique_lock lock(mu_);
  grants_ = std::move(fresh);
}

std::vector<RoleGrant> grant_role(std::vector<RoleGrant> existing,
                                  std::string const& user_id,
                                  std::string const& document_id, RoleKind role,
                                  Timestamp at) {
  for (auto const& g : existing) {
    if (g.user_id != user_id || g.document_id != document_id) continue;
    if (g.role == role) return existing;
    throw Error(ErrorCode::kRoleConflict, user_id + " already has a role on " + document_id);
  }
  existing.push_back(RoleGrant{user_id, document_id, role, at});
  return existing;
}

// --- Visibility -------------------------------------------------------------

bool comment_visible(RoleKind viewer_role, std::string const& viewer_id,
                     Comment const& comment) {
  if (is_editorial(viewer_role)) return true;
  if (viewer_id == comment.author_id) return true;

  auto const audience = comment.audience.value_or(Audience{});
  switch (viewer_role) {
    case RoleKind::kAuthor:
      switch (comment.author_role) {
        case RoleKind::kAuthor:
          return true;
        case RoleKind::kReviewer:
          return comment.visibility == VisibilityState::kApproved;
        case RoleKind::kEditor:
        case RoleKind::kAdmin:
          return audience.kind != Audience::Kind::kReviewer;
      }
      return false;
    case RoleKind::kReviewer:
      if (is_editorial(comment.author_role)) {
        return audience.kind == Audience::Kind::kAllParticipants ||
               (audience.kind == Audience::Kind::kReviewer &&
                audience.reviewer_id == viewer_id);
      }
      return false;
    default:
      return false;
  }
}

Comment approve_comment(RoleKind actor_role, Comment comment) {
  if (!is_editorial(actor_role)) {
    throw Error(ErrorCode::kNotEditor, "only editors approve comments");
  }
  comment.visibility = VisibilityState::kApproved;
  return comment;
}

std::string display_identity(RoleKind viewer_role, RoleKind subject_role,
                             BlindMode mode, std::string const& name,
                             int reviewer_number) {
  if (mode == BlindMode::kOpen || is_editorial(viewer_role)) return name;
  if (viewer_role == RoleKind::kAuthor && subject_role == RoleKind::kReviewer) {
    return "Reviewer " + std::to_string(reviewer_number);
  }
  if (mode == BlindMode::kDoubleBlind && viewer_role == RoleKind::kReviewer &&
      subject_role == RoleKind::kAuthor) {
    return "Author";
  }
  return name;
}

}  // namespace revbridge
