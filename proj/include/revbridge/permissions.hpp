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

#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "revbridge/core.hpp"

namespace revbridge {

enum class ServiceSide { kDocumentService, kReviewService };

/// Reviewer comments are born Pending; everything else is born Approved.
enum class VisibilityState { kPending, kApproved };

enum class BlindMode { kOpen, kSingleBlind, kDoubleBlind };

std::string_view to_string(ServiceSide side);
std::string_view to_string(VisibilityState state);
std::string_view to_string(BlindMode mode);
BlindMode blind_mode_from_string(std::string_view name);

/// Who an editor comment is addressed to. Ignored for non-editor comments.
struct Audience {
  enum class Kind { kAllParticipants, kAuthorsOnly, kReviewer };
  Kind kind = Kind::kAuthorsOnly;
  std::string reviewer_id;  // set iff kind == kReviewer

  friend bool operator==(Audience const&, Audience const&) = default;
};

struct Anchor {
  std::string block_id;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(Anchor const&, Anchor const&) = default;
};

struct Comment {
  std::string comment_id;
  std::string document_id;
  Anchor anchor;
  std::string author_id;
  RoleKind author_role = RoleKind::kAuthor;  // role held when created
  std::string body;
  VisibilityState visibility = VisibilityState::kApproved;
  std::optional<Audience> audience;  // editor comments only
  Timestamp created_at = 0;
  bool orphaned = false;  // anchor block deleted or shrunk by an edit
};

void to_json(Json& j, Audience const& a);
void from_json(Json const& j, Audience& a);
void to_json(Json& j, Anchor const& a);
void from_json(Json const& j, Anchor& a);
void to_json(Json& j, Comment const& c);
void from_json(Json const& j, Comment& c);

bool role_valid_on(ServiceSide side, RoleKind role);

/// Translates a role held on `from` into its counterpart on the other side:
/// Author<->Author, Reviewer<->Reviewer, Editor<->Admin.
/// Throws UnknownRole when `role` does not exist on `from`.
RoleKind map_role(ServiceSide from, RoleKind role);

enum class GrantOutcome { kCreated, kUnchanged };

/// Per-service grant table. At most one role per (user, document).
/// Writers are serialized; readers may run concurrently.
class GrantStore {
 public:
  /// Records the grant. Re-granting the same role is a no-op; a different
  /// role on the same pair throws RoleConflict.
  GrantOutcome grant(std::string const& user_id, std::string const& document_id,
                     RoleKind role, Timestamp at);

  std::optional<RoleKind> role_of(std::string const& user_id,
                                  std::string const& document_id) const;
  std::vector<RoleGrant> grants_for_user(std::string const& user_id) const;
  std::vector<RoleGrant> grants_for_document(std::string const& document_id) const;
  std::vector<RoleGrant> all() const;

  Json to_json() const;
  void restore(Json const& j);

 private:
  using Key = std::pair<std::string, std::string>;  // (user, document)
  mutable std::shared_mutex mu_;
  std::map<Key, RoleGrant> grants_;
};

/// Pure form of GrantStore::grant over a plain grant list.
std::vector<RoleGrant> grant_role(std::vector<RoleGrant> existing,
                                  std::string const& user_id,
                                  std::string const& document_id, RoleKind role,
                                  Timestamp at = 0);

/// Comment visibility matrix. `viewer_role` is the viewer's role on the
/// comment's document.
bool comment_visible(RoleKind viewer_role, std::string const& viewer_id,
                     Comment const& comment);

/// Releases a reviewer comment to authors. Throws NotEditor unless the actor
/// is Editor/Admin; already-approved comments come back unchanged.
Comment approve_comment(RoleKind actor_role, Comment comment);

/// Name shown to `viewer_role` for a participant holding `subject_role`.
/// `reviewer_number` is the subject's assignment order within its round.
std::string display_identity(RoleKind viewer_role, RoleKind subject_role,
                             BlindMode mode, std::string const& name,
                             int reviewer_number = 1);

}  // namespace revbridge
