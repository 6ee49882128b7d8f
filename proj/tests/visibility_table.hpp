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

#include <string>
#include <utility>

#include "revbridge/permissions.hpp"

namespace revbridge::testing {

inline Comment comment_by(std::string author, RoleKind role,
                          VisibilityState state) {
  Comment c;
  c.comment_id = "c";
  c.document_id = "d";
  c.author_id = std::move(author);
  c.author_role = role;
  c.visibility = state;
  return c;
}

// Viewers are distinct people from every comment author, so the own-comment
// rule never fires here.
struct Row {
  RoleKind viewer;
  RoleKind author;
  VisibilityState state;
  bool visible;
};

inline constexpr Row kTruthTable[] = {
    // Authors see authors' and approved reviewers' comments; editor comments
    // default to the AuthorsOnly audience.
    {RoleKind::kAuthor, RoleKind::kAuthor, VisibilityState::kPending, true},
    {RoleKind::kAuthor, RoleKind::kAuthor, VisibilityState::kApproved, true},
    {RoleKind::kAuthor, RoleKind::kReviewer, VisibilityState::kPending, false},
    {RoleKind::kAuthor, RoleKind::kReviewer, VisibilityState::kApproved, true},
    {RoleKind::kAuthor, RoleKind::kEditor, VisibilityState::kPending, true},
    {RoleKind::kAuthor, RoleKind::kEditor, VisibilityState::kApproved, true},
    {RoleKind::kAuthor, RoleKind::kAdmin, VisibilityState::kPending, true},
    {RoleKind::kAuthor, RoleKind::kAdmin, VisibilityState::kApproved, true},
    // A reviewer sees no other reviewer's comments, no drafting comments,
    // and no editor comment addressed to the authors.
    {RoleKind::kReviewer, RoleKind::kAuthor, VisibilityState::kPending, false},
    {RoleKind::kReviewer, RoleKind::kAuthor, VisibilityState::kApproved, false},
    {RoleKind::kReviewer, RoleKind::kReviewer, VisibilityState::kPending, false},
    {RoleKind::kReviewer, RoleKind::kReviewer, VisibilityState::kApproved, false},
    {RoleKind::kReviewer, RoleKind::kEditor, VisibilityState::kPending, false},
    {RoleKind::kReviewer, RoleKind::kEditor, VisibilityState::kApproved, false},
    {RoleKind::kReviewer, RoleKind::kAdmin, VisibilityState::kPending, false},
    {RoleKind::kReviewer, RoleKind::kAdmin, VisibilityState::kApproved, false},
    // Editorial roles see everything.
    {RoleKind::kEditor, RoleKind::kAuthor, VisibilityState::kPending, true},
    {RoleKind::kEditor, RoleKind::kAuthor, VisibilityState::kApproved, true},
    {RoleKind::kEditor, RoleKind::kReviewer, VisibilityState::kPending, true},
    {RoleKind::kEditor, RoleKind::kReviewer, VisibilityState::kApproved, true},
    {RoleKind::kEditor, RoleKind::kEditor, VisibilityState::kPending, true},
    {RoleKind::kEditor, RoleKind::kEditor, VisibilityState::kApproved, true},
    {RoleKind::kEditor, RoleKind::kAdmin, VisibilityState::kPending, true},
    {RoleKind::kEditor, RoleKind::kAdmin, VisibilityState::kApproved, true},
    {RoleKind::kAdmin, RoleKind::kAuthor, VisibilityState::kPending, true},
    {RoleKind::kAdmin, RoleKind::kAuthor, VisibilityState::kApproved, true},
    {RoleKind::kAdmin, RoleKind::kReviewer, VisibilityState::kPending, true},
    {RoleKind::kAdmin, RoleKind::kReviewer, VisibilityState::kApproved, true},
    {RoleKind::kAdmin, RoleKind::kEditor, VisibilityState::kPending, true},
    {RoleKind::kAdmin, RoleKind::kEditor, VisibilityState::kApproved, true},
    {RoleKind::kAdmin, RoleKind::kAdmin, VisibilityState::kPending, true},
    {RoleKind::kAdmin, RoleKind::kAdmin, VisibilityState::kApproved, true},
};

}  // namespace revbridge::testing
