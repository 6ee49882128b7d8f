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

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

#include "revbridge/error.hpp"
#include "revbridge/permissions.hpp"
#include "visibility_table.hpp"

namespace revbridge {
namespace {

using R = RoleKind;
using V = VisibilityState;
using testing::comment_by;
using testing::kTruthTable;

TEST(Visibility, TruthTableAll32) {
  static_assert(std::size(kTruthTable) == 32);
  for (auto const& row : kTruthTable) {
    auto const c = comment_by("writer", row.author, row.state);
    EXPECT_EQ(comment_visible(row.viewer, "viewer", c), row.visible)
        << to_string(row.viewer) << " viewing " << to_string(row.author) << " "
        << to_string(row.state);
  }
}

TEST(Visibility, OwnCommentsAlwaysVisible) {
  for (auto role : {R::kAuthor, R::kReviewer, R::kEditor, R::kAdmin}) {
    for (auto state : {V::kPending, V::kApproved}) {
      EXPECT_TRUE(comment_visible(role, "me", comment_by("me", role, state)));
    }
  }
}

TEST(Visibility, EditorAudience) {
  auto c = comment_by("ed", R::kEditor, V::kApproved);
  c.audience = Audience{Audience::Kind::kReviewer, "r1"};
  EXPECT_TRUE(comment_visible(R::kReviewer, "r1", c));
  EXPECT_FALSE(comment_visible(R::kReviewer, "r2", c));
  EXPECT_FALSE(comment_visible(R::kAuthor, "a1", c));

  c.audience = Audience{Audience::Kind::kAllParticipants, {}};
  EXPECT_TRUE(comment_visible(R::kReviewer, "r2", c));
  EXPECT_TRUE(comment_visible(R::kAuthor, "a1", c));
}

TEST(Visibility, ApprovalIsMonotone) {
  std::mt19937_64 rng(3);
  std::vector<std::pair<R, std::string>> viewers{
      {R::kAuthor, "a1"}, {R::kAuthor, "a2"}, {R::kReviewer, "r1"},
      {R::kReviewer, "r2"}, {R::kEditor, "e1"}, {R::kAdmin, "d1"}};
  for (int i = 0; i < 500; ++i) {
    auto const& [role, id] = viewers[rng() % viewers.size()];
    auto const& [arole, aid] = viewers[rng() % viewers.size()];
    auto c = comment_by(aid, arole, rng() % 2 ? V::kPending : V::kApproved);
    if (rng() % 3 == 0) c.audience = Audience{Audience::Kind::kReviewer, "r1"};
    auto const after = approve_comment(R::kEditor, c);
    if (comment_visible(role, id, c)) EXPECT_TRUE(comment_visible(role, id, after));
  }
}

TEST(Approval, OnlyEditorialRolesAndIdempotent) {
  auto const c = comment_by("r1", R::kReviewer, V::kPending);
  for (auto role : {R::kAuthor, R::kReviewer}) {
    try {
      approve_comment(role, c);
      ADD_FAILURE();
    } catch (Error const& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNotEditor);
    }
  }
  auto const once = approve_comment(R::kAdmin, c);
  EXPECT_EQ(once.visibility, V::kApproved);
  EXPECT_EQ(approve_comment(R::kEditor, once).visibility, V::kApproved);
}

TEST(RoleMapping, MatchesTheRoleTableAndIsAnInvolution) {
  using S = ServiceSide;
  EXPECT_EQ(map_role(S::kReviewService, R::kAuthor), R::kAuthor);
  EXPECT_EQ(map_role(S::kReviewService, R::kReviewer), R::kReviewer);
  EXPECT_EQ(map_role(S::kReviewService, R::kEditor), R::kAdmin);
  EXPECT_EQ(map_role(S::kDocumentService, R::kAdmin), R::kEditor);
  for (auto r : {R::kAuthor, R::kReviewer, R::kEditor}) {
    EXPECT_EQ(map_role(S::kDocumentService, map_role(S::kReviewService, r)), r);
  }
  EXPECT_THROW(map_role(S::kReviewService, R::kAdmin), Error);
  EXPECT_THROW(map_role(S::kDocumentService, R::kEditor), Error);
  EXPECT_FALSE(role_valid_on(S::kDocumentService, R::kEditor));
  EXPECT_FALSE(role_valid_on(S::kReviewService, R::kAdmin));
}

TEST(Grants, PureGrantRole) {
  auto g = grant_role({}, "u1", "d1", R::kReviewer);
  g = grant_role(g, "u1", "d1", R::kReviewer);
  EXPECT_EQ(g.size(), 1u);
  try {
    grant_role(g, "u1", "d1", R::kAuthor);
    ADD_FAILURE();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRoleConflict);
  }
  g = grant_role(g, "u1", "d2", R::kAuthor);
  EXPECT_EQ(g.size(), 2u);
}

TEST(Grants, StoreOutcomesAndQueries) {
  GrantStore store;
  EXPECT_EQ(store.grant("u1", "d1", R::kAuthor, 1), GrantOutcome::kCreated);
  EXPECT_EQ(store.grant("u1", "d1", R::kAuthor, 2), GrantOutcome::kUnchanged);
  EXPECT_THROW(store.grant("u1", "d1", R::kAdmin, 3), Error);
  EXPECT_EQ(store.grant("u2", "d1", R::kReviewer, 4), GrantOutcome::kCreated);
  EXPECT_EQ(store.role_of("u1", "d1"), R::kAuthor);
  EXPECT_FALSE(store.role_of("u3", "d1"));
  EXPECT_EQ(store.grants_for_document("d1").size(), 2u);
  EXPECT_EQ(store.grants_for_user("u1").size(), 1u);
  EXPECT_EQ(store.grants_for_user("u1")[0].granted_at, 1);

  GrantStore copy;
  copy.restore(store.to_json());
  EXPECT_EQ(copy.all(), store.all());
  Json dup = Json::array({RoleGrant{"u", "d", R::kAuthor, 0}, RoleGrant{"u", "d", R::kAdmin, 0}});
  EXPECT_THROW(copy.restore(dup), Error);
}

TEST(Grants, RandomSequencesKeepOneRolePerPair) {
  std::mt19937_64 rng(11);
  R const roles[] = {R::kAuthor, R::kReviewer, R::kAdmin};
  for (int seq = 0; seq < 200; ++seq) {
    GrantStore store;
    std::vector<RoleGrant> pure;
    for (int i = 0; i < 40; ++i) {
      auto const u = "u" + std::to_string(rng() % 4);
      auto const d = "d" + std::to_string(rng() % 3);
      auto const r = roles[rng() % 3];
      bool store_threw = false, pure_threw = false;
      try {
        store.grant(u, d, r, i);
      } catch (Error const&) {
        store_threw = true;
      }
      try {
        pure = grant_role(pure, u, d, r, i);
      } catch (Error const&) {
        pure_threw = true;
      }
      EXPECT_EQ(store_threw, pure_threw);
    }
    std::set<std::pair<std::string, std::string>> pairs;
    for (auto const& g : store.all()) {
      EXPECT_TRUE(pairs.insert({g.user_id, g.document_id}).second);
    }
    EXPECT_EQ(store.all().size(), pure.size());
  }
}

TEST(Grants, ConcurrentConflictingGrantsLeaveOneWinner) {
  for (int round = 0; round < 50; ++round) {
    GrantStore store;
    std::atomic<int> created{0};
    std::vector<std::thread> threads;
    for (R r : {R::kAuthor, R::kReviewer, R::kAdmin, R::kAuthor}) {
      threads.emplace_back([&, r] {
        try {
          if (store.grant("u", "d", r, 0) == GrantOutcome::kCreated) ++created;
        } catch (Error const&) {
        }
      });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(created.load(), 1);
    EXPECT_EQ(store.all().size(), 1u);
  }
}

TEST(BlindModes, DisplayIdentity) {
  using B = BlindMode;
  EXPECT_EQ(display_identity(R::kAuthor, R::kReviewer, B::kSingleBlind, "Kim"), "Reviewer 1");
  EXPECT_EQ(display_identity(R::kAuthor, R::kReviewer, B::kSingleBlind, "Kim", 3), "Reviewer 3");
  EXPECT_EQ(display_identity(R::kEditor, R::kReviewer, B::kDoubleBlind, "Kim"), "Kim");
  EXPECT_EQ(display_identity(R::kAdmin, R::kAuthor, B::kDoubleBlind, "Ada"), "Ada");
  EXPECT_EQ(display_identity(R::kReviewer, R::kAuthor, B::kDoubleBlind, "Ada"), "Author");
  EXPECT_EQ(display_identity(R::kReviewer, R::kAuthor, B::kSingleBlind, "Ada"), "Ada");
  for (auto v : {R::kAuthor, R::kReviewer, R::kEditor, R::kAdmin}) {
    for (auto s : {R::kAuthor, R::kReviewer, R::kEditor, R::kAdmin}) {
      EXPECT_EQ(display_identity(v, s, B::kOpen, "Name"), "Name");
    }
  }
}

TEST(Serialization, CommentRoundTrip) {
  auto c = comment_by("r1", R::kReviewer, V::kPending);
  c.anchor = Anchor{"b2", 3, 9};
  c.body = "check this";
  c.audience = Audience{Audience::Kind::kReviewer, "r9"};
  c.orphaned = true;
  Json j = c;
  auto const back = j.get<Comment>();
  EXPECT_EQ(back.anchor, c.anchor);
  EXPECT_EQ(back.audience, c.audience);
  EXPECT_EQ(back.orphaned, true);
  EXPECT_EQ(back.visibility, V::kPending);
  EXPECT_EQ(blind_mode_from_string("DoubleBlind"), BlindMode::kDoubleBlind);
  EXPECT_THROW(blind_mode_from_string("Triple"), Error);
}

}  // namespace
}  // namespace revbridge
