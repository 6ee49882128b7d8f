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

#include "revbridge/crypto.hpp"
#include "world.hpp"

namespace revbridge {
namespace {

using testing::kEditor;
using testing::signed_wire;
using testing::World;

api::Response call(api::Handler& h, std::string method, std::string path, Json body = nullptr,
                   std::string const& token = {}) {
  api::Request r;
  r.method = std::move(method);
  r.path = std::move(path);
  if (!body.is_null()) r.body = body.dump();
  if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
  return h.handle(r);
}

std::string error_name(api::Response const& r) { return r.json().value("error", ""); }

struct ApiFixture : ::testing::Test {
  std::string doc_login(std::string const& email) {
    return call(w.doc_api, "POST", "/sessions", {{"email", email}}).json()["token"];
  }
  std::string review_login(std::string const& email) {
    return call(w.review_api, "POST", "/sessions", {{"email", email}}).json()["token"];
  }
  World w;
};

TEST(Api, SplitPath) {
  EXPECT_EQ(api::split_path("/a/b/"), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(api::split_path("/").empty());
  EXPECT_EQ(api::split_path("a//b"), (std::vector<std::string>{"a", "b"}));
}

TEST_F(ApiFixture, AuthoringFlowOverHandlers) {
  auto r = call(w.doc_api, "POST", "/users", {{"email", "a@x.org"}, {"display_name", "A"}});
  ASSERT_EQ(r.status, 200);
  auto const token = doc_login("a@x.org");
  r = call(w.doc_api, "POST", "/documents", {{"title", "T"}}, token);
  ASSERT_EQ(r.status, 200);
  auto const doc = r.json()["document_id"].get<std::string>();

  r = call(w.doc_api, "POST", "/documents/" + doc + "/edits",
           {{"base_revision", 0},
            {"operations",
             {{{"op", "insert"},
               {"block", {{"id", "p"}, {"kind", "paragraph"}, {"text", "Hello there"}}}}}}},
           token);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["revision"], 1);
  r = call(w.doc_api, "POST", "/documents/" + doc + "/edits",
           {{"base_revision", 0}, {"operations", Json::array()}}, token);
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(error_name(r), "StaleRevision");

  r = call(w.doc_api, "POST", "/documents/" + doc + "/comments",
           {{"anchor", {{"block_id", "p"}, {"start", 0}, {"end", 5}}}, {"body", "hi"}}, token);
  ASSERT_EQ(r.status, 200) << r.body;
  r = call(w.doc_api, "POST", "/documents/" + doc + "/comments",
           {{"anchor", {{"block_id", "q"}, {"start", 0}, {"end", 1}}}, {"body", "x"}}, token);
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_name(r), "BadAnchor");

  r = call(w.doc_api, "GET", "/documents/" + doc + "/snapshot", nullptr, token);
  ASSERT_EQ(r.status, 200);
  auto const snap = r.json();
  EXPECT_EQ(snap["content_hash"], sha256_hex(snap["canonical"].get<std::string>()));

  api::Request imp;
  imp.method = "POST";
  imp.path = "/imports";
  imp.headers["authorization"] = "Bearer " + token;
  imp.body = snap["canonical"];
  r = w.doc_api.handle(imp);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_NE(r.json()["document_id"], doc);

  r = call(w.doc_api, "POST", "/documents/" + doc + "/submission", {{"journal_id", "jdh"}},
           token);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["state"]["phase"], "Submitted");
  r = call(w.doc_api, "GET", "/documents", nullptr, token);
  EXPECT_EQ(r.json().size(), 2u);
}

TEST_F(ApiFixture, AuthenticationAndRouting) {
  EXPECT_EQ(call(w.doc_api, "GET", "/documents").status, 401);
  EXPECT_EQ(call(w.doc_api, "GET", "/documents", nullptr, "bogus").status, 401);
  EXPECT_EQ(error_name(call(w.doc_api, "GET", "/documents")), "Unauthenticated");
  EXPECT_EQ(call(w.doc_api, "POST", "/sessions", {{"email", "ghost@x.org"}}).status, 401);
  w.doc.register_user("a@x.org", "");
  auto const token = doc_login("a@x.org");
  EXPECT_EQ(call(w.doc_api, "GET", "/nowhere", nullptr, token).status, 404);
  EXPECT_EQ(call(w.doc_api, "DELETE", "/documents", nullptr, token).status, 404);
  EXPECT_EQ(call(w.doc_api, "GET", "/documents/doc-77", nullptr, token).status, 404);
  EXPECT_EQ(call(w.review_api, "GET", "/submissions").status, 401);
  EXPECT_EQ(call(w.review_api, "GET", "/journals").json().size(), 2u);
}

TEST_F(ApiFixture, MalformedBodiesAreBadRequests) {
  w.doc.register_user("a@x.org", "");
  auto const token = doc_login("a@x.org");
  api::Request r;
  r.method = "POST";
  r.path = "/documents";
  r.headers["authorization"] = "Bearer " + token;
  r.body = "{not json";
  auto resp = w.doc_api.handle(r);
  EXPECT_EQ(resp.status, 400);
  EXPECT_EQ(error_name(resp), "BadRequest");
  r.body = "[1,2]";
  EXPECT_EQ(w.doc_api.handle(r).status, 400);
  r.body = R"({"title":""})";
  EXPECT_EQ(error_name(w.doc_api.handle(r)), "EmptyTitle");
  EXPECT_EQ(call(w.doc_api, "POST", "/users", {{"name", "no email"}}).status, 400);
  r.path = "/imports";
  r.body = "{\"title\":";
  resp = w.doc_api.handle(r);
  EXPECT_EQ(resp.status, 400);
  EXPECT_EQ(error_name(resp), "ParseError");
}

TEST(Api, GatedEndpointsAreHiddenByDefault) {
  ScriptedClock clock;
  DocService doc(DocServiceOptions{testing::kSecret, testing::journals(), 1, {}, {}}, clock);
  ReviewService review(ReviewServiceOptions{testing::kSecret, testing::journals(), 2, {}, {}},
                       clock);
  api::DocApi doc_api(doc);
  api::ReviewApi review_api(review);
  for (auto const* path : {"/events", "/state"}) {
    EXPECT_EQ(call(doc_api, "GET", path).status, 404);
    EXPECT_EQ(call(review_api, "GET", path).status, 404);
  }
  EXPECT_EQ(call(review_api, "GET", "/outbox").status, 404);
  EXPECT_EQ(call(doc_api, "POST", "/sessions", {{"email", "a@x.org"}}).status, 404);
  EXPECT_EQ(call(review_api, "POST", "/sessions", {{"email", kEditor}}).status, 404);
}

TEST_F(ApiFixture, GatedEndpointsWhenExposed) {
  EXPECT_EQ(call(w.doc_api, "GET", "/events").status, 200);
  EXPECT_TRUE(call(w.review_api, "GET", "/state").json().contains("submissions"));
  EXPECT_TRUE(call(w.review_api, "GET", "/outbox").json().is_array());
}

TEST_F(ApiFixture, BridgeEndpointsCheckSignatures) {
  auto const [author, doc] = w.author_with_document("a@x.org");
  Json p{{"submission_id", "sub-3"}, {"document_id", doc}, {"round_index", 1},
         {"email", "r@x.org"},       {"display_name", "R"}, {"role", "Reviewer"}};
  auto wire = signed_wire(bridge::MessageKind::kReviewerAssigned, p, "forged");
  api::LocalTransport t(w.doc_api);
  wire.path = "/bridge/accounts";
  auto resp = t.post(wire);
  EXPECT_EQ(resp.status, 401);
  EXPECT_EQ(Json::parse(resp.body)["error"], "BadSignature");

  wire = signed_wire(bridge::MessageKind::kReviewerAssigned, p);
  resp = t.post(wire);
  EXPECT_EQ(resp.status, 200);
  EXPECT_EQ(Json::parse(resp.body)["duplicate"], false);
  EXPECT_EQ(Json::parse(t.post(wire).body)["duplicate"], true);

  // A message of the wrong kind for the endpoint is refused.
  auto decision = signed_wire(bridge::MessageKind::kDecisionRelayed,
                              {{"submission_id", "s"}, {"document_id", doc}, {"round_index", 1}});
  decision.path = "/bridge/accounts";
  EXPECT_EQ(t.post(decision).status, 400);

  api::LocalTransport r(w.review_api);
  auto sub = signed_wire(bridge::MessageKind::kSubmitDocument,
                         {{"document_id", doc},
                          {"journal_id", "jdh"},
                          {"snapshot_hash", "00"},
                          {"corresponding_author_email", "a@x.org"}},
                         "forged");
  EXPECT_EQ(r.post(sub).status, 401);
  sub.signature.clear();
  EXPECT_EQ(r.post(sub).status, 401);
}

TEST_F(ApiFixture, SsoSessionIsScopedToOneDocument) {
  auto const [author, doc] = w.author_with_document("a@x.org");
  auto const [other_author, other] = w.author_with_document("b@x.org");
  auto const sub = w.doc.submit_document(author, doc, "jdh").submission_id;
  auto const editor = review_login(kEditor);
  auto r = call(w.review_api, "POST", "/submissions/" + sub + "/reviewers",
                {{"email", "r@x.org"}, {"display_name", "Rae"}}, editor);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["delivery"]["outcome"], "Delivered");

  auto const outbox = call(w.review_api, "GET", "/outbox").json();
  ASSERT_EQ(outbox.size(), 1u);
  auto const sso = outbox[0]["sso_token"].get<std::string>();
  r = call(w.doc_api, "POST", "/bridge/sso", {{"token", sso}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["document_id"], doc);
  EXPECT_EQ(r.json()["role"], "Reviewer");
  auto const scoped = r.json()["token"].get<std::string>();

  EXPECT_EQ(call(w.doc_api, "POST", "/bridge/sso", {{"token", sso}}).status, 401);
  EXPECT_EQ(call(w.doc_api, "GET", "/documents/" + doc, nullptr, scoped).status, 200);
  r = call(w.doc_api, "GET", "/documents/" + other, nullptr, scoped);
  EXPECT_EQ(r.status, 403);
  EXPECT_EQ(error_name(r), "NoGrant");
  EXPECT_EQ(call(w.doc_api, "POST", "/documents", {{"title", "x"}}, scoped).status, 403);
  EXPECT_EQ(call(w.doc_api, "GET", "/documents", nullptr, scoped).json().size(), 1u);
  r = call(w.doc_api, "POST", "/documents/" + doc + "/edits",
           {{"base_revision", 1}, {"operations", Json::array()}}, scoped);
  EXPECT_EQ(r.status, 403);
  EXPECT_EQ(error_name(r), "NotAuthorized");
}

TEST_F(ApiFixture, SubmissionViewsAreMaskedPerViewer) {
  World dw(testing::journals(BlindMode::kDoubleBlind));
  auto const [author, doc] = dw.author_with_document("a@x.org");
  auto const sub = dw.doc.submit_document(author, doc, "jdh").submission_id;
  dw.review.assign_reviewer(kEditor, sub, "r1@x.org", "Rae One");
  dw.review.assign_reviewer(kEditor, sub, "r2@x.org", "Rob Two");
  auto login = [&](std::string const& email) {
    return call(dw.review_api, "POST", "/sessions", {{"email", email}}).json()["token"]
        .get<std::string>();
  };
  auto view = [&](std::string const& email) {
    return call(dw.review_api, "GET", "/submissions/" + sub, nullptr, login(email)).json();
  };
  auto const as_editor = view(kEditor);
  EXPECT_EQ(as_editor["rounds"][0]["assignments"].size(), 2u);
  EXPECT_EQ(as_editor["rounds"][0]["assignments"][0]["reviewer"]["display_name"], "Rae One");

  auto const as_author = view("a@x.org");
  auto const& seen = as_author["rounds"][0]["assignments"];
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0]["reviewer"]["display_name"], "Reviewer 1");
  EXPECT_EQ(seen[1]["reviewer"]["email"], "");
  EXPECT_EQ(as_author["corresponding_author"]["email"], "a@x.org");

  auto const as_reviewer = view("r2@x.org");
  ASSERT_EQ(as_reviewer["rounds"][0]["assignments"].size(), 1u);
  EXPECT_EQ(as_reviewer["rounds"][0]["assignments"][0]["reviewer"]["display_name"], "Rob Two");
  EXPECT_EQ(as_reviewer["corresponding_author"]["display_name"], "Author");
  EXPECT_EQ(as_reviewer.dump().find("a@x.org"), std::string::npos);

  auto const list = call(dw.review_api, "GET", "/submissions", nullptr, login("r1@x.org")).json();
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(call(dw.review_api, "POST", "/submissions/" + sub + "/decision",
                 {{"decision", "Accept"}, {"rationale", ""}}, login("r1@x.org"))
                .status,
            403);
}

TEST_F(ApiFixture, ReviewWorkflowOverHandlers) {
  auto const [author, doc] = w.author_with_document("a@x.org");
  auto const sub = w.doc.submit_document(author, doc, "jdh").submission_id;
  auto const editor = review_login(kEditor);
  auto const base = "/submissions/" + sub;
  ASSERT_EQ(call(w.review_api, "POST", base + "/reviewers", {{"email", "r@x.org"}}, editor)
                .status,
            200);
  auto const rev = review_login("r@x.org");
  EXPECT_EQ(call(w.review_api, "POST", base + "/invitation", {{"accept", true}}, rev).status,
            200);
  auto r = call(w.review_api, "POST", base + "/reviews",
                {{"general_feedback", ""}, {"recommendation", "Accept"}}, rev);
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(error_name(r), "MissingFeedback");
  r = call(w.review_api, "POST", base + "/reviews",
           {{"general_feedback", "Good"}, {"recommendation", "Accept"}}, rev);
  EXPECT_EQ(r.status, 200);
  r = call(w.review_api, "POST", base + "/decision",
           {{"decision", "Accept"}, {"rationale", "ok"}}, editor);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["submission"]["label"], "Accepted");
  EXPECT_EQ(r.json()["delivery"]["outcome"], "Delivered");
  EXPECT_EQ(w.doc.get_document(Viewer{author, std::nullopt}, doc).status->state,
            SubmissionState::accepted(1));
  r = call(w.review_api, "POST", base + "/rounds", nullptr, editor);
  EXPECT_EQ(r.status, 409);
}

}  // namespace
}  // namespace revbridge
