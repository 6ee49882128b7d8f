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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "revbridge/bridge.hpp"
#include "revbridge/doc_service.hpp"
#include "revbridge/error.hpp"
#include "revbridge/review_service.hpp"

namespace revbridge::api {

/// Transport-neutral HTTP request. Header names are lowercase.
struct Request {
  std::string method = "GET";
  std::string path = "/";
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;
  std::string body;

  std::string header(std::string_view name) const;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";

  Json json() const;
};

Response json_response(Json const& body, int status = 200);
Response error_response(Error const& error);

/// Splits "/a/b/c" into {"a","b","c"}; ignores a trailing slash.
std::vector<std::string> split_path(std::string_view path);

class Handler {
 public:
  virtual ~Handler() = default;
  virtual Response handle(Request const& request) = 0;
};

struct DocApiOptions {
  bool dev_login = false;          // enables POST /sessions
  bool expose_internals = false;   // enables GET /events and GET /state
};

/// HTTP surface of the document service.
///
///   POST /users                                 register an account
///   POST /sessions                              dev login (gated)
///   POST /documents                             create
///   GET  /documents                             list by role
///   POST /imports                               import canonical bytes
///   GET  /documents/{id}                        filtered, masked view
///   GET  /documents/{id}/snapshot               canonical snapshot
///   POST /documents/{id}/edits                  optimistic block edits
///   POST /documents/{id}/comments               anchored comment
///   POST /documents/{id}/comments/{cid}/approval
///   POST /documents/{id}/collaborators          invite co-author
///   POST /documents/{id}/submission             submit to a journal
///   POST /documents/{id}/resubmission           resubmit after revision
///   POST /bridge/accounts                       ReviewerAssigned (signed)
///   POST /bridge/decisions                      DecisionRelayed (signed)
///   POST /bridge/sso                            consume a one-time token
///   GET  /events, GET /state                    (gated)
class DocApi final : public Handler {
 public:
  DocApi(DocService& service, DocApiOptions options = {});
  Response handle(Request const& request) override;

 private:
  Response dispatch(Request const& request);
  DocSession authenticate(Request const& request) const;

  DocService& service_;
  DocApiOptions options_;
};

struct ReviewApiOptions {
  bool dev_login = false;
  bool expose_internals = false;  // enables GET /outbox, /events, /state
};

/// HTTP surface of the review service.
///
///   GET  /journals
///   POST /sessions                              dev login (gated)
///   POST /bridge/submissions                    SubmitDocument (signed)
///   POST /bridge/resubmissions                  Resubmission (signed)
///   GET  /submissions
///   GET  /submissions/{id}
///   POST /submissions/{id}/reviewers
///   POST /submissions/{id}/invitation
///   POST /submissions/{id}/reviews
///   POST /submissions/{id}/decision
///   POST /submissions/{id}/rounds
///   GET  /outbox[?history=1]                    (gated)
///   GET  /events, GET /state                    (gated)
class ReviewApi final : public Handler {
 public:
  ReviewApi(ReviewService& service, ReviewApiOptions options = {});
  Response handle(Request const& request) override;

 private:
  Response dispatch(Request const& request);
  std::string authenticate(Request const& request) const;

  ReviewService& service_;
  ReviewApiOptions options_;
};

/// Bridge transport that calls a handler in the same process.
class LocalTransport final : public bridge::Transport {
 public:
  explicit LocalTransport(Handler& target) : target_(target) {}
  bridge::WireResponse post(bridge::WireRequest const& request) override;

 private:
  Handler& target_;
};

}  // namespace revbridge::api
