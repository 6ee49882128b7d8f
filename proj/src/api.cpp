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

#include "revbridge/api.hpp"

#include <algorithm>
#include <cctype>

namespace revbridge::api {
namespace {

constexpr char kBearer[] = "Bearer ";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Json parse_body(Request const& request) {
  if (request.body.empty()) return Json::object();
  auto j = Json::parse(request.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kBadRequest, "request body must be a JSON object");
  }
  return j;
}

std::string bearer_token(Request const& request) {
  auto const auth = request.header("authorization");
  if (auth.rfind(kBearer, 0) != 0) {
    throw Error(ErrorCode::kUnauthenticated, "missing bearer token");
  }
  return auth.substr(sizeof(kBearer) - 1);
}

bridge::WireRequest wire_from(Request const& request) {
  return bridge::WireRequest{request.path, request.body,
                             request.header(lower(bridge::kSignatureHeader)),
                             request.header(lower(bridge::kIdempotencyHeader))};
}

Json submit_result_json(SubmitResult const& r) {
  return Json{{"submission_id", r.submission_id},
              {"snapshot_hash", r.snapshot_hash},
              {"state", r.state},
              {"delivery", bridge::to_json(r.delivery)}};
}

Json optional_delivery(std::optional<bridge::DeliveryReport> const& r) {
  return r ? bridge::to_json(*r) : Json{{"outcome", "Queued"}};
}

template <typename Fn>
Response guarded(Fn&& fn) {
  try {
    return fn();
  } catch (Error const& e) {
    return error_response(e);
  } catch (Json::exception const& e) {
    return error_response(Error(ErrorCode::kBadRequest, e.what()));
  } catch (std::exception const& e) {
    return json_response(Json{{"error", "Internal"}, {"message", e.what()}}, 500);
  }
}

}  // namespace

std::string Request::header(std::string_view name) const {
  auto it = headers.find(lower(name));
  return it == headers.end() ? std::string{} : it->second;
}

Json Response::json() const { return Json::parse(body, nullptr, false); }

Response json_response(Json const& body, int status) {
  return Response{status, body.dump(), "application/json"};
}

Response error_response(Error const& error) {
  return json_response(
      Json{{"error", to_string(error.code())}, {"message", error.detail()}},
      http_status(error.code()));
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) out.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

bridge::WireResponse LocalTransport::post(bridge::WireRequest const& request) {
  Request r;
  r.method = "POST";
  r.path = request.path;
  r.body = request.body;
  r.headers[lower(bridge::kSignatureHeader)] = request.signature;
  r.headers[lower(bridge::kIdempotencyHeader)] = request.idempotency_key;
  r.headers["content-type"] = "application/json";
  auto const response = target_.handle(r);
  return bridge::WireResponse{response.status, response.body};
}

// --- DocApi -----------------------------------------------------------------

DocApi::DocApi(DocService& service, DocApiOptions options)
    : service_(service), options_(options) {}

Response DocApi::handle(Request const& request) {
  return guarded([&] { return dispatch(request); });
}

DocSession DocApi::authenticate(Request const& request) const {
  auto s = service_.session(bearer_token(request));
  if (!s) throw Error(ErrorCode::kUnauthenticated, "unknown or expired session");
  return *s;
}

Response DocApi::dispatch(Request const& request) {
  auto const seg = split_path(request.path);
  auto const& m = request.method;
  auto const is = [&](std::string_view method, std::size_t n) {
    return m == method && seg.size() == n;
  };

  if (is("GET", 1) && (seg[0] == "events" || seg[0] == "state")) {
    if (!options_.expose_internals) throw Error(ErrorCode::kNotFound, request.path);
    if (seg[0] == "state") return json_response(service_.state_json());
    return json_response(Json(service_.events()));
  }
  if (is("POST", 1) && seg[0] == "users") {
    auto const body = parse_body(request);
    return json_response(service_.register_user(body.at("email").get<std::string>(),
                                                body.value("display_name", "")));
  }
  if (is("POST", 1) && seg[0] == "sessions") {
    if (!options_.dev_login) throw Error(ErrorCode::kNotFound, "dev login is disabled");
    auto const s = service_.open_session(parse_body(request).at("email").get<std::string>());
    return json_response(Json{{"token", s.token}, {"user_id", s.viewer.user_id}});
  }
  if (!seg.empty() && seg[0] == "bridge") {
    if (is("POST", 2) && seg[1] == "accounts") {
      return json_response(service_.ensure_account(wire_from(request)));
    }
    if (is("POST", 2) && seg[1] == "decisions") {
      return json_response(service_.relay_decision(wire_from(request)));
    }
    if (is("POST", 2) && seg[1] == "sso") {
      auto const s =
          service_.consume_sso_token(parse_body(request).at("token").get<std::string>());
      return json_response(Json{{"token", s.token},
                                {"user_id", s.viewer.user_id},
                                {"document_id", *s.viewer.scope_document},
                                {"role", to_string(*s.role)}});
    }
    throw Error(ErrorCode::kNotFound, request.path);
  }

  auto const session = authenticate(request);
  auto const& actor = session.viewer.user_id;
  auto const& scope = session.viewer.scope_document;

  if (is("GET", 1) && seg[0] == "documents") {
    Json out = Json::array();
    for (auto const& l : service_.list_documents(actor)) {
      if (!scope || *scope == l.document_id) out.push_back(l);
    }
    return json_response(out);
  }
  if (scope && (seg.size() < 2 || seg[0] != "documents" || seg[1] != *scope)) {
    throw Error(ErrorCode::kNoGrant, "session is scoped to " + *scope);
  }
  if (is("POST", 1) && seg[0] == "documents") {
    return json_response(
        service_.create_document(actor, parse_body(request).value("title", "")));
  }
  if (is("POST", 1) && seg[0] == "imports") {
    return json_response(service_.import_manuscript(actor, request.body));
  }
  if (seg.size() < 2 || seg[0] != "documents") throw Error(ErrorCode::kNotFound, request.path);

  auto const& doc = seg[1];
  if (is("GET", 2)) return json_response(service_.get_document(session.viewer, doc));
  if (is("GET", 3) && seg[2] == "snapshot") {
    if (!service_.role_of(actor, doc)) throw Error(ErrorCode::kNoGrant, "no role on " + doc);
    auto const s = service_.export_snapshot(doc);
    return json_response(Json{{"document_id", s.document_id},
                              {"revision", s.revision},
                              {"content_hash", s.content_hash},
                              {"canonical", s.canonical}});
  }
  if (is("POST", 3) && seg[2] == "edits") {
    auto const body = parse_body(request);
    return json_response(service_.apply_edit(
        actor, doc, body.at("base_revision").get<std::uint64_t>(),
        body.value("operations", Json::array()).get<std::vector<BlockOp>>()));
  }
  if (is("POST", 3) && seg[2] == "comments") {
    auto const body = parse_body(request);
    std::optional<Audience> audience;
    if (body.contains("audience") && !body["audience"].is_null()) {
      audience = body["audience"].get<Audience>();
    }
    return json_response(service_.add_comment(actor, doc, body.at("anchor").get<Anchor>(),
                                              body.value("body", ""), audience));
  }
  if (is("POST", 5) && seg[2] == "comments" && seg[4] == "approval") {
    return json_response(service_.approve_comment(actor, doc, seg[3]));
  }
  if (is("POST", 3) && seg[2] == "collaborators") {
    auto const body = parse_body(request);
    return json_response(service_.invite_collaborator(
        actor, doc, body.at("email").get<std::string>(), body.value("display_name", "")));
  }
  if (is("POST", 3) && seg[2] == "submission") {
    return json_response(submit_result_json(service_.submit_document(
        actor, doc, parse_body(request).at("journal_id").get<std::string>())));
  }
  if (is("POST", 3) && seg[2] == "resubmission") {
    return json_response(submit_result_json(service_.resubmit_document(actor, doc)));
  }
  throw Error(ErrorCode::kNotFound, m + " " + request.path);
}

// --- ReviewApi --------------------------------------------------------------

namespace {

/// Submission as seen by `viewer`: editors get everything; others see
/// reviewer identities through the journal's blind mode.
Json submission_view(Submission const& s, std::string const& viewer, bool editor,
                     BlindMode mode) {
  Json j = s;
  if (editor) return j;
  bool const author = viewer == s.corresponding_author.email ||
                      std::find(s.co_author_emails.begin(), s.co_author_emails.end(),
                                viewer) != s.co_author_emails.end();
  for (auto& round : j["rounds"]) {
    Json kept = Json::array();
    for (auto& a : round["assignments"]) {
      bool const self = a["reviewer"]["email"] == viewer;
      if (!author && !self) continue;
      if (!self) {
        a["reviewer"]["display_name"] =
            display_identity(RoleKind::kAuthor, RoleKind::kReviewer, mode,
                             a["reviewer"]["display_name"].get<std::string>(),
                             a["reviewer_number"].get<int>());
        if (mode != BlindMode::kOpen) {
          a["reviewer"]["email"] = "";
          a["reviewer"]["user_id"] = "";
        }
      }
      kept.push_back(a);
    }
    round["assignments"] = kept;
  }
  if (!author && mode == BlindMode::kDoubleBlind) {
    j["corresponding_author"] = UserIdentity{"", "", "Author"};
    j["co_author_emails"] = Json::array();
  }
  return j;
}

}  // namespace

ReviewApi::ReviewApi(ReviewService& service, ReviewApiOptions options)
    : service_(service), options_(options) {}

Response ReviewApi::handle(Request const& request) {
  return guarded([&] { return dispatch(request); });
}

std::string ReviewApi::authenticate(Request const& request) const {
  auto email = service_.session_email(bearer_token(request));
  if (!email) throw Error(ErrorCode::kUnauthenticated, "unknown or expired session");
  return *email;
}

Response ReviewApi::dispatch(Request const& request) {
  auto const seg = split_path(request.path);
  auto const& m = request.method;
  auto const is = [&](std::string_view method, std::size_t n) {
    return m == method && seg.size() == n;
  };

  if (is("GET", 1) && seg[0] == "journals") {
    return json_response(Json(service_.list_journals()));
  }
  if (is("POST", 1) && seg[0] == "sessions") {
    if (!options_.dev_login) throw Error(ErrorCode::kNotFound, "dev login is disabled");
    auto const body = parse_body(request);
    auto const email = normalize_email(body.at("email").get<std::string>());
    return json_response(Json{{"token", service_.open_session(email)}, {"email", email}});
  }
  if (is("POST", 2) && seg[0] == "bridge" && seg[1] == "submissions") {
    return json_response(service_.register_submission(wire_from(request)));
  }
  if (is("POST", 2) && seg[0] == "bridge" && seg[1] == "resubmissions") {
    return json_response(service_.receive_resubmission(wire_from(request)));
  }
  if (is("GET", 1) && (seg[0] == "events" || seg[0] == "state")) {
    if (!options_.expose_internals) throw Error(ErrorCode::kNotFound, request.path);
    if (seg[0] == "state") return json_response(service_.state_json());
    return json_response(Json(service_.events()));
  }
  if (is("GET", 1) && seg[0] == "outbox") {
    if (!options_.expose_internals) throw Error(ErrorCode::kNotFound, "outbox is not exposed");
    auto const history = request.query.count("history") != 0;
    return json_response(Json(history ? service_.outbox_history() : service_.drain_outbox()));
  }

  auto const actor = authenticate(request);

  if (is("GET", 1) && seg[0] == "submissions") {
    Json out = Json::array();
    for (auto const& s : service_.submissions()) {
      bool const editor = service_.is_editor(actor, s.journal_id);
      auto view = submission_view(s, actor, editor, service_.blind_mode(s.journal_id));
      bool const related = editor || !view["rounds"].empty() ||
                           s.corresponding_author.email == actor;
      if (related) out.push_back(std::move(view));
    }
    return json_response(out);
  }
  if (seg.size() < 2 || seg[0] != "submissions") throw Error(ErrorCode::kNotFound, request.path);
  auto const& sub = seg[1];

  if (is("GET", 2)) {
    auto const s = service_.submission(sub);
    bool const editor = service_.is_editor(actor, s.journal_id);
    return json_response(submission_view(s, actor, editor, service_.blind_mode(s.journal_id)));
  }
  if (is("POST", 3) && seg[2] == "reviewers") {
    auto const body = parse_body(request);
    auto const r = service_.assign_reviewer(actor, sub, body.at("email").get<std::string>(),
                                            body.value("display_name", ""));
    return json_response(
        Json{{"assignment", r.assignment}, {"delivery", optional_delivery(r.delivery)}});
  }
  if (is("POST", 3) && seg[2] == "invitation") {
    return json_response(
        service_.respond_invitation(actor, sub, parse_body(request).at("accept").get<bool>()));
  }
  if (is("POST", 3) && seg[2] == "reviews") {
    auto const body = parse_body(request);
    std::optional<DecisionKind> recommendation;
    if (body.contains("recommendation") && !body["recommendation"].is_null()) {
      recommendation = decision_from_string(body["recommendation"].get<std::string>());
    }
    return json_response(service_.submit_review(
        actor, sub, body.value("general_feedback", ""), recommendation));
  }
  if (is("POST", 3) && seg[2] == "decision") {
    auto const r =
        service_.record_decision(actor, sub, parse_body(request).get<EditorDecision>());
    return json_response(
        Json{{"submission", r.submission}, {"delivery", optional_delivery(r.delivery)}});
  }
  if (is("POST", 3) && seg[2] == "rounds") {
    return json_response(service_.open_round(actor, sub));
  }
  throw Error(ErrorCode::kNotFound, m + " " + request.path);
}

}  // namespace revbridge::api
