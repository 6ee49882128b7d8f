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

#include "revbridge/doc_service.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "revbridge/crypto.hpp"
#include "revbridge/error.hpp"

namespace revbridge {
namespace {

std::string default_name(std::string const& email) {
  return email.substr(0, email.find('@'));
}

std::uint64_t seed_from(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_atomically(std::filesystem::path const& path, std::string const& data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kBadRequest, "cannot write " + tmp.string());
    out << data;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void to_json(Json& j, ReviewStatus const& s) {
  j = Json{{"journal_id", s.journal_id},
           {"submission_id", s.submission_id},
           {"state", s.state},
           {"label", to_string(s.state)}};
  j["last_decision"] = s.last_decision ? Json(to_string(*s.last_decision)) : Json();
}

void from_json(Json const& j, ReviewStatus& s) {
  j.at("journal_id").get_to(s.journal_id);
  j.at("submission_id").get_to(s.submission_id);
  j.at("state").get_to(s.state);
  if (auto d = j.find("last_decision"); d != j.end() && !d->is_null()) {
    s.last_decision = decision_from_string(d->get<std::string>());
  }
}

void to_json(Json& j, Manuscript const& m) {
  j = Json{{"document_id", m.document_id},
           {"title", m.title},
           {"blocks", m.blocks},
           {"revision", m.revision},
           {"owner", m.owner}};
}

void to_json(Json& j, DocumentView const& v) {
  j = Json(v.manuscript);
  j["viewer_role"] = to_string(v.viewer_role);
  j["blind_mode"] = to_string(v.blind_mode);
  Json comments = Json::array();
  for (auto const& cv : v.comments) {
    Json c = cv.comment;
    c["author_name"] = cv.author_name;
    comments.push_back(std::move(c));
  }
  j["comments"] = std::move(comments);
  j["status"] = v.status ? Json(*v.status) : Json();
}

void to_json(Json& j, DocumentListing const& l) {
  j = Json{{"document_id", l.document_id},
           {"title", l.title},
           {"role", to_string(l.role)},
           {"revision", l.revision}};
  j["status"] = l.status ? Json(*l.status) : Json();
}

DocService::DocService(DocServiceOptions options, Clock& clock,
                       bridge::Transport* review_transport)
    : options_(std::move(options)),
      clock_(clock),
      review_transport_(review_transport),
      rng_(seed_from(options_.seed)) {
  if (options_.bridge_secret.empty()) {
    throw Error(ErrorCode::kEmptySecret, "document service needs a bridge secret");
  }
  validate_journals(options_.journals);
  if (!options_.state_file.empty() && std::filesystem::exists(options_.state_file)) {
    std::ifstream in(options_.state_file, std::ios::binary);
    load_state(Json::parse(in));
  }
  std::unique_lock lock(mu_);
  for (auto const& j : options_.journals) {
    for (auto const& e : j.editors) {
      bool created = false;
      find_or_create_user_locked(e.email, e.display_name, &created);
    }
  }
}

void DocService::set_review_transport(bridge::Transport* transport) {
  std::unique_lock lock(mu_);
  review_transport_ = transport;
}

std::string DocService::next_id(char const* prefix) {
  return std::string(prefix) + "-" + std::to_string(++id_counters_[prefix]);
}

UserIdentity* DocService::find_user_locked(std::string const& email) {
  auto it = users_by_email_.find(email);
  return it == users_by_email_.end() ? nullptr : &users_.at(it->second);
}

UserIdentity& DocService::find_or_create_user_locked(std::string const& raw_email,
                                                     std::string const& display_name,
                                                     bool* created) {
  auto const email = normalize_email(raw_email);
  if (auto* u = find_user_locked(email)) {
    *created = false;
    return *u;
  }
  UserIdentity u{next_id("du"), email,
                 display_name.empty() ? default_name(email) : display_name};
  users_by_email_[email] = u.user_id;
  *created = true;
  return users_.emplace(u.user_id, u).first->second;
}

DocService::DocumentRecord& DocService::document_locked(std::string const& document_id) {
  auto it = documents_.find(document_id);
  if (it == documents_.end()) throw Error(ErrorCode::kNotFound, "no document " + document_id);
  return it->second;
}

DocService::DocumentRecord const& DocService::document_locked(
    std::string const& document_id) const {
  auto it = documents_.find(document_id);
  if (it == documents_.end()) throw Error(ErrorCode::kNotFound, "no document " + document_id);
  return it->second;
}

JournalConfig const& DocService::journal(std::string const& journal_id) const {
  for (auto const& j : options_.journals) {
    if (j.journal_id == journal_id) return j;
  }
  throw Error(ErrorCode::kUnknownJournal, journal_id);
}

// --- Accounts ---------------------------------------------------------------

UserIdentity DocService::register_user(std::string const& email,
                                       std::string const& display_name) {
  std::unique_lock lock(mu_);
  bool created = false;
  auto const& u = find_or_create_user_locked(email, display_name, &created);
  if (created) {
    events_.append(u.user_id, "account.registered", {u.user_id}, clock_.now());
    persist_locked();
  }
  return u;
}

std::optional<UserIdentity> DocService::find_user(std::string const& email) const {
  std::shared_lock lock(mu_);
  auto it = users_by_email_.find(normalize_email(email));
  if (it == users_by_email_.end()) return std::nullopt;
  return users_.at(it->second);
}

std::optional<UserIdentity> DocService::user(std::string const& user_id) const {
  std::shared_lock lock(mu_);
  auto it = users_.find(user_id);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::size_t DocService::account_count() const {
  std::shared_lock lock(mu_);
  return users_.size();
}

DocSession DocService::open_session(std::string const& email) {
  std::unique_lock lock(mu_);
  auto* u = find_user_locked(normalize_email(email));
  if (!u) throw Error(ErrorCode::kUnauthenticated, "unknown account " + email);
  DocSession s{random_hex128(rng_), Viewer{u->user_id, std::nullopt}, std::nullopt};
  sessions_[s.token] = s;
  return s;
}

std::optional<DocSession> DocService::session(std::string const& token) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::optional<RoleKind> DocService::role_of(std::string const& user_id,
                                            std::string const& document_id) const {
  return grants_.role_of(user_id, document_id);
}

// --- Authoring --------------------------------------------------------------

Manuscript DocService::create_document(std::string const& owner_id,
                                       std::string const& title) {
  if (title.empty()) throw Error(ErrorCode::kEmptyTitle, "title must not be empty");
  std::unique_lock lock(mu_);
  if (!users_.count(owner_id)) throw Error(ErrorCode::kNotFound, "no user " + owner_id);
  DocumentRecord rec;
  rec.manuscript.document_id = next_id("doc");
  rec.manuscript.title = title;
  rec.manuscript.owner = owner_id;
  auto const now = clock_.now();
  grants_.grant(owner_id, rec.manuscript.document_id, RoleKind::kAuthor, now);
  auto const id = rec.manuscript.document_id;
  documents_.emplace(id, std::move(rec));
  events_.append(owner_id, "document.created", {id}, now);
  persist_locked();
  return documents_.at(id).manuscript;
}

RoleGrant DocService::invite_collaborator(std::string const& actor_id,
                                          std::string const& document_id,
                                          std::string const& invitee_email,
                                          std::string const& invitee_name) {
  auto const email = normalize_email(invitee_email);
  std::unique_lock lock(mu_);
  document_locked(document_id);
  if (grants_.role_of(actor_id, document_id) != RoleKind::kAuthor) {
    throw Error(ErrorCode::kNotAuthor, "only authors invite collaborators");
  }
  if (auto* existing = find_user_locked(email)) {
    auto const role = grants_.role_of(existing->user_id, document_id);
    if (role && *role != RoleKind::kAuthor) {
      throw Error(ErrorCode::kRoleConflict,
                  email + " already holds " + std::string(to_string(*role)));
    }
  }
  auto const now = clock_.now();
  bool created = false;
  auto const invitee = find_or_create_user_locked(email, invitee_name, &created);
  if (created) events_.append(actor_id, "account.created", {invitee.user_id}, now);
  auto const outcome = grants_.grant(invitee.user_id, document_id, RoleKind::kAuthor, now);
  if (outcome == GrantOutcome::kCreated) {
    events_.append(actor_id, "collaborator.invited", {document_id, invitee.user_id}, now);
  }
  persist_locked();
  auto const role = grants_.grants_for_user(invitee.user_id);
  auto it = std::find_if(role.begin(), role.end(),
                         [&](RoleGrant const& g) { return g.document_id == document_id; });
  return *it;
}

Manuscript DocService::apply_edit(std::string const& actor_id,
                                  std::string const& document_id,
                                  std::uint64_t base_revision,
                                  std::vector<BlockOp> const& ops) {
  std::unique_lock lock(mu_);
  auto& rec = document_locked(document_id);
  auto const role = grants_.role_of(actor_id, document_id);
  if (!role) throw Error(ErrorCode::kNoGrant, "no role on " + document_id);
  if (*role != RoleKind::kAuthor && *role != RoleKind::kAdmin) {
    throw Error(ErrorCode::kNotAuthorized, "reviewers comment, they do not edit");
  }
  if (base_revision != rec.manuscript.revision) {
    throw Error(ErrorCode::kStaleRevision,
                "base " + std::to_string(base_revision) + " but current is " +
                    std::to_string(rec.manuscript.revision));
  }
  rec.manuscript.blocks = apply_block_ops(rec.manuscript.blocks, ops);
  rec.manuscript.revision = base_revision + 1;

  for (auto& c : comments_[document_id]) {
    if (c.orphaned) continue;
    auto const* block = rec.manuscript.find_block(c.anchor.block_id);
    if (!block || c.anchor.end > text_length(block->text)) c.orphaned = true;
  }
  events_.append(actor_id, "document.edited",
                 {document_id, "r" + std::to_string(rec.manuscript.revision)}, clock_.now());
  persist_locked();
  return rec.manuscript;
}

Comment DocService::add_comment(std::string const& actor_id,
                                std::string const& document_id, Anchor const& anchor,
                                std::string const& body,
                                std::optional<Audience> audience) {
  std::unique_lock lock(mu_);
  auto const& rec = document_locked(document_id);
  auto const role = grants_.role_of(actor_id, document_id);
  if (!role) throw Error(ErrorCode::kNoGrant, "no role on " + document_id);
  auto const* block = rec.manuscript.find_block(anchor.block_id);
  if (!block) throw Error(ErrorCode::kBadAnchor, "no block " + anchor.block_id);
  if (anchor.start > anchor.end || anchor.end > text_length(block->text)) {
    throw Error(ErrorCode::kBadAnchor, "offsets outside the block text");
  }
  if (body.empty()) throw Error(ErrorCode::kBadRequest, "comment body is empty");

  Comment c;
  c.comment_id = next_id("cm");
  c.document_id = document_id;
  c.anchor = anchor;
  c.author_id = actor_id;
  c.author_role = *role;
  c.body = body;
  c.visibility =
      *role == RoleKind::kReviewer ? VisibilityState::kPending : VisibilityState::kApproved;
  if (is_editorial(*role)) c.audience = audience.value_or(Audience{});
  c.created_at = clock_.now();
  comments_[document_id].push_back(c);
  events_.append(actor_id, "comment.added", {document_id, c.comment_id}, c.created_at);
  persist_locked();
  return c;
}

Comment DocService::approve_comment(std::string const& actor_id,
                                    std::string const& document_id,
                                    std::string const& comment_id) {
  std::unique_lock lock(mu_);
  document_locked(document_id);
  auto const role = grants_.role_of(actor_id, document_id);
  if (!role || !is_editorial(*role)) {
    throw Error(ErrorCode::kNotEditor, "only editors approve comments");
  }
  auto& list = comments_[document_id];
  auto it = std::find_if(list.begin(), list.end(),
                         [&](Comment const& c) { return c.comment_id == comment_id; });
  if (it == list.end()) throw Error(ErrorCode::kNotFound, "no comment " + comment_id);
  if (it->visibility == VisibilityState::kApproved) return *it;
  *it = revbridge::approve_comment(*role, *it);
  events_.append(actor_id, "comment.approved", {document_id, comment_id}, clock_.now());
  persist_locked();
  return *it;
}

DocumentView DocService::get_document(Viewer const& viewer,
                                      std::string const& document_id) const {
  std::shared_lock lock(mu_);
  auto const& rec = document_locked(document_id);
  if (viewer.scope_document && *viewer.scope_document != document_id) {
    throw Error(ErrorCode::kNoGrant, "session is scoped to another document");
  }
  auto const role = grants_.role_of(viewer.user_id, document_id);
  if (!role) throw Error(ErrorCode::kNoGrant, "no role on " + document_id);

  DocumentView view;
  view.manuscript = rec.manuscript;
  view.viewer_role = *role;
  view.blind_mode = rec.blind_mode;
  view.status = rec.status;
  if (auto it = comments_.find(document_id); it != comments_.end()) {
    for (auto const& c : it->second) {
      if (!comment_visible(*role, viewer.user_id, c)) continue;
      auto const& author = users_.at(c.author_id);
      std::string name = author.display_name;
      if (c.author_id != viewer.user_id) {
        auto const num = rec.reviewer_numbers.find(c.author_id);
        name = display_identity(*role, c.author_role, rec.blind_mode, name,
                                num == rec.reviewer_numbers.end() ? 1 : num->second);
      }
      view.comments.push_back(CommentView{c, std::move(name)});
    }
  }
  return view;
}

std::vector<DocumentListing> DocService::list_documents(std::string const& user_id) const {
  std::shared_lock lock(mu_);
  std::vector<DocumentListing> out;
  for (auto const& g : grants_.grants_for_user(user_id)) {
    auto const& rec = document_locked(g.document_id);
    out.push_back(DocumentListing{g.document_id, rec.manuscript.title, g.role,
                                  rec.manuscript.revision, rec.status});
  }
  return out;
}

std::vector<Comment> DocService::comments(std::string const& document_id) const {
  std::shared_lock lock(mu_);
  auto it = comments_.find(document_id);
  return it == comments_.end() ? std::vector<Comment>{} : it->second;
}

Snapshot DocService::export_snapshot(std::string const& document_id) const {
  std::shared_lock lock(mu_);
  return make_snapshot(document_locked(document_id).manuscript);
}

Manuscript DocService::import_manuscript(std::string const& owner_id,
                                         std::string_view canonical_bytes) {
  auto parsed = parse_canonical(canonical_bytes);
  std::unique_lock lock(mu_);
  if (!users_.count(owner_id)) throw Error(ErrorCode::kNotFound, "no user " + owner_id);
  DocumentRecord rec;
  rec.manuscript.document_id = next_id("doc");
  rec.manuscript.title = std::move(parsed.title);
  rec.manuscript.blocks = std::move(parsed.blocks);
  rec.manuscript.owner = owner_id;
  auto const id = rec.manuscript.document_id;
  auto const now = clock_.now();
  grants_.grant(owner_id, id, RoleKind::kAuthor, now);
  documents_.emplace(id, std::move(rec));
  events_.append(owner_id, "document.imported", {id}, now);
  persist_locked();
  return documents_.at(id).manuscript;
}

// --- Outbound bridge --------------------------------------------------------

SubmitResult DocService::deliver_submission(bridge::BridgeMessage const& message) {
  bridge::Transport* transport = nullptr;
  {
    std::shared_lock lock(mu_);
    transport = review_transport_;
  }
  if (!transport) {
    throw Error(ErrorCode::kEndpointUnreachable, "no review service configured");
  }
  SubmitResult result;
  result.delivery = bridge::deliver(message, *transport, options_.retry, clock_);
  result.delivery.raise_if_failed();
  auto const ack = result.delivery.response_json();
  if (!ack.is_object() || !ack.contains("submission_id") || !ack.contains("state")) {
    throw Error(ErrorCode::kProtocolError, "malformed acknowledgement");
  }
  result.submission_id = ack["submission_id"].get<std::string>();
  result.state = ack["state"].get<SubmissionState>();
  result.snapshot_hash = message.payload.at("snapshot_hash").get<std::string>();
  return result;
}

SubmitResult DocService::submit_document(std::string const& actor_id,
                                         std::string const& document_id,
                                         std::string const& journal_id) {
  bridge::BridgeMessage message;
  {
    std::unique_lock lock(mu_);
    auto const& rec = document_locked(document_id);
    if (grants_.role_of(actor_id, document_id) != RoleKind::kAuthor) {
      throw Error(ErrorCode::kNotAuthor, "only authors submit");
    }
    journal(journal_id);
    if (rec.status) {
      throw Error(ErrorCode::kIllegalTransition, document_id + " is already submitted");
    }
    auto const& author = users_.at(actor_id);
    Json co_authors = Json::array();
    for (auto const& g : grants_.grants_for_document(document_id)) {
      if (g.role == RoleKind::kAuthor && g.user_id != actor_id) {
        co_authors.push_back(users_.at(g.user_id).email);
      }
    }
    auto const snapshot = make_snapshot(rec.manuscript);
    message = bridge::sign_message(
        options_.bridge_secret,
        bridge::make_message(bridge::MessageKind::kSubmitDocument,
                             Json{{"document_id", document_id},
                                  {"journal_id", journal_id},
                                  {"title", rec.manuscript.title},
                                  {"snapshot_hash", snapshot.content_hash},
                                  {"corresponding_author_email", author.email},
                                  {"author_name", author.display_name},
                                  {"co_author_emails", co_authors}},
                             clock_.now()));
  }

  auto result = deliver_submission(message);

  std::unique_lock lock(mu_);
  auto& rec = document_locked(document_id);
  if (rec.status && rec.status->submission_id == result.submission_id) return result;
  auto const& j = journal(journal_id);
  rec.status = ReviewStatus{journal_id, result.submission_id, result.state, std::nullopt};
  rec.blind_mode = j.blind_mode;
  auto const now = clock_.now();
  for (auto const& e : j.editors) {
    auto const* editor = find_user_locked(e.email);
    if (editor && !grants_.role_of(editor->user_id, document_id)) {
      grants_.grant(editor->user_id, document_id, RoleKind::kAdmin, now);
    }
  }
  events_.append(actor_id, "submission.sent", {document_id, result.submission_id}, now);
  persist_locked();
  return result;
}

SubmitResult DocService::resubmit_document(std::string const& actor_id,
                                           std::string const& document_id) {
  bridge::BridgeMessage message;
  {
    std::unique_lock lock(mu_);
    auto const& rec = document_locked(document_id);
    if (grants_.role_of(actor_id, document_id) != RoleKind::kAuthor) {
      throw Error(ErrorCode::kNotAuthor, "only authors resubmit");
    }
    if (!rec.status || rec.status->state.phase != SubmissionPhase::kRevising) {
      throw Error(ErrorCode::kIllegalTransition, document_id + " is not awaiting a revision");
    }
    auto const snapshot = make_snapshot(rec.manuscript);
    message = bridge::sign_message(
        options_.bridge_secret,
        bridge::make_message(bridge::MessageKind::kResubmission,
                             Json{{"submission_id", rec.status->submission_id},
                                  {"document_id", document_id},
                                  {"round_index", rec.status->state.round_index + 1},
                                  {"snapshot_hash", snapshot.content_hash}},
                             clock_.now()));
  }

  auto result = deliver_submission(message);

  std::unique_lock lock(mu_);
  auto& rec = document_locked(document_id);
  if (rec.status->state == result.state) return result;
  rec.status->state = result.state;
  events_.append(actor_id, "resubmission.sent", {document_id, result.submission_id},
                 clock_.now());
  persist_locked();
  return result;
}

// --- Inbound bridge ---------------------------------------------------------

Json DocService::ensure_account(bridge::WireRequest const& request) {
  auto const message = bridge::parse_wire(options_.bridge_secret, request,
                                          bridge::MessageKind::kReviewerAssigned);
  std::unique_lock lock(mu_);
  if (auto it = processed_.find(message.idempotency_key); it != processed_.end()) {
    Json ack = it->second;
    ack["duplicate"] = true;
    return ack;
  }
  auto const& p = message.payload;
  std::string email, name, document_id, role_name;
  int reviewer_number = 1;
  try {
    email = normalize_email(p.at("email").get<std::string>());
    name = p.value("display_name", "");
    document_id = p.at("document_id").get<std::string>();
    role_name = p.value("role", "Reviewer");
    reviewer_number = p.value("reviewer_number", 1);
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kBadRequest, e.what());
  }
  auto const role = map_role(ServiceSide::kReviewService, role_from_string(role_name));
  if (role == RoleKind::kAdmin) {
    throw Error(ErrorCode::kBadRole, "editor accounts are configured, not provisioned");
  }
  auto& rec = document_locked(document_id);
  if (auto* existing = find_user_locked(email)) {
    auto const held = grants_.role_of(existing->user_id, document_id);
    if (held && *held != role) {
      throw Error(ErrorCode::kRoleConflict,
                  email + " already holds " + std::string(to_string(*held)));
    }
  }

  auto const now = clock_.now();
  bool created = false;
  auto const user = find_or_create_user_locked(email, name, &created);
  if (created) events_.append(kBridgeActor, "account.created", {user.user_id}, now);
  grants_.grant(user.user_id, document_id, role, now);
  if (role == RoleKind::kReviewer) rec.reviewer_numbers[user.user_id] = reviewer_number;
  events_.append(kBridgeActor, "account.ensured", {user.user_id, document_id}, now);

  Json ack{{"user_id", user.user_id},
           {"document_id", document_id},
           {"role", to_string(role)},
           {"created", created}};
  processed_[message.idempotency_key] = ack;
  persist_locked();
  ack["duplicate"] = false;
  return ack;
}

Json DocService::relay_decision(bridge::WireRequest const& request) {
  auto const message = bridge::parse_wire(options_.bridge_secret, request,
                                          bridge::MessageKind::kDecisionRelayed);
  std::unique_lock lock(mu_);
  if (auto it = processed_.find(message.idempotency_key); it != processed_.end()) {
    Json ack = it->second;
    ack["duplicate"] = true;
    return ack;
  }
  auto const& p = message.payload;
  ReviewStatus status;
  std::string document_id;
  try {
    document_id = p.at("document_id").get<std::string>();
    status.submission_id = p.at("submission_id").get<std::string>();
    status.journal_id = p.value("journal_id", "");
    status.state = p.at("state").get<SubmissionState>();
    status.last_decision = decision_from_string(p.at("decision").get<std::string>());
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kBadRequest, e.what());
  }
  auto& rec = document_locked(document_id);
  if (rec.status && status.journal_id.empty()) status.journal_id = rec.status->journal_id;
  rec.status = status;
  events_.append(kBridgeActor, "decision.relayed", {document_id, status.submission_id},
                 clock_.now());
  Json ack{{"document_id", document_id}, {"state", status.state}};
  processed_[message.idempotency_key] = ack;
  persist_locked();
  ack["duplicate"] = false;
  return ack;
}

DocSession DocService::consume_sso_token(std::string const& token_text) {
  auto const token = bridge::SsoToken::decode(token_text);
  if (!bridge::verify_sso_token(options_.bridge_secret, token)) {
    throw Error(ErrorCode::kBadSignature, "token signature mismatch");
  }
  auto const now = clock_.now();
  if (bridge::sso_expired(token.claims, now)) {
    throw Error(ErrorCode::kTokenExpired, "token expired");
  }
  std::unique_lock lock(mu_);
  if (spent_nonces_.count(token.claims.nonce)) {
    throw Error(ErrorCode::kTokenReplayed, "token already used");
  }
  auto const* user = find_user_locked(normalize_email(token.claims.email));
  if (!user) throw Error(ErrorCode::kNoGrant, "no account for " + token.claims.email);
  document_locked(token.claims.document_id);
  if (!grants_.role_of(user->user_id, token.claims.document_id)) {
    throw Error(ErrorCode::kNoGrant, "no role on " + token.claims.document_id);
  }
  spent_nonces_.insert(token.claims.nonce);
  DocSession s{random_hex128(rng_), Viewer{user->user_id, token.claims.document_id},
               token.claims.role};
  sessions_[s.token] = s;
  events_.append(user->user_id, "sso.consumed", {token.claims.document_id}, now);
  persist_locked();
  return s;
}

// --- Persistence ------------------------------------------------------------

Json DocService::state_json_locked() const {
  Json users = Json::array();
  for (auto const& [id, u] : users_) users.push_back(u);
  Json documents = Json::array();
  for (auto const& [id, rec] : documents_) {
    Json reviewer_numbers = Json::object();
    for (auto const& [uid, n] : rec.reviewer_numbers) reviewer_numbers[uid] = n;
    documents.push_back(Json{{"manuscript", rec.manuscript},
                             {"status", rec.status ? Json(*rec.status) : Json()},
                             {"blind_mode", to_string(rec.blind_mode)},
                             {"reviewer_numbers", reviewer_numbers}});
  }
  Json comments = Json::array();
  for (auto const& [doc, list] : comments_) {
    for (auto const& c : list) comments.push_back(c);
  }
  Json processed = Json::object();
  for (auto const& [key, ack] : processed_) processed[key] = ack;
  return Json{{"id_counters", id_counters_},
              {"users", users},
              {"documents", documents},
              {"grants", grants_.to_json()},
              {"comments", comments},
              {"spent_nonces", spent_nonces_},
              {"processed", processed},
              {"events", events_.to_json()}};
}

Json DocService::state_json() const {
  std::shared_lock lock(mu_);
  return state_json_locked();
}

void DocService::persist_locked() const {
  if (options_.state_file.empty()) return;
  write_atomically(options_.state_file, state_json_locked().dump(1));
}

void DocService::load_state(Json const& state) {
  std::unique_lock lock(mu_);
  id_counters_ = state.at("id_counters").get<std::map<std::string, std::uint64_t>>();
  users_.clear();
  users_by_email_.clear();
  for (auto const& ju : state.at("users")) {
    auto u = ju.get<UserIdentity>();
    users_by_email_[u.email] = u.user_id;
    users_[u.user_id] = u;
  }
  documents_.clear();
  for (auto const& jd : state.at("documents")) {
    DocumentRecord rec;
    auto const& m = jd.at("manuscript");
    m.at("document_id").get_to(rec.manuscript.document_id);
    m.at("title").get_to(rec.manuscript.title);
    m.at("blocks").get_to(rec.manuscript.blocks);
    m.at("revision").get_to(rec.manuscript.revision);
    m.at("owner").get_to(rec.manuscript.owner);
    if (!jd.at("status").is_null()) rec.status = jd.at("status").get<ReviewStatus>();
    rec.blind_mode = blind_mode_from_string(jd.at("blind_mode").get<std::string>());
    rec.reviewer_numbers = jd.at("reviewer_numbers").get<std::map<std::string, int>>();
    documents_[rec.manuscript.document_id] = std::move(rec);
  }
  grants_.restore(state.at("grants"));
  comments_.clear();
  for (auto const& jc : state.at("comments")) {
    auto c = jc.get<Comment>();
    comments_[c.document_id].push_back(std::move(c));
  }
  spent_nonces_ = state.at("spent_nonces").get<std::set<std::string>>();
  processed_.clear();
  for (auto const& [key, ack] : state.at("processed").items()) processed_[key] = ack;
  events_.restore(state.at("events"));
}

}  // namespace revbridge
