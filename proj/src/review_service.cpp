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

#include "revbridge/review_service.hpp"

#include <algorithm>
#include <fstream>

#include "revbridge/crypto.hpp"
#include "revbridge/error.hpp"
#include "revbridge/permissions.hpp"

namespace revbridge {
namespace {

std::uint64_t seed_from(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

constexpr std::pair<OutboxMessage::Kind, std::string_view> kOutboxKinds[] = {
    {OutboxMessage::Kind::kReviewerInvited, "ReviewerInvited"},
    {OutboxMessage::Kind::kFeedbackToAuthors, "FeedbackToAuthors"},
    {OutboxMessage::Kind::kDecisionNotice, "DecisionNotice"},
};

}  // namespace

ReviewRound* Submission::current_round() {
  return rounds.empty() ? nullptr : &rounds.back();
}

ReviewRound const* Submission::current_round() const {
  return rounds.empty() ? nullptr : &rounds.back();
}

std::string_view to_string(OutboxMessage::Kind kind) {
  for (auto const& [k, name] : kOutboxKinds) {
    if (k == kind) return name;
  }
  return "?";
}

void to_json(Json& j, Submission const& s) {
  j = Json{{"submission_id", s.submission_id},
           {"journal_id", s.journal_id},
           {"remote_document_id", s.remote_document_id},
           {"title", s.title},
           {"corresponding_author", s.corresponding_author},
           {"co_author_emails", s.co_author_emails},
           {"state", s.state},
           {"label", to_string(s.state)},
           {"rounds", s.rounds},
           {"pending_snapshot_hash", s.pending_snapshot_hash},
           {"created_at", s.created_at}};
}

void from_json(Json const& j, Submission& s) {
  j.at("submission_id").get_to(s.submission_id);
  j.at("journal_id").get_to(s.journal_id);
  j.at("remote_document_id").get_to(s.remote_document_id);
  j.at("title").get_to(s.title);
  j.at("corresponding_author").get_to(s.corresponding_author);
  j.at("co_author_emails").get_to(s.co_author_emails);
  j.at("state").get_to(s.state);
  j.at("rounds").get_to(s.rounds);
  j.at("pending_snapshot_hash").get_to(s.pending_snapshot_hash);
  j.at("created_at").get_to(s.created_at);
}

void to_json(Json& j, OutboxMessage const& m) {
  j = Json{{"message_id", m.message_id},
           {"kind", to_string(m.kind)},
           {"recipient_email", m.recipient_email},
           {"subject", m.subject},
           {"body", m.body},
           {"submission_id", m.submission_id},
           {"sso_token", m.sso_token},
           {"created_at", m.created_at}};
}

void from_json(Json const& j, OutboxMessage& m) {
  j.at("message_id").get_to(m.message_id);
  auto const kind = j.at("kind").get<std::string>();
  for (auto const& [k, name] : kOutboxKinds) {
    if (name == kind) m.kind = k;
  }
  j.at("recipient_email").get_to(m.recipient_email);
  j.at("subject").get_to(m.subject);
  j.at("body").get_to(m.body);
  j.at("submission_id").get_to(m.submission_id);
  j.at("sso_token").get_to(m.sso_token);
  j.at("created_at").get_to(m.created_at);
}

void to_json(Json& j, JournalSummary const& s) {
  j = Json{{"journal_id", s.journal_id},
           {"name", s.name},
           {"blind_mode", to_string(s.blind_mode)}};
}

ReviewService::ReviewService(ReviewServiceOptions options, Clock& clock,
                             bridge::Transport* doc_transport)
    : options_(std::move(options)),
      clock_(clock),
      doc_transport_(doc_transport),
      rng_(seed_from(options_.seed)) {
  if (options_.bridge_secret.empty()) {
    throw Error(ErrorCode::kEmptySecret, "review service needs a bridge secret");
  }
  validate_journals(options_.journals);
  std::sort(options_.journals.begin(), options_.journals.end(),
            [](auto const& a, auto const& b) { return a.journal_id < b.journal_id; });
  if (!options_.state_file.empty() && std::filesystem::exists(options_.state_file)) {
    std::ifstream in(options_.state_file, std::ios::binary);
    load_state(Json::parse(in));
  }
  std::lock_guard lock(mu_);
  for (auto const& j : options_.journals) {
    for (auto const& e : j.editors) {
      if (!accounts_.count(e.email)) {
        accounts_[e.email] = UserIdentity{next_id("ru"), e.email, e.display_name};
      }
    }
  }
}

void ReviewService::set_doc_transport(bridge::Transport* transport) {
  std::lock_guard lock(mu_);
  doc_transport_ = transport;
}

std::string ReviewService::next_id(char const* prefix) {
  return std::string(prefix) + "-" + std::to_string(++id_counters_[prefix]);
}

std::vector<JournalSummary> ReviewService::list_journals() const {
  std::vector<JournalSummary> out;
  for (auto const& j : options_.journals) {
    out.push_back(JournalSummary{j.journal_id, j.name, j.blind_mode});
  }
  return out;
}

JournalConfig const& ReviewService::journal_locked(std::string const& journal_id) const {
  for (auto const& j : options_.journals) {
    if (j.journal_id == journal_id) return j;
  }
  throw Error(ErrorCode::kUnknownJournal, journal_id);
}

bool ReviewService::is_editor(std::string const& email,
                              std::string const& journal_id) const {
  std::lock_guard lock(mu_);
  auto const& j = journal_locked(journal_id);
  return std::any_of(j.editors.begin(), j.editors.end(),
                     [&](EditorConfig const& e) { return e.email == email; });
}

BlindMode ReviewService::blind_mode(std::string const& journal_id) const {
  std::lock_guard lock(mu_);
  return journal_locked(journal_id).blind_mode;
}

Submission& ReviewService::submission_locked(std::string const& submission_id) {
  auto it = submissions_.find(submission_id);
  if (it == submissions_.end()) {
    throw Error(ErrorCode::kNotFound, "no submission " + submission_id);
  }
  return it->second;
}

void ReviewService::require_editor_locked(std::string const& email,
                                          Submission const& s) const {
  auto const& j = journal_locked(s.journal_id);
  bool const editor = std::any_of(j.editors.begin(), j.editors.end(),
                                  [&](EditorConfig const& e) { return e.email == email; });
  if (!editor) throw Error(ErrorCode::kNotEditor, email + " does not edit " + j.journal_id);
}

UserIdentity const& ReviewService::find_or_create_account_locked(std::string const& email,
                                                                 std::string const& name,
                                                                 std::string const& actor) {
  if (auto it = accounts_.find(email); it != accounts_.end()) return it->second;
  UserIdentity u{next_id("ru"), email, name.empty() ? email.substr(0, email.find('@')) : name};
  events_.append(actor, "account.created", {u.user_id}, clock_.now());
  return accounts_.emplace(email, std::move(u)).first->second;
}

std::string ReviewService::open_session(std::string const& raw_email) {
  auto const email = normalize_email(raw_email);
  std::lock_guard lock(mu_);
  if (!accounts_.count(email)) throw Error(ErrorCode::kUnauthenticated, "unknown account " + email);
  auto token = random_hex128(rng_);
  sessions_[token] = email;
  return token;
}

std::optional<std::string> ReviewService::session_email(std::string const& token) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

bridge::BridgeMessage ReviewService::sign(bridge::MessageKind kind, Json payload) const {
  return bridge::sign_message(options_.bridge_secret,
                              bridge::make_message(kind, std::move(payload), clock_.now()));
}

std::optional<bridge::DeliveryReport> ReviewService::send(
    bridge::BridgeMessage const& message) {
  bridge::Transport* transport = nullptr;
  {
    std::lock_guard lock(mu_);
    transport = doc_transport_;
    if (!transport) {
      pending_.push_back(message);
      persist_locked();
      return std::nullopt;
    }
  }
  auto report = bridge::deliver(message, *transport, options_.retry, clock_);
  if (report.outcome == bridge::DeliveryReport::Outcome::kExhausted) {
    std::lock_guard lock(mu_);
    pending_.push_back(message);
    persist_locked();
  }
  return report;
}

std::vector<bridge::DeliveryReport> ReviewService::flush_pending() {
  std::deque<bridge::BridgeMessage> batch;
  {
    std::lock_guard lock(mu_);
    if (!doc_transport_) return {};
    batch.swap(pending_);
  }
  std::vector<bridge::DeliveryReport> reports;
  for (auto const& m : batch) {
    if (auto r = send(m)) reports.push_back(*r);
  }
  std::lock_guard lock(mu_);
  persist_locked();
  return reports;
}

std::size_t ReviewService::pending_count() const {
  std::lock_guard lock(mu_);
  return pending_.size();
}

// --- Inbound bridge ---------------------------------------------------------

Json ReviewService::register_submission(bridge::WireRequest const& request) {
  auto const message = bridge::parse_wire(options_.bridge_secret, request,
                                          bridge::MessageKind::kSubmitDocument);
  std::lock_guard lock(mu_);
  if (auto it = processed_.find(message.idempotency_key); it != processed_.end()) {
    Json ack = it->second;
    ack["duplicate"] = true;
    return ack;
  }
  auto const& p = message.payload;
  Submission s;
  std::string email, author_name;
  try {
    s.journal_id = p.at("journal_id").get<std::string>();
    s.remote_document_id = p.at("document_id").get<std::string>();
    s.title = p.value("title", "");
    s.pending_snapshot_hash = p.at("snapshot_hash").get<std::string>();
    email = normalize_email(p.at("corresponding_author_email").get<std::string>());
    author_name = p.value("author_name", "");
    for (auto const& e : p.value("co_author_emails", std::vector<std::string>{})) {
      s.co_author_emails.push_back(normalize_email(e));
    }
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kBadRequest, e.what());
  }
  journal_locked(s.journal_id);

  s.corresponding_author = find_or_create_account_locked(email, author_name, kBridgeActor);
  s.submission_id = next_id("sub");
  s.state = advance_submission(SubmissionState::draft(), SubmissionEvent::submit());
  s.created_at = clock_.now();
  events_.append(kBridgeActor, "submission.registered",
                 {s.submission_id, s.corresponding_author.user_id}, s.created_at);

  Json ack{{"submission_id", s.submission_id},
           {"author_user_id", s.corresponding_author.user_id},
           {"state", s.state}};
  submissions_.emplace(s.submission_id, std::move(s));
  processed_[message.idempotency_key] = ack;
  persist_locked();
  ack["duplicate"] = false;
  return ack;
}

Json ReviewService::receive_resubmission(bridge::WireRequest const& request) {
  auto const message = bridge::parse_wire(options_.bridge_secret, request,
                                          bridge::MessageKind::kResubmission);
  std::lock_guard lock(mu_);
  if (auto it = processed_.find(message.idempotency_key); it != processed_.end()) {
    Json ack = it->second;
    ack["duplicate"] = true;
    return ack;
  }
  auto const& p = message.payload;
  std::string submission_id, snapshot_hash;
  int round_index = 0;
  try {
    submission_id = p.at("submission_id").get<std::string>();
    snapshot_hash = p.at("snapshot_hash").get<std::string>();
    round_index = p.at("round_index").get<int>();
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kBadRequest, e.what());
  }
  auto& s = submission_locked(submission_id);
  auto const next = advance_submission(s.state, SubmissionEvent::resubmit());
  if (round_index != s.state.round_index + 1) {
    throw Error(ErrorCode::kBadRequest, "resubmission names round " +
                                            std::to_string(round_index) + ", expected " +
                                            std::to_string(s.state.round_index + 1));
  }
  if (round_index > journal_locked(s.journal_id).max_rounds) {
    throw Error(ErrorCode::kRoundLimitExceeded,
                "round " + std::to_string(round_index) + " exceeds the journal limit");
  }
  s.state = next;
  s.pending_snapshot_hash = snapshot_hash;
  events_.append(kBridgeActor, "resubmission.received", {s.submission_id}, clock_.now());

  Json ack{{"submission_id", s.submission_id},
           {"state", s.state},
           {"next_round", round_index}};
  processed_[message.idempotency_key] = ack;
  persist_locked();
  ack["duplicate"] = false;
  return ack;
}

// --- Editorial workflow -----------------------------------------------------

void ReviewService::open_round_locked(Submission& s, std::string const& actor) {
  if (s.state.phase == SubmissionPhase::kSubmitted &&
      s.state.round_index + 1 > journal_locked(s.journal_id).max_rounds) {
    throw Error(ErrorCode::kRoundLimitExceeded, "no rounds left for " + s.submission_id);
  }
  s.state = advance_submission(s.state, SubmissionEvent::open_round());
  ReviewRound round;
  round.round_index = s.state.round_index;
  round.opened_at = clock_.now();
  round.snapshot_hash = s.pending_snapshot_hash;
  s.rounds.push_back(std::move(round));
  events_.append(actor, "round.opened",
                 {s.submission_id, "round-" + std::to_string(s.state.round_index)},
                 clock_.now());
}

Submission ReviewService::open_round(std::string const& editor_email,
                                     std::string const& submission_id) {
  auto const email = normalize_email(editor_email);
  std::lock_guard lock(mu_);
  auto& s = submission_locked(submission_id);
  require_editor_locked(email, s);
  open_round_locked(s, accounts_.at(email).user_id);
  persist_locked();
  return s;
}

AssignResult ReviewService::assign_reviewer(std::string const& editor_email,
                                            std::string const& submission_id,
                                            std::string const& reviewer_email,
                                            std::string const& reviewer_name) {
  auto const editor = normalize_email(editor_email);
  auto const reviewer = normalize_email(reviewer_email);
  AssignResult result;
  bridge::BridgeMessage message;
  {
    std::lock_guard lock(mu_);
    auto& s = submission_locked(submission_id);
    require_editor_locked(editor, s);
    if (s.state.phase != SubmissionPhase::kSubmitted &&
        s.state.phase != SubmissionPhase::kUnderReview) {
      throw Error(ErrorCode::kIllegalTransition,
                  "cannot assign reviewers while " + to_string(s.state));
    }
    if (reviewer == s.corresponding_author.email ||
        std::find(s.co_author_emails.begin(), s.co_author_emails.end(), reviewer) !=
            s.co_author_emails.end()) {
      throw Error(ErrorCode::kAuthorReviewerConflict, reviewer + " is an author");
    }
    if (s.state.phase == SubmissionPhase::kUnderReview) {
      auto const& assignments = s.current_round()->assignments;
      if (std::any_of(assignments.begin(), assignments.end(),
                      [&](auto const& a) { return a.reviewer.email == reviewer; })) {
        throw Error(ErrorCode::kDuplicateReviewer, reviewer + " already assigned");
      }
    }
    auto const editor_id = accounts_.at(editor).user_id;
    if (s.state.phase == SubmissionPhase::kSubmitted) open_round_locked(s, editor_id);

    auto& round = *s.current_round();
    ReviewAssignment a;
    a.assignment_id = next_id("asg");
    a.submission_id = s.submission_id;
    a.round_index = round.round_index;
    a.reviewer = find_or_create_account_locked(reviewer, reviewer_name, editor_id);
    a.reviewer_number = static_cast<int>(round.assignments.size()) + 1;
    round.assignments.push_back(a);
    auto const now = clock_.now();
    events_.append(editor_id, "reviewer.assigned", {s.submission_id, a.assignment_id}, now);

    auto const token = bridge::make_sso_token(options_.bridge_secret, reviewer,
                                              s.remote_document_id, RoleKind::kReviewer,
                                              options_.sso_ttl, clock_, rng_);
    OutboxMessage invite;
    invite.kind = OutboxMessage::Kind::kReviewerInvited;
    invite.recipient_email = reviewer;
    invite.submission_id = s.submission_id;
    invite.subject = "Invitation to review \"" + s.title + "\"";
    invite.sso_token = token.encode();
    invite.body = "You have been invited to review \"" + s.title + "\" (round " +
                  std::to_string(round.round_index) + ").\nOpen the manuscript: " +
                  options_.doc_base_url + "/sso?token=" + invite.sso_token + "\n";
    push_outbox_locked(std::move(invite));

    message = sign(bridge::MessageKind::kReviewerAssigned,
                   Json{{"submission_id", s.submission_id},
                        {"document_id", s.remote_document_id},
                        {"round_index", round.round_index},
                        {"email", reviewer},
                        {"display_name", a.reviewer.display_name},
                        {"role", to_string(RoleKind::kReviewer)},
                        {"reviewer_number", a.reviewer_number}});
    result.assignment = a;
    persist_locked();
  }
  result.delivery = send(message);
  return result;
}

ReviewAssignment& ReviewService::assignment_locked(Submission& s,
                                                   std::string const& reviewer_email) {
  auto* round = s.current_round();
  if (round) {
    for (auto& a : round->assignments) {
      if (a.reviewer.email == reviewer_email) return a;
    }
  }
  throw Error(ErrorCode::kNotFound,
              reviewer_email + " has no assignment in the current round");
}

ReviewAssignment ReviewService::respond_invitation(std::string const& reviewer_email,
                                                   std::string const& submission_id,
                                                   bool accept) {
  auto const email = normalize_email(reviewer_email);
  std::lock_guard lock(mu_);
  auto& s = submission_locked(submission_id);
  auto& a = assignment_locked(s, email);
  a.state = advance_assignment(
      a.state, accept ? AssignmentEvent::kAccept : AssignmentEvent::kDecline);
  events_.append(a.reviewer.user_id, accept ? "invitation.accepted" : "invitation.declined",
                 {s.submission_id, a.assignment_id}, clock_.now());
  persist_locked();
  return a;
}

ReviewAssignment ReviewService::submit_review(std::string const& reviewer_email,
                                              std::string const& submission_id,
                                              std::string const& general_feedback,
                                              std::optional<DecisionKind> recommendation) {
  auto const email = normalize_email(reviewer_email);
  std::lock_guard lock(mu_);
  auto& s = submission_locked(submission_id);
  auto& a = assignment_locked(s, email);
  if (!s.current_round()->open()) {
    throw Error(ErrorCode::kIllegalTransition, "round is already decided");
  }
  a.state = advance_assignment(a.state, AssignmentEvent::kSubmitReview, general_feedback);
  a.general_feedback = general_feedback;
  a.recommendation = recommendation.value_or(DecisionKind::kRequestRevision);
  events_.append(a.reviewer.user_id, "review.submitted", {s.submission_id, a.assignment_id},
                 clock_.now());
  persist_locked();
  return a;
}

DecisionResult ReviewService::record_decision(std::string const& editor_email,
                                              std::string const& submission_id,
                                              EditorDecision const& decision) {
  auto const editor = normalize_email(editor_email);
  DecisionResult result;
  bridge::BridgeMessage message;
  {
    std::lock_guard lock(mu_);
    auto& s = submission_locked(submission_id);
    require_editor_locked(editor, s);
    auto const next = advance_submission(s.state, SubmissionEvent::decide(decision));
    auto& round = *s.current_round();
    if (!decision_allowed(round)) {
      throw Error(ErrorCode::kIllegalTransition, "round already decided");
    }
    s.state = next;
    round.closed_by = decision;
    auto const now = clock_.now();
    auto const editor_id = accounts_.at(editor).user_id;
    events_.append(editor_id, "decision.recorded",
                   {s.submission_id, std::string(to_string(decision.kind))}, now);

    auto const mode = journal_locked(s.journal_id).blind_mode;
    OutboxMessage notice;
    notice.kind = OutboxMessage::Kind::kDecisionNotice;
    notice.recipient_email = s.corresponding_author.email;
    notice.submission_id = s.submission_id;
    notice.subject = "Decision on \"" + s.title + "\"";
    notice.body = "Decision: " + std::string(to_string(decision.kind)) + "\n";
    if (!decision.rationale.empty()) notice.body += "Rationale: " + decision.rationale + "\n";
    push_outbox_locked(std::move(notice));

    OutboxMessage feedback;
    feedback.kind = OutboxMessage::Kind::kFeedbackToAuthors;
    feedback.recipient_email = s.corresponding_author.email;
    feedback.submission_id = s.submission_id;
    feedback.subject = "Reviewer feedback on \"" + s.title + "\" (round " +
                       std::to_string(round.round_index) + ")";
    for (auto const& a : round.assignments) {
      if (a.state != AssignmentState::kSubmitted) continue;
      feedback.body += display_identity(RoleKind::kAuthor, RoleKind::kReviewer, mode,
                                        a.reviewer.display_name, a.reviewer_number) +
                       " (recommends " + std::string(to_string(*a.recommendation)) +
                       "):\n" + *a.general_feedback + "\n\n";
    }
    if (feedback.body.empty()) feedback.body = "No reviewer feedback was submitted.\n";
    push_outbox_locked(std::move(feedback));

    message = sign(bridge::MessageKind::kDecisionRelayed,
                   Json{{"submission_id", s.submission_id},
                        {"document_id", s.remote_document_id},
                        {"journal_id", s.journal_id},
                        {"round_index", round.round_index},
                        {"decision", to_string(decision.kind)},
                        {"state", s.state}});
    result.submission = s;
    persist_locked();
  }
  result.delivery = send(message);
  return result;
}

Submission ReviewService::submission(std::string const& submission_id) const {
  std::lock_guard lock(mu_);
  auto it = submissions_.find(submission_id);
  if (it == submissions_.end()) throw Error(ErrorCode::kNotFound, "no submission " + submission_id);
  return it->second;
}

std::vector<Submission> ReviewService::submissions() const {
  std::lock_guard lock(mu_);
  std::vector<Submission> out;
  for (auto const& [id, s] : submissions_) out.push_back(s);
  return out;
}

void ReviewService::push_outbox_locked(OutboxMessage message) {
  message.message_id = next_id("msg");
  message.created_at = clock_.now();
  outbox_.push_back(std::move(message));
}

std::vector<OutboxMessage> ReviewService::drain_outbox() {
  std::lock_guard lock(mu_);
  std::vector<OutboxMessage> out(outbox_.begin() + static_cast<std::ptrdiff_t>(outbox_read_),
                                 outbox_.end());
  outbox_read_ = outbox_.size();
  persist_locked();
  return out;
}

std::vector<OutboxMessage> ReviewService::outbox_history() const {
  std::lock_guard lock(mu_);
  return outbox_;
}

std::size_t ReviewService::account_count() const {
  std::lock_guard lock(mu_);
  return accounts_.size();
}

std::optional<UserIdentity> ReviewService::find_account(std::string const& email) const {
  std::lock_guard lock(mu_);
  auto it = accounts_.find(normalize_email(email));
  if (it == accounts_.end()) return std::nullopt;
  return it->second;
}

// --- Persistence ------------------------------------------------------------

Json ReviewService::state_json_locked() const {
  Json accounts = Json::array();
  for (auto const& [email, u] : accounts_) accounts.push_back(u);
  Json submissions = Json::array();
  for (auto const& [id, s] : submissions_) submissions.push_back(s);
  Json processed = Json::object();
  for (auto const& [key, ack] : processed_) processed[key] = ack;
  Json pending = Json::array();
  for (auto const& m : pending_) pending.push_back(Json::parse(bridge::canonical_body(m)));
  return Json{{"id_counters", id_counters_},
              {"accounts", accounts},
              {"submissions", submissions},
              {"outbox", outbox_},
              {"outbox_read", outbox_read_},
              {"processed", processed},
              {"pending_messages", pending},
              {"events", events_.to_json()}};
}

Json ReviewService::state_json() const {
  std::lock_guard lock(mu_);
  return state_json_locked();
}

void ReviewService::persist_locked() const {
  if (options_.state_file.empty()) return;
  auto tmp = options_.state_file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kBadRequest, "cannot write " + tmp.string());
    out << state_json_locked().dump(1);
  }
  std::filesystem::rename(tmp, options_.state_file);
}

void ReviewService::load_state(Json const& state) {
  std::lock_guard lock(mu_);
  id_counters_ = state.at("id_counters").get<std::map<std::string, std::uint64_t>>();
  accounts_.clear();
  for (auto const& ja : state.at("accounts")) {
    auto u = ja.get<UserIdentity>();
    accounts_[u.email] = u;
  }
  submissions_.clear();
  for (auto const& js : state.at("submissions")) {
    auto s = js.get<Submission>();
    submissions_[s.submission_id] = std::move(s);
  }
  outbox_ = state.at("outbox").get<std::vector<OutboxMessage>>();
  outbox_read_ = state.at("outbox_read").get<std::size_t>();
  processed_.clear();
  for (auto const& [key, ack] : state.at("processed").items()) processed_[key] = ack;
  pending_.clear();
  for (auto const& jm : state.at("pending_messages")) {
    // Pending messages are re-signed on load; the secret may have been
    // supplied fresh through the environment.
    auto m = bridge::make_message(bridge::message_kind_from_string(jm.at("kind").get<std::string>()),
                                  jm.at("payload"), jm.at("issued_at").get<Timestamp>());
    pending_.push_back(bridge::sign_message(options_.bridge_secret, std::move(m)));
  }
  events_.restore(state.at("events"));
}

}  // namespace revbridge
