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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Counts and tolerances are fixed here.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "../visibility_table.hpp"
#include "../world.hpp"
#include "revbridge/crypto.hpp"
#include "revbridge/harness.hpp"

namespace revbridge {
namespace {

namespace fs = std::filesystem;
using harness::Fault;
using testing::error_of;
using testing::signed_wire;
using testing::World;

fs::path const kScenarioDir = REVBRIDGE_SCENARIO_DIR;

constexpr double kReplayBudgetSeconds = 5.0;
constexpr int kOneRoleSequences = 10'000;
constexpr int kOneRoleCallsPerSequence = 12;
constexpr int kFaultSchedulesPerScenario = 50;
constexpr int kSsoTokens = 1'000;
constexpr int kRoundTripDocuments = 500;
constexpr std::size_t kMaxBlocks = 200;
// SHA-256 over the 500 snapshot hashes of the seeded round-trip corpus,
// frozen from a verified run.
constexpr char kCorpusDigest[] =
    "8ea7d8155bb496316adc9460d1db7d9f52596565425db65c2af166e5ed5df21a";

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string read_file(fs::path const& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> bundled_scenarios() {
  std::vector<fs::path> out;
  for (auto const& e : fs::directory_iterator(kScenarioDir)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Verdict workflow_replay() {
  auto const script = harness::load_script(kScenarioDir / "two-round-revise-accept.json");
  auto const t0 = std::chrono::steady_clock::now();
  auto const report = harness::run_scenario(script);
  double const seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  auto const golden = read_file(kScenarioDir / "golden" / "two-round-revise-accept.events.json");
  bool const byte_equal = !golden.empty() && harness::golden_text(report) == golden;
  bool accepted = !report.terminal_states.empty();
  for (auto const& [id, state] : report.terminal_states) accepted &= state == "Accepted";

  std::set<std::string> reviewers;
  std::size_t rounds = 0;
  for (auto const& s : report.review_state["submissions"]) {
    rounds = std::max(rounds, s["rounds"].size());
    for (auto const& r : s["rounds"]) {
      for (auto const& a : r["assignments"]) reviewers.insert(a["reviewer"]["email"]);
    }
  }
  std::ostringstream d;
  d << "steps_passed=" << report.passed() << " accepted=" << accepted
    << " golden_byte_equal=" << byte_equal << " rounds=" << rounds
    << " reviewers=" << reviewers.size() << " wall=" << seconds << "s (<"
    << kReplayBudgetSeconds << "s)";
  return {report.passed() && accepted && byte_equal && rounds == 2 && reviewers.size() == 3 &&
              seconds < kReplayBudgetSeconds,
          d.str()};
}

Verdict visibility_oracle() {
  int agree = 0;
  int total = 0;
  for (auto const& row : testing::kTruthTable) {
    ++total;
    auto const c = testing::comment_by("writer", row.author, row.state);
    agree += comment_visible(row.viewer, "viewer", c) == row.visible;
  }
  return {total == 32 && agree == total,
          std::to_string(agree) + "/" + std::to_string(total) + " combinations agree"};
}

Verdict role_mapping() {
  using R = RoleKind;
  using S = ServiceSide;
  std::pair<R, R> const table[] = {
      {R::kAuthor, R::kAuthor}, {R::kReviewer, R::kReviewer}, {R::kEditor, R::kAdmin}};
  int ok = 0;
  for (auto const& [review, doc] : table) {
    bool const forward = map_role(S::kReviewService, review) == doc;
    bool const back = map_role(S::kDocumentService, doc) == review;
    bool const identity =
        map_role(S::kDocumentService, map_role(S::kReviewService, review)) == review &&
        map_role(S::kReviewService, map_role(S::kDocumentService, doc)) == doc;
    ok += forward && back && identity;
  }
  bool const undefined_rejected =
      error_of([] { map_role(S::kReviewService, R::kAdmin); }) == ErrorCode::kUnknownRole &&
      error_of([] { map_role(S::kDocumentService, R::kEditor); }) == ErrorCode::kUnknownRole;
  return {ok == 3 && undefined_rejected,
          std::to_string(ok) + "/3 pairs map and round-trip; undefined roles rejected=" +
              std::to_string(undefined_rejected)};
}

Verdict one_role_invariant() {
  std::mt19937_64 rng(20260101);
  static char const* const kEmails[] = {"a@x.org", "b@x.org", "c@x.org", "r1@x.org",
                                        "r2@x.org", testing::kEditor};
  long violations = 0;
  long conflicts_refused = 0;
  long calls = 0;
  for (int seq = 0; seq < kOneRoleSequences; ++seq) {
    World w(testing::journals(), static_cast<std::uint64_t>(seq) + 1);
    std::vector<std::string> docs;
    std::map<std::pair<std::string, std::string>, std::string> first_role;
    auto email = [&] { return std::string(kEmails[rng() % std::size(kEmails)]); };
    auto user = [&](std::string const& e) {
      auto const u = w.doc.find_user(e);
      return u ? u->user_id : w.doc.register_user(e, "").user_id;
    };
    for (int i = 0; i < kOneRoleCallsPerSequence; ++i) {
      ++calls;
      try {
        switch (docs.empty() ? 0 : rng() % 5) {
          case 0:
            docs.push_back(w.doc.create_document(user(email()), "T").document_id);
            break;
          case 1:
            w.doc.invite_collaborator(user(email()), docs[rng() % docs.size()], email());
            break;
          case 2: {
            Json p{{"submission_id", "sub-" + std::to_string(rng() % 4)},
                   {"document_id", docs[rng() % docs.size()]},
                   {"round_index", static_cast<int>(1 + rng() % 2)},
                   {"email", email()},
                   {"display_name", "R"},
                   {"role", rng() % 2 ? "Reviewer" : "Author"},
                   {"reviewer_number", 1}};
            w.doc.ensure_account(signed_wire(bridge::MessageKind::kReviewerAssigned, p));
            break;
          }
          case 3:
            w.doc.submit_document(user(email()), docs[rng() % docs.size()], "jdh");
            break;
          default: {
            auto const d = docs[rng() % docs.size()];
            w.doc.import_manuscript(user(email()), w.doc.export_snapshot(d).canonical);
            break;
          }
        }
      } catch (Error const& e) {
        conflicts_refused += e.code() == ErrorCode::kRoleConflict;
      }
      // Every (user, document) pair holds one role, and it never changes.
      std::set<std::pair<std::string, std::string>> seen;
      for (auto const& g : w.doc.state_json()["grants"]) {
        auto const key = std::make_pair(g["user_id"].get<std::string>(),
                                        g["document_id"].get<std::string>());
        if (!seen.insert(key).second) ++violations;
        auto const role = g["role"].get<std::string>();
        auto [it, inserted] = first_role.try_emplace(key, role);
        if (!inserted && it->second != role) ++violations;
      }
    }
  }
  std::ostringstream d;
  d << kOneRoleSequences << " sequences, " << calls << " calls, " << conflicts_refused
    << " conflicting grants refused, violations=" << violations;
  return {violations == 0 && conflicts_refused > 0, d.str()};
}

Verdict provisioning_idempotence() {
  // Each message kind, delivered twice, at the step that sends it.
  auto const script = harness::load_script(kScenarioDir / "two-round-revise-accept.json");
  auto const clean = harness::run_scenario(script);
  std::map<std::string, std::string> const kind_of_action = {
      {"submit", "/bridge/submissions"},
      {"resubmit", "/bridge/resubmissions"},
      {"assign_reviewer", "/bridge/accounts"},
      {"record_decision", "/bridge/decisions"}};
  std::set<std::string> duplicated_paths;
  int duplicate_failures = 0;
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    auto const it = kind_of_action.find(script.steps[i].action);
    if (it == kind_of_action.end() || script.steps[i].expect != "ok") continue;
    harness::RunOptions o;
    o.faults = std::vector<Fault>{Fault{i, Fault::Kind::kDuplicate, {}}};
    auto const faulty = harness::run_scenario(script, o);
    for (auto const& d : faulty.deliveries) {
      if (d.step == i && d.fault == "Duplicate" && d.path == it->second) {
        duplicated_paths.insert(d.path);
      }
    }
    if (!faulty.passed() || !harness::diff_state(clean, faulty).empty()) ++duplicate_failures;
  }

  // Seeded random schedules over every bundled scenario.
  int schedules = 0;
  int schedule_failures = 0;
  std::size_t faults_applied = 0;
  for (auto const& f : bundled_scenarios()) {
    auto const s = harness::load_script(f);
    auto const base = harness::run_scenario(s);
    for (int k = 0; k < kFaultSchedulesPerScenario; ++k) {
      harness::RunOptions o;
      o.faults = harness::random_faults(s, static_cast<std::uint64_t>(k) + 1);
      auto const faulty = harness::run_scenario(s, o);
      ++schedules;
      for (auto const& d : faulty.deliveries) faults_applied += !d.fault.empty();
      if (!faulty.passed() || !harness::diff_state(base, faulty).empty()) {
        ++schedule_failures;
        std::cerr << "  diverged: " << f.filename().string() << " schedule " << k + 1 << "\n";
      }
    }
  }
  std::ostringstream d;
  d << "kinds duplicated=" << duplicated_paths.size() << "/4, duplicate-run diffs="
    << duplicate_failures << "; " << schedules << " random schedules, " << faults_applied
    << " faulted deliveries, diverged=" << schedule_failures;
  return {duplicated_paths.size() == 4 && duplicate_failures == 0 && schedule_failures == 0 &&
              faults_applied > 0,
          d.str()};
}

Verdict sso_contract() {
  World w;
  std::vector<std::string> docs;
  for (auto const* a : {"a@x.org", "b@x.org", "c@x.org", "d@x.org"}) {
    docs.push_back(w.author_with_document(a).second);
  }
  std::vector<std::string> reviewers = {"r0@x.org", "r1@x.org", "r2@x.org", "r3@x.org"};
  std::set<std::pair<std::string, std::string>> granted;
  std::mt19937_64 rng(77);
  for (auto const& r : reviewers) {
    for (auto const& d : docs) {
      if (rng() % 2) continue;
      w.doc.ensure_account(signed_wire(bridge::MessageKind::kReviewerAssigned,
                                       {{"submission_id", "s-" + d},
                                        {"document_id", d},
                                        {"round_index", 1},
                                        {"email", r},
                                        {"display_name", "R"},
                                        {"role", "Reviewer"}}));
      granted.insert({r, d});
    }
  }
  reviewers.push_back("stranger@x.org");

  int consumed_twice = 0, valid = 0, expired = 0, expired_rejected = 0;
  int tampered = 0, tampered_rejected = 0, scope_leaks = 0, ungranted_accepted = 0;
  for (int i = 0; i < kSsoTokens; ++i) {
    auto const email = reviewers[rng() % reviewers.size()];
    auto const doc = docs[rng() % docs.size()];
    auto const kind = rng() % 3;
    ScriptedClock minted_at(w.clock.now());
    auto ttl = std::chrono::milliseconds(1 + rng() % (24 * 3600 * 1000LL));
    if (kind == 1) minted_at.set(w.clock.now() - ttl.count() - 1 - static_cast<long>(rng() % 1000));
    auto text = bridge::make_sso_token(testing::kSecret, email, doc, RoleKind::kReviewer, ttl,
                                       minted_at, rng)
                    .encode();
    if (kind == 2) {
      ++tampered;
      auto const pos = rng() % text.size();
      char const replacement = text[pos] == '0' ? '1' : text[pos] == '.' ? 'x' : '0';
      text[pos] = replacement;
      auto const code = error_of([&] { w.doc.consume_sso_token(text); });
      tampered_rejected += code == ErrorCode::kBadSignature;
      continue;
    }
    if (kind == 1) {
      ++expired;
      expired_rejected +=
          error_of([&] { w.doc.consume_sso_token(text); }) == ErrorCode::kTokenExpired;
      continue;
    }
    ++valid;
    int successes = 0;
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        auto const session = w.doc.consume_sso_token(text);
        ++successes;
        if (!granted.count({email, doc})) ++ungranted_accepted;
        for (auto const& other : docs) {
          if (other == doc) continue;
          if (error_of([&] { w.doc.get_document(session.viewer, other); }) !=
              ErrorCode::kNoGrant) {
            ++scope_leaks;
          }
          api::Request r;
          r.path = "/documents/" + other + "/snapshot";
          r.headers["authorization"] = "Bearer " + session.token;
          if (w.doc_api.handle(r).status != 403) ++scope_leaks;
        }
        api::Request list;
        list.path = "/documents";
        list.headers["authorization"] = "Bearer " + session.token;
        for (auto const& l : w.doc_api.handle(list).json()) {
          if (l["document_id"] != doc) ++scope_leaks;
        }
      } catch (Error const&) {
      }
    }
    consumed_twice += successes > 1;
  }
  std::ostringstream d;
  d << kSsoTokens << " tokens: valid=" << valid << " consumed_twice=" << consumed_twice
    << " ungranted_accepted=" << ungranted_accepted << " expired_rejected=" << expired_rejected
    << "/" << expired << " tampered_rejected=" << tampered_rejected << "/" << tampered
    << " scope_leaks=" << scope_leaks;
  return {consumed_twice == 0 && ungranted_accepted == 0 && expired_rejected == expired &&
              tampered_rejected == tampered && scope_leaks == 0 && expired > 0 && tampered > 0,
          d.str()};
}

Verdict author_linking() {
  auto accounts_after = [](std::vector<std::string> const& emails) {
    World w;
    auto const before = w.review.account_count();
    for (auto const& e : emails) {
      auto const [author, doc] = w.author_with_document(e);
      w.doc.submit_document(author, doc, "jdh");
    }
    return w.review.account_count() - before;
  };
  auto const same = accounts_after({"a@x.org", "a@x.org"});
  auto const same_case = accounts_after({"a@x.org", "A@X.ORG"});
  auto const distinct = accounts_after({"a@x.org", "b@x.org", "c@x.org"});
  std::ostringstream d;
  d << "same email x2 -> " << same << " account(s); case variants -> " << same_case
    << "; three emails -> " << distinct;
  return {same == 1 && same_case == 1 && distinct == 3, d.str()};
}

Verdict canonical_round_trip() {
  auto corpus_hashes = [](int& mismatches) {
    std::mt19937_64 rng(500);
    ScriptedClock clock;
    DocService svc(DocServiceOptions{testing::kSecret, {}, 1, {}, {}}, clock);
    auto const user = svc.register_user("a@x.org", "").user_id;
    std::string all;
    for (int i = 0; i < kRoundTripDocuments; ++i) {
      auto const title = testing::random_title(rng);
      auto const blocks = testing::random_blocks(rng, kMaxBlocks);
      auto const d = svc.create_document(user, title);
      std::vector<BlockOp> ops;
      for (auto const& b : blocks) ops.push_back(BlockOp::insert(b));
      svc.apply_edit(user, d.document_id, 0, ops);
      auto const exported = svc.export_snapshot(d.document_id);
      auto const imported = svc.import_manuscript(user, exported.canonical);
      bool const same = imported.title == title && imported.blocks == blocks;
      bool const bytes = serialize_canonical(imported.title, 1, imported.blocks) ==
                         exported.canonical;
      bool const hash = exported.content_hash == sha256_hex(exported.canonical);
      mismatches += !(same && bytes && hash);
      all += exported.content_hash;
    }
    return sha256_hex(all);
  };
  int first_mismatches = 0, second_mismatches = 0;
  auto const first = corpus_hashes(first_mismatches);
  auto const second = corpus_hashes(second_mismatches);
  std::ostringstream d;
  d << kRoundTripDocuments << " documents (<=" << kMaxBlocks
    << " blocks): mismatches=" << first_mismatches + second_mismatches
    << " repeat_equal=" << (first == second) << " corpus_digest=" << first
    << " frozen_equal=" << (first == kCorpusDigest);
  return {first_mismatches == 0 && second_mismatches == 0 && first == second &&
              first == kCorpusDigest,
          d.str()};
}

}  // namespace
}  // namespace revbridge

int main() {
  using namespace revbridge;
  std::pair<char const*, std::function<Verdict()>> const criteria[] = {
      {"workflow-replay", workflow_replay},
      {"visibility-oracle", visibility_oracle},
      {"role-mapping", role_mapping},
      {"one-role-invariant", one_role_invariant},
      {"provisioning-idempotence", provisioning_idempotence},
      {"sso-contract", sso_contract},
      {"author-linking", author_linking},
      {"canonical-round-trip", canonical_round_trip},
  };
  int failed = 0;
  for (auto const& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (std::exception const& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
