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

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "revbridge/api.hpp"
#include "revbridge/bridge.hpp"
#include "revbridge/doc_service.hpp"
#include "revbridge/review_service.hpp"

namespace revbridge {

inline void PrintTo(ErrorCode code, std::ostream* os) {
  if (static_cast<int>(code) < 0) {
    *os << "<no error>";
  } else {
    *os << to_string(code);
  }
}

}  // namespace revbridge

namespace revbridge::testing {

inline constexpr char kSecret[] = "test-bridge-secret";
inline constexpr char kEditor[] = "editor@jdh.example";

inline std::vector<JournalConfig> journals(BlindMode mode = BlindMode::kSingleBlind,
                                           int max_rounds = 3) {
  return {JournalConfig{"jdh", "Journal of Digital Humanities", mode, max_rounds,
                        {EditorConfig{kEditor, "Erin Editor"}}},
          JournalConfig{"qsr", "Quarterly Survey Review", BlindMode::kOpen, max_rounds,
                        {EditorConfig{"chief@qsr.example", "Quinn Chief"}}}};
}

/// Both services wired through their HTTP handlers in one process.
struct World {
  explicit World(std::vector<JournalConfig> js = journals(), std::uint64_t seed = 1,
                 std::filesystem::path doc_state = {}, std::filesystem::path review_state = {})
      : doc(DocServiceOptions{kSecret, js, seed, doc_state, {}}, clock),
        review(ReviewServiceOptions{kSecret, js, seed + 1, review_state, {},
                                    "http://doc.test", bridge::kDefaultSsoTtl},
               clock),
        doc_api(doc, api::DocApiOptions{true, true}),
        review_api(review, api::ReviewApiOptions{true, true}),
        to_review(review_api),
        to_doc(doc_api) {
    doc.set_review_transport(&to_review);
    review.set_doc_transport(&to_doc);
  }

  /// Registered author with one document holding a heading and a paragraph.
  std::pair<std::string, std::string> author_with_document(std::string const& email,
                                                           std::string const& title = "Paper") {
    auto const u = doc.register_user(email, "");
    auto const d = doc.create_document(u.user_id, title);
    doc.apply_edit(u.user_id, d.document_id, 0,
                   {BlockOp::insert(Block{"h", BlockKind::kHeading, 1, "Intro"}),
                    BlockOp::insert(Block{"p", BlockKind::kParagraph, 0, "Some body text."})});
    return {u.user_id, d.document_id};
  }

  std::string editor_doc_id() { return doc.find_user(kEditor)->user_id; }

  ScriptedClock clock;
  DocService doc;
  ReviewService review;
  api::DocApi doc_api;
  api::ReviewApi review_api;
  api::LocalTransport to_review;
  api::LocalTransport to_doc;
};

inline bridge::WireRequest signed_wire(bridge::MessageKind kind, Json payload,
                                       std::string const& secret = kSecret) {
  return bridge::to_wire(
      bridge::sign_message(secret, bridge::make_message(kind, std::move(payload), 0)));
}

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (Error const& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(-1);  // no error
}

}  // namespace revbridge::testing
