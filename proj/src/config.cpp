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

#include "revbridge/config.hpp"

#include <set>

#include "revbridge/error.hpp"

namespace revbridge {

void validate_journals(std::vector<JournalConfig> const& journals) {
  std::set<std::string> ids;
  for (auto const& j : journals) {
    if (j.journal_id.empty() || !ids.insert(j.journal_id).second) {
      throw Error(ErrorCode::kBadRequest, "journal ids must be unique and non-empty");
    }
    if (j.max_rounds < 1) {
      throw Error(ErrorCode::kBadRequest, "max_rounds must be >= 1 for " + j.journal_id);
    }
    for (auto const& e : j.editors) normalize_email(e.email);
  }
}

void to_json(Json& j, EditorConfig const& e) {
  j = Json{{"email", e.email}, {"display_name", e.display_name}};
}

void from_json(Json const& j, EditorConfig& e) {
  e.email = normalize_email(j.at("email").get<std::string>());
  e.display_name = j.value("display_name", e.email);
}

void to_json(Json& j, JournalConfig const& c) {
  j = Json{{"journal_id", c.journal_id},
           {"name", c.name},
           {"blind_mode", to_string(c.blind_mode)},
           {"max_rounds", c.max_rounds},
           {"editors", c.editors}};
}

void from_json(Json const& j, JournalConfig& c) {
  j.at("journal_id").get_to(c.journal_id);
  c.name = j.value("name", c.journal_id);
  c.blind_mode = blind_mode_from_string(j.value("blind_mode", "Open"));
  c.max_rounds = j.value("max_rounds", 3);
  c.editors = j.value("editors", std::vector<EditorConfig>{});
}

}  // namespace revbridge
