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
#include <vector>

#include "revbridge/core.hpp"
#include "revbridge/permissions.hpp"

namespace revbridge {

/// Editors are configured per journal out-of-band; the bridge never
/// provisions editor or admin accounts.
struct EditorConfig {
  std::string email;
  std::string display_name;
};

struct JournalConfig {
  std::string journal_id;
  std::string name;
  BlindMode blind_mode = BlindMode::kOpen;
  int max_rounds = 3;
  std::vector<EditorConfig> editors;
};

/// Throws BadRequest on duplicate ids, max_rounds < 1 or malformed emails.
void validate_journals(std::vector<JournalConfig> const& journals);

void to_json(Json& j, EditorConfig const& e);
void from_json(Json const& j, EditorConfig& e);
void to_json(Json& j, JournalConfig const& c);
void from_json(Json const& j, JournalConfig& c);

}  // namespace revbridge
