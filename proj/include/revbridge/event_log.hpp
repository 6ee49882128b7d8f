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

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "revbridge/core.hpp"

namespace revbridge {

/// Actor tag used for records caused by bridge deliveries.
inline constexpr char kBridgeActor[] = "bridge";

struct EventRecord {
  std::uint64_t sequence_number = 0;
  std::string actor;  // user_id or "bridge"
  std::string action;
  std::vector<std::string> subjects;
  Timestamp timestamp = 0;

  friend bool operator==(EventRecord const&, EventRecord const&) = default;
};

void to_json(Json& j, EventRecord const& e);
void from_json(Json const& j, EventRecord& e);

/// Append-only audit trail; sequence numbers start at 1 and are dense.
class EventLog {
 public:
  EventRecord append(std::string actor, std::string action,
                            std::vector<std::string> subjects, Timestamp at);

  std::vector<EventRecord> records() const;
  std::size_t size() const;

  Json to_json() const;
  /// Replaces the contents; throws BadRequest if the sequence has gaps.
  void restore(Json const& j);

 private:
  mutable std::mutex mu_;
  std::vector<EventRecord> records_;
};

}  // namespace revbridge
