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

#include "revbridge/event_log.hpp"

#include "revbridge/error.hpp"

namespace revbridge {

void to_json(Json& j, EventRecord const& e) {
  j = Json{{"seq", e.sequence_number},
           {"actor", e.actor},
           {"action", e.action},
           {"subjects", e.subjects},
           {"timestamp", e.timestamp}};
}

void from_json(Json const& j, EventRecord& e) {
  j.at("seq").get_to(e.sequence_number);
  j.at("actor").get_to(e.actor);
  j.at("action").get_to(e.action);
  j.at("subjects").get_to(e.subjects);
  j.at("timestamp").get_to(e.timestamp);
}

EventRecord EventLog::append(std::string actor, std::string action,
                                    std::vector<std::string> subjects,
                                    Timestamp at) {
  std::lock_guard lock(mu_);
  EventRecord rec;
  rec.sequence_number = records_.size() + 1;
  rec.actor = std::move(actor);
  rec.action = std::move(action);
  rec.subjects = std::move(subjects);
  rec.timestamp = at;
  records_.push_back(std::move(rec));
  return records_.back();
}

std::vector<EventRecord> EventLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t EventLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

Json EventLog::to_json() const {
  std::lock_guard lock(mu_);
  return Json(records_);
}

void EventLog::restore(Json const& j) {
  auto recs = j.get<std::vector<EventRecord>>();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].sequence_number != i + 1) {
      throw Error(ErrorCode::kBadRequest, "event log sequence has a gap");
    }
  }
  std::lock_guard lock(mu_);
  records_ = std::move(recs);
}

}  // namespace revbridge
