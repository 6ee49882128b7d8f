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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "revbridge/bridge.hpp"
#include "revbridge/clock.hpp"
#include "revbridge/config.hpp"
#include "revbridge/core.hpp"

namespace revbridge::harness {

struct Fault {
  enum class Kind { kDuplicate, kDelay, kDropOnce };

  std::size_t step = 0;
  Kind kind = Kind::kDuplicate;
  std::chrono::milliseconds delay{0};  // Delay only
};

std::string_view to_string(Fault::Kind kind);

/// One scripted call. `args` may reference earlier bindings as "$name"
/// (whole value) or "${name}" (spliced into a string). `bind` maps a
/// variable to a JSON pointer into a successful response body. `check`
/// maps JSON pointers to expected values; null expects absence.
struct Step {
  std::string actor;
  std::string action;
  Json args = Json::object();
  std::string expect = "ok";  // "ok" or an error name
  std::map<std::string, std::string> bind;
  std::map<std::string, Json> check;
};

struct ScenarioScript {
  std::string name;
  std::string description;
  std::uint64_t seed = 1;
  std::vector<JournalConfig> journals;
  std::vector<Step> steps;
  std::vector<Fault> faults;
  /// Submission (id or "$var") -> expected final state, e.g. "Accepted".
  std::map<std::string, std::string> expect_terminal;
};

/// Validates and parses a script; every problem is a ScriptParseError.
ScenarioScript parse_script(Json const& j);
ScenarioScript load_script(std::filesystem::path const& path);
std::vector<Fault> parse_faults(Json const& j, std::size_t step_count);
Json to_json(ScenarioScript const& script);
Json to_json(Fault const& fault);

/// Names accepted in Step::action.
std::vector<std::string> known_actions();

struct StepOutcome {
  std::size_t index = 0;
  std::string actor;
  std::string action;
  std::string expect;
  std::string outcome;  // "ok" or an error name
  int status = 0;
  Json body;
  bool passed = false;
};

struct DeliveryRecord {
  std::size_t step = 0;
  std::string path;
  std::string fault;  // empty when none applied
  int status = 0;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string mode;  // "in-process" or "live"
  std::vector<StepOutcome> steps;
  std::map<std::string, std::string> terminal_states;  // submission id -> state
  Json doc_events = Json::array();
  Json review_events = Json::array();
  Json outbox = Json::array();
  Json doc_state;
  Json review_state;
  std::vector<DeliveryRecord> deliveries;
  std::vector<std::string> failures;
  std::optional<bool> golden_match;

  bool passed() const { return failures.empty(); }
};

Json to_json(RunReport const& report);

/// The golden artifact: both event logs, pretty-printed, newline-terminated.
std::string golden_text(RunReport const& report);

struct LiveEndpoints {
  std::string doc_url;
  std::string review_url;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;       // overrides the script's seed
  std::optional<std::vector<Fault>> faults;  // overrides the script's faults
  std::optional<LiveEndpoints> live;
  std::chrono::milliseconds step_advance{60'000};  // scripted clock, per step
  bool fail_fast = false;
};

/// Runs every step in order and returns a complete report even when steps
/// fail. In-process runs boot both services on one scripted clock with the
/// fault injector on the bridge seam. Live runs need services started with
/// dev login and internals exposed; faults are in-process only.
RunReport run_scenario(ScenarioScript const& script, RunOptions const& options = {});

/// Keys dropped before diffing: timestamps and per-delivery metadata.
std::set<std::string> default_ignore();

/// Differences between the comparable parts of two reports, after dropping
/// `ignore` keys and renumbering ids and tokens by first appearance.
std::vector<std::string> diff_state(RunReport const& a, RunReport const& b,
                                    std::set<std::string> const& ignore = default_ignore());

/// Seeded fault schedule aimed at the steps that cross the bridge.
std::vector<Fault> random_faults(ScenarioScript const& script, std::uint64_t seed);

/// Bridge transport that applies the faults scheduled for the current step.
class FaultInjectingTransport final : public bridge::Transport {
 public:
  FaultInjectingTransport(bridge::Transport& inner, ScriptedClock& clock,
                          std::vector<DeliveryRecord>& log)
      : inner_(inner), clock_(clock), log_(log) {}

  void set_step(std::size_t step, std::vector<Fault> faults);
  bridge::WireResponse post(bridge::WireRequest const& request) override;

 private:
  bridge::Transport& inner_;
  ScriptedClock& clock_;
  std::vector<DeliveryRecord>& log_;
  std::size_t step_ = 0;
  std::vector<Fault> once_;  // Delay and DropOnce, consumed in order
  bool duplicate_ = false;
};

}  // namespace revbridge::harness
