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

// Command-line entry point: scenario runner, service host, scenario listing.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "revbridge/api.hpp"
#include "revbridge/doc_service.hpp"
#include "revbridge/harness.hpp"
#include "revbridge/http.hpp"
#include "revbridge/review_service.hpp"

namespace {

namespace fs = std::filesystem;
using revbridge::Error;
using revbridge::ErrorCode;
using revbridge::Json;

constexpr int kPass = 0;
constexpr int kMismatch = 1;
constexpr int kScriptError = 2;
constexpr int kEnvironmentError = 3;

std::string read_file(fs::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct RunArgs {
  std::string scenario;
  std::vector<std::string> live;
  std::optional<std::uint64_t> seed;
  std::string faults;
  std::string golden;
  bool update_golden = false;
  std::string report;
  bool fail_fast = false;
};

int run_command(RunArgs const& a) {
  auto const script = revbridge::harness::load_script(a.scenario);
  revbridge::harness::RunOptions options;
  options.seed = a.seed;
  options.fail_fast = a.fail_fast;
  if (!a.faults.empty()) {
    auto const j = Json::parse(read_file(a.faults), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kScriptParseError, a.faults + " is not JSON");
    options.faults = revbridge::harness::parse_faults(
        j.is_object() ? j.value("faults", Json::array()) : j, script.steps.size());
  }
  if (!a.live.empty()) options.live = revbridge::harness::LiveEndpoints{a.live[0], a.live[1]};

  auto report = revbridge::harness::run_scenario(script, options);

  if (!a.golden.empty()) {
    auto const text = revbridge::harness::golden_text(report);
    if (a.update_golden) {
      std::ofstream(a.golden, std::ios::binary) << text;
      std::cout << "golden updated: " << a.golden << "\n";
    } else {
      report.golden_match = fs::exists(a.golden) && read_file(a.golden) == text;
      if (!*report.golden_match) report.failures.push_back("event log differs from " + a.golden);
    }
  }
  if (!a.report.empty()) {
    std::ofstream(a.report, std::ios::binary) << revbridge::harness::to_json(report).dump(2)
                                              << "\n";
  }

  for (auto const& s : report.steps) {
    std::cout << (s.passed ? "  ok   " : "  FAIL ") << s.index << " " << s.actor << " "
              << s.action << " -> " << s.outcome;
    if (s.expect != "ok") std::cout << " (expected " << s.expect << ")";
    std::cout << "\n";
  }
  for (auto const& [id, state] : report.terminal_states) {
    std::cout << "submission " << id << ": " << state << "\n";
  }
  for (auto const& f : report.failures) std::cout << "failure: " << f << "\n";
  std::cout << (report.passed() ? "PASS " : "FAIL ") << script.name << "\n";
  return report.passed() ? kPass : kMismatch;
}

struct ServeArgs {
  std::string role;
  std::string host = "127.0.0.1";
  int port = 0;
  std::string secret;
  std::string state_file;
  std::string clock = "system";
  std::string peer;
  std::string config;
  std::string doc_base_url = "http://localhost:8081";
  std::optional<std::uint64_t> seed;
  bool dev_login = false;
  bool expose_internals = false;
};

std::vector<revbridge::JournalConfig> load_journals(std::string const& path) {
  if (path.empty()) return {};
  auto const j = Json::parse(read_file(path));
  auto journals = (j.is_object() ? j.at("journals") : j).get<std::vector<revbridge::JournalConfig>>();
  revbridge::validate_journals(journals);
  return journals;
}

int serve_command(ServeArgs const& a) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<revbridge::Clock> clock;
  if (a.clock == "scripted") {
    clock = std::make_unique<revbridge::ScriptedClock>();
  } else {
    clock = std::make_unique<revbridge::SystemClock>();
  }
  std::unique_ptr<revbridge::http::Transport> peer;
  if (!a.peer.empty()) peer = std::make_unique<revbridge::http::Transport>(a.peer);

  std::unique_ptr<revbridge::DocService> doc;
  std::unique_ptr<revbridge::ReviewService> review;
  std::unique_ptr<revbridge::api::Handler> handler;
  if (a.role == "doc") {
    doc = std::make_unique<revbridge::DocService>(
        revbridge::DocServiceOptions{a.secret, load_journals(a.config), a.seed, a.state_file, {}},
        *clock, peer.get());
    handler = std::make_unique<revbridge::api::DocApi>(
        *doc, revbridge::api::DocApiOptions{a.dev_login, a.expose_internals});
  } else {
    review = std::make_unique<revbridge::ReviewService>(
        revbridge::ReviewServiceOptions{a.secret, load_journals(a.config), a.seed,
                                        a.state_file, {}, a.doc_base_url,
                                        revbridge::bridge::kDefaultSsoTtl},
        *clock, peer.get());
    handler = std::make_unique<revbridge::api::ReviewApi>(
        *review, revbridge::api::ReviewApiOptions{a.dev_login, a.expose_internals});
  }

  revbridge::http::Server server(*handler);
  auto const port = server.start(a.host, a.port);
  std::cout << a.role << " service listening on " << a.host << ":" << port << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  return 0;
}

int list_command(std::string const& dir) {
  std::vector<fs::path> files;
  for (auto const& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (auto const& f : files) {
    auto const s = revbridge::harness::load_script(f);
    std::cout << s.name << "\t" << s.steps.size() << " steps\t" << s.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revbridge: document and review services with a bridge and a scenario harness"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Replay a scenario script");
  run_cmd->add_option("scenario", run.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--live", run.live, "Live endpoints: <doc-url> <review-url>")
      ->expected(2);
  run_cmd->add_option("--seed", run.seed, "Override the script seed");
  run_cmd->add_option("--faults", run.faults, "Fault schedule JSON file");
  run_cmd->add_option("--golden", run.golden, "Golden event-log file");
  run_cmd->add_flag("--update-golden", run.update_golden, "Rewrite the golden file");
  run_cmd->add_option("--report", run.report, "Write the full run report here");
  run_cmd->add_flag("--fail-fast", run.fail_fast, "Stop at the first failed step");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run one service over HTTP");
  serve_cmd->add_option("--role", serve.role, "doc or review")
      ->required()
      ->check(CLI::IsMember({"doc", "review"}));
  serve_cmd->add_option("--port", serve.port, "Port, 0 for any")->envname("REVBRIDGE_PORT");
  serve_cmd->add_option("--host", serve.host, "Bind address")->envname("REVBRIDGE_HOST");
  serve_cmd->add_option("--secret", serve.secret, "Shared bridge secret")
      ->envname("REVBRIDGE_BRIDGE_SECRET");
  serve_cmd->add_option("--state-file", serve.state_file, "JSON state file")
      ->envname("REVBRIDGE_STATE_FILE");
  serve_cmd->add_option("--clock", serve.clock, "system or scripted")
      ->envname("REVBRIDGE_CLOCK")
      ->check(CLI::IsMember({"system", "scripted"}));
  serve_cmd->add_option("--peer", serve.peer, "Base URL of the other service")
      ->envname("REVBRIDGE_PEER_URL");
  serve_cmd->add_option("--config", serve.config, "Journal configuration JSON")
      ->envname("REVBRIDGE_CONFIG");
  serve_cmd->add_option("--doc-base-url", serve.doc_base_url, "Public URL used in SSO links")
      ->envname("REVBRIDGE_DOC_BASE_URL");
  serve_cmd->add_option("--seed", serve.seed, "Seed for tokens and nonces")
      ->envname("REVBRIDGE_SEED");
  serve_cmd->add_flag("--dev-login", serve.dev_login, "Enable password-less POST /sessions")
      ->envname("REVBRIDGE_DEV_LOGIN");
  serve_cmd->add_flag("--expose-internals", serve.expose_internals,
                      "Enable GET /events, /state and /outbox")
      ->envname("REVBRIDGE_EXPOSE_INTERNALS");

  std::string scenario_dir = REVBRIDGE_SCENARIO_DIR;
  auto* scenarios_cmd = app.add_subcommand("scenarios", "Bundled scenarios");
  auto* list_cmd = scenarios_cmd->add_subcommand("list", "List bundled scenarios");
  list_cmd->add_option("--dir", scenario_dir, "Scenario directory");
  scenarios_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e) == 0 ? 0 : kScriptError;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*serve_cmd) return serve_command(serve);
    if (*list_cmd) return list_command(scenario_dir);
  } catch (Error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kScriptParseError:
      case ErrorCode::kEmptySecret:
      case ErrorCode::kBadRequest:  // invalid journal configuration
        return kScriptError;
      default:
        return kEnvironmentError;
    }
  } catch (Json::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kScriptError;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironmentError;
  }
  return kScriptError;
}
