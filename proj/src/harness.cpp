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

#include "revbridge/harness.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <variant>

#include "revbridge/api.hpp"
#include "revbridge/doc_service.hpp"
#include "revbridge/http.hpp"
#include "revbridge/review_service.hpp"

namespace revbridge::harness {
namespace {

enum class Side { kDoc, kReview };

struct ActionSpec {
  Side side;
  char const* method;
  char const* path;  // "{name}" segments are filled from args
  bool auth;
  bool crosses_bridge;
};

std::map<std::string, ActionSpec> const& actions() {
  static auto const* table = new std::map<std::string, ActionSpec>{
      {"register_user", {Side::kDoc, "POST", "/users", false, false}},
      {"create_document", {Side::kDoc, "POST", "/documents", true, false}},
      {"import_manuscript", {Side::kDoc, "POST", "/imports", true, false}},
      {"list_documents", {Side::kDoc, "GET", "/documents", true, false}},
      {"view_document", {Side::kDoc, "GET", "/documents/{document}", true, false}},
      {"export_snapshot", {Side::kDoc, "GET", "/documents/{document}/snapshot", true, false}},
      {"edit", {Side::kDoc, "POST", "/documents/{document}/edits", true, false}},
      {"comment", {Side::kDoc, "POST", "/documents/{document}/comments", true, false}},
      {"approve_comment",
       {Side::kDoc, "POST", "/documents/{document}/comments/{comment}/approval", true, false}},
      {"invite_collaborator",
       {Side::kDoc, "POST", "/documents/{document}/collaborators", true, false}},
      {"submit", {Side::kDoc, "POST", "/documents/{document}/submission", true, true}},
      {"resubmit", {Side::kDoc, "POST", "/documents/{document}/resubmission", true, true}},
      {"follow_sso", {Side::kDoc, "POST", "/bridge/sso", false, false}},
      {"list_journals", {Side::kReview, "GET", "/journals", false, false}},
      {"list_submissions", {Side::kReview, "GET", "/submissions", true, false}},
      {"view_submission", {Side::kReview, "GET", "/submissions/{submission}", true, false}},
      {"assign_reviewer",
       {Side::kReview, "POST", "/submissions/{submission}/reviewers", true, true}},
      {"respond_invitation",
       {Side::kReview, "POST", "/submissions/{submission}/invitation", true, false}},
      {"submit_review", {Side::kReview, "POST", "/submissions/{submission}/reviews", true, false}},
      {"record_decision",
       {Side::kReview, "POST", "/submissions/{submission}/decision", true, true}},
      {"open_round", {Side::kReview, "POST", "/submissions/{submission}/rounds", true, false}},
  };
  return *table;
}

std::vector<std::string> path_params(std::string_view path) {
  std::vector<std::string> out;
  for (auto open = path.find('{'); open != std::string_view::npos;
       open = path.find('{', open + 1)) {
    out.emplace_back(path.substr(open + 1, path.find('}', open) - open - 1));
  }
  return out;
}

[[noreturn]] void script_error(std::string const& message) {
  throw Error(ErrorCode::kScriptParseError, message);
}

bool non_negative_integer(Json const& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

std::regex const& var_pattern() {
  static std::regex const re(R"(\$\{([A-Za-z_][A-Za-z0-9_]*)\}|^\$([A-Za-z_][A-Za-z0-9_]*)$)");
  return re;
}

void collect_vars(Json const& j, std::set<std::string>& out) {
  if (j.is_string()) {
    auto const& s = j.get_ref<std::string const&>();
    for (std::sregex_iterator it(s.begin(), s.end(), var_pattern()), end; it != end; ++it) {
      out.insert((*it)[1].matched ? (*it)[1].str() : (*it)[2].str());
    }
  } else if (j.is_structured()) {
    for (auto const& v : j) collect_vars(v, out);
  }
}

Json substitute(Json const& j, std::map<std::string, Json> const& vars) {
  if (j.is_string()) {
    auto const& s = j.get_ref<std::string const&>();
    std::smatch m;
    if (std::regex_match(s, m, var_pattern()) && m[2].matched) {
      auto it = vars.find(m[2].str());
      return it == vars.end() ? j : it->second;
    }
    std::string out;
    auto last = s.cbegin();
    for (std::sregex_iterator it(s.begin(), s.end(), var_pattern()), end; it != end; ++it) {
      out.append(last, (*it)[0].first);
      auto v = vars.find((*it)[1].str());
      if (v == vars.end()) {
        out.append((*it)[0].first, (*it)[0].second);
      } else {
        out += v->second.is_string() ? v->second.get<std::string>() : v->second.dump();
      }
      last = (*it)[0].second;
    }
    out.append(last, s.cend());
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (auto const& [k, v] : j.items()) out[k] = substitute(v, vars);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (auto const& v : j) out.push_back(substitute(v, vars));
    return out;
  }
  return j;
}

constexpr std::pair<Fault::Kind, std::string_view> kFaultNames[] = {
    {Fault::Kind::kDuplicate, "Duplicate"},
    {Fault::Kind::kDelay, "Delay"},
    {Fault::Kind::kDropOnce, "DropOnce"},
};

Fault parse_fault(Json const& j, std::size_t step_count) {
  if (!j.is_object()) script_error("fault entries must be objects");
  if (!j.contains("step") || !non_negative_integer(j["step"])) {
    script_error("fault needs a non-negative integer step");
  }
  Fault f;
  f.step = j["step"].get<std::size_t>();
  if (f.step >= step_count) {
    script_error("fault step " + std::to_string(f.step) + " is out of range");
  }
  auto const name = j.value("fault", "");
  auto it = std::find_if(std::begin(kFaultNames), std::end(kFaultNames),
                         [&](auto const& p) { return p.second == name; });
  if (it == std::end(kFaultNames)) script_error("unknown fault '" + name + "'");
  f.kind = it->first;
  if (f.kind == Fault::Kind::kDelay) {
    if (!j.contains("ms") || !non_negative_integer(j["ms"])) {
      script_error("Delay needs a non-negative integer ms");
    }
    f.delay = std::chrono::milliseconds(j["ms"].get<std::int64_t>());
  }
  return f;
}

}  // namespace

std::string_view to_string(Fault::Kind kind) {
  for (auto const& [k, name] : kFaultNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::vector<std::string> known_actions() {
  std::vector<std::string> out;
  for (auto const& [name, spec] : actions()) out.push_back(name);
  return out;
}

std::vector<Fault> parse_faults(Json const& j, std::size_t step_count) {
  if (!j.is_array()) script_error("faults must be an array");
  std::vector<Fault> out;
  for (auto const& f : j) out.push_back(parse_fault(f, step_count));
  return out;
}

ScenarioScript parse_script(Json const& j) {
  if (!j.is_object()) script_error("scenario must be a JSON object");
  ScenarioScript s;
  try {
    s.name = j.value("name", "");
    s.description = j.value("description", "");
    if (j.contains("seed")) {
      if (!non_negative_integer(j["seed"])) script_error("seed must be a non-negative integer");
      s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("journals")) {
      s.journals = j["journals"].get<std::vector<JournalConfig>>();
      validate_journals(s.journals);
    }
  } catch (Json::exception const& e) {
    script_error(e.what());
  } catch (Error const& e) {
    if (e.code() == ErrorCode::kScriptParseError) throw;
    script_error(e.what());
  }

  Json const steps = j.value("steps", Json::array());
  if (!steps.is_array()) script_error("steps must be an array");
  std::set<std::string> bound;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto const& js = steps[i];
    auto const where = "step " + std::to_string(i) + ": ";
    if (!js.is_object()) script_error(where + "must be an object");
    Step step;
    if (!js.contains("actor") || !js["actor"].is_string() ||
        js["actor"].get<std::string>().empty()) {
      script_error(where + "missing actor");
    }
    step.actor = js["actor"].get<std::string>();
    if (!js.contains("action") || !js["action"].is_string()) {
      script_error(where + "missing action");
    }
    step.action = js["action"].get<std::string>();
    auto const spec = actions().find(step.action);
    if (spec == actions().end()) script_error(where + "unknown action '" + step.action + "'");
    step.args = js.value("args", Json::object());
    if (!step.args.is_object()) script_error(where + "args must be an object");
    for (auto const& p : path_params(spec->second.path)) {
      if (!step.args.contains(p)) script_error(where + step.action + " needs args." + p);
    }
    step.expect = js.value("expect", "ok");
    if (step.expect != "ok" && !error_code_from_string(step.expect)) {
      script_error(where + "unknown expected outcome '" + step.expect + "'");
    }
    std::set<std::string> used;
    collect_vars(step.args, used);
    for (auto const& v : used) {
      if (!bound.count(v)) script_error(where + "variable '" + v + "' is not bound yet");
    }
    if (js.contains("bind")) {
      if (!js["bind"].is_object()) script_error(where + "bind must be an object");
      for (auto const& [var, ptr] : js["bind"].items()) {
        if (!ptr.is_string() || ptr.get<std::string>().rfind('/', 0) != 0) {
          script_error(where + "bind." + var + " must be a JSON pointer");
        }
        step.bind[var] = ptr.get<std::string>();
        bound.insert(var);
      }
    }
    if (js.contains("check")) {
      if (!js["check"].is_object()) script_error(where + "check must be an object");
      for (auto const& [ptr, value] : js["check"].items()) {
        if (ptr.rfind('/', 0) != 0) script_error(where + "check key " + ptr + " is not a pointer");
        std::set<std::string> refs;
        collect_vars(value, refs);
        for (auto const& v : refs) {
          if (!bound.count(v)) script_error(where + "variable '" + v + "' is not bound yet");
        }
        step.check[ptr] = value;
      }
    }
    s.steps.push_back(std::move(step));
  }
  if (j.contains("faults")) s.faults = parse_faults(j["faults"], s.steps.size());
  if (j.contains("expect_terminal")) {
    if (!j["expect_terminal"].is_object()) script_error("expect_terminal must be an object");
    for (auto const& [k, v] : j["expect_terminal"].items()) {
      if (!v.is_string()) script_error("expect_terminal values must be strings");
      if (k.rfind('$', 0) == 0 && !bound.count(k.substr(1))) {
        script_error("expect_terminal references unbound '" + k + "'");
      }
      s.expect_terminal[k] = v.get<std::string>();
    }
  }
  return s;
}

ScenarioScript load_script(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) script_error("cannot read " + path.string());
  auto j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) script_error(path.string() + " is not valid JSON");
  return parse_script(j);
}

Json to_json(Fault const& f) {
  Json j{{"step", f.step}, {"fault", to_string(f.kind)}};
  if (f.kind == Fault::Kind::kDelay) j["ms"] = f.delay.count();
  return j;
}

Json to_json(ScenarioScript const& s) {
  Json steps = Json::array();
  for (auto const& st : s.steps) {
    Json j{{"actor", st.actor}, {"action", st.action}, {"args", st.args}, {"expect", st.expect}};
    if (!st.bind.empty()) j["bind"] = st.bind;
    if (!st.check.empty()) j["check"] = st.check;
    steps.push_back(std::move(j));
  }
  Json faults = Json::array();
  for (auto const& f : s.faults) faults.push_back(to_json(f));
  Json j{{"name", s.name}, {"seed", s.seed}, {"journals", s.journals},
         {"steps", steps}, {"faults", faults}};
  if (!s.description.empty()) j["description"] = s.description;
  if (!s.expect_terminal.empty()) j["expect_terminal"] = s.expect_terminal;
  return j;
}

// --- fault injection ----------------------------------------------------------

void FaultInjectingTransport::set_step(std::size_t step, std::vector<Fault> faults) {
  step_ = step;
  duplicate_ = false;
  once_.clear();
  for (auto& f : faults) {
    if (f.kind == Fault::Kind::kDuplicate) {
      duplicate_ = true;
    } else {
      once_.push_back(f);
    }
  }
}

bridge::WireResponse FaultInjectingTransport::post(bridge::WireRequest const& request) {
  DeliveryRecord record{step_, request.path, {}, 0};
  std::optional<Fault> fault;
  if (!once_.empty()) {
    fault = once_.front();
    once_.erase(once_.begin());
  }
  if (fault && fault->kind == Fault::Kind::kDelay) {
    clock_.advance(fault->delay);
    record.fault = "Delay";
  }
  auto response = inner_.post(request);
  if (fault && fault->kind == Fault::Kind::kDropOnce) {
    // Processed by the receiver, but the sender never sees the ack.
    record.fault = "DropOnce";
    response = bridge::WireResponse{0, "ack dropped"};
  } else if (duplicate_) {
    record.fault = record.fault.empty() ? "Duplicate" : record.fault + "+Duplicate";
    response = inner_.post(request);
  }
  record.status = response.status;
  log_.push_back(record);
  return response;
}

// --- runner -------------------------------------------------------------------

namespace {

/// Both services behind api::Handler, either in this process or remote.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual api::Handler& doc() = 0;
  virtual api::Handler& review() = 0;
  virtual void before_step(std::size_t /*step*/, std::vector<Fault> /*faults*/) {}
};

constexpr char kSecret[] = "harness-bridge-secret";

class InProcess final : public Environment {
 public:
  InProcess(ScenarioScript const& script, std::uint64_t seed,
            std::vector<DeliveryRecord>& log, std::chrono::milliseconds advance)
      : advance_(advance),
        doc_service_(DocServiceOptions{kSecret, script.journals, seed, {}, {}}, clock_),
        review_service_(
            ReviewServiceOptions{kSecret, script.journals, seed + 1, {}, {},
                                 "http://doc.local", bridge::kDefaultSsoTtl},
            clock_),
        doc_api_(doc_service_, api::DocApiOptions{true, true}),
        review_api_(review_service_, api::ReviewApiOptions{true, true}),
        to_review_local_(review_api_),
        to_doc_local_(doc_api_),
        to_review_(to_review_local_, clock_, log),
        to_doc_(to_doc_local_, clock_, log) {
    doc_service_.set_review_transport(&to_review_);
    review_service_.set_doc_transport(&to_doc_);
  }

  api::Handler& doc() override { return doc_api_; }
  api::Handler& review() override { return review_api_; }
  void before_step(std::size_t step, std::vector<Fault> faults) override {
    clock_.advance(advance_);
    to_review_.set_step(step, faults);
    to_doc_.set_step(step, std::move(faults));
  }

 private:
  std::chrono::milliseconds advance_;
  ScriptedClock clock_;
  DocService doc_service_;
  ReviewService review_service_;
  api::DocApi doc_api_;
  api::ReviewApi review_api_;
  api::LocalTransport to_review_local_;
  api::LocalTransport to_doc_local_;
  FaultInjectingTransport to_review_;
  FaultInjectingTransport to_doc_;
};

class Live final : public Environment {
 public:
  explicit Live(LiveEndpoints const& e) : doc_(e.doc_url), review_(e.review_url) {}
  api::Handler& doc() override { return doc_; }
  api::Handler& review() override { return review_; }

 private:
  http::Client doc_;
  http::Client review_;
};

Json parse_or_string(std::string const& body) {
  auto j = Json::parse(body, nullptr, false);
  return j.is_discarded() ? Json(body) : j;
}

std::string outcome_of(api::Response const& r) {
  if (r.status >= 200 && r.status < 300) return "ok";
  auto const j = parse_or_string(r.body);
  if (j.is_object() && j.contains("error") && j["error"].is_string()) {
    return j["error"].get<std::string>();
  }
  return "HTTP " + std::to_string(r.status);
}

class Runner {
 public:
  Runner(ScenarioScript const& script, RunOptions const& options, Environment& env,
         RunReport& report)
      : script_(script), options_(options), env_(env), report_(report) {}

  void run() {
    std::vector<Fault> const& faults = options_.faults ? *options_.faults : script_.faults;
    for (std::size_t i = 0; i < script_.steps.size(); ++i) {
      std::vector<Fault> here;
      for (auto const& f : faults) {
        if (f.step == i) here.push_back(f);
      }
      env_.before_step(i, std::move(here));
      auto outcome = execute(i, script_.steps[i]);
      bool const failed = !outcome.passed;
      report_.steps.push_back(std::move(outcome));
      drain_outbox();
      if (failed && options_.fail_fast) break;
    }
    collect();
  }

 private:
  api::Handler& handler(Side side) { return side == Side::kDoc ? env_.doc() : env_.review(); }

  api::Response call(Side side, std::string method, std::string path, Json const& body,
                     std::string const& token) {
    api::Request r;
    r.method = std::move(method);
    r.path = std::move(path);
    r.headers["content-type"] = "application/json";
    if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
    if (r.method != "GET") r.body = body.is_string() ? body.get<std::string>() : body.dump();
    return handler(side).handle(r);
  }

  /// Session token for `actor`, logging in on first use. On failure the
  /// login response is returned instead.
  std::variant<std::string, api::Response> token_for(Side side, std::string const& actor) {
    auto& cache = sessions_[side == Side::kDoc ? 0 : 1];
    if (auto it = cache.find(actor); it != cache.end()) return it->second;
    auto r = call(side, "POST", "/sessions", Json{{"email", actor}}, {});
    if (r.status != 200) return r;
    auto token = r.json().at("token").get<std::string>();
    cache[actor] = token;
    return token;
  }

  StepOutcome execute(std::size_t index, Step const& step) {
    StepOutcome out{index, step.actor, step.action, step.expect, {}, 0, Json(), false};
    auto const& spec = actions().at(step.action);
    Json args = substitute(step.args, vars_);

    auto const finish = [&](api::Response const& r) {
      out.status = r.status;
      out.outcome = outcome_of(r);
      out.body = parse_or_string(r.body);
      out.passed = out.outcome == step.expect;
      if (!out.passed) {
        report_.failures.push_back("step " + std::to_string(index) + " (" + step.action +
                                   "): expected " + step.expect + ", got " + out.outcome);
      }
      if (out.outcome == "ok") {
        bind(index, step, out.body);
        verify(index, step, out);
      }
      return out;
    };

    std::string path = spec.path;
    for (auto const& p : path_params(spec.path)) {
      auto const& v = args.at(p);
      auto const value = v.is_string() ? v.get<std::string>() : v.dump();
      path.replace(path.find("{" + p + "}"), p.size() + 2, value);
      args.erase(p);
    }

    std::string token;
    if (spec.auth) {
      auto t = token_for(spec.side, step.actor);
      if (auto* r = std::get_if<api::Response>(&t)) return finish(*r);
      token = std::get<std::string>(t);
    }

    Json body = args;
    if (step.action == "register_user") {
      if (!body.contains("email")) body["email"] = step.actor;
    } else if (step.action == "import_manuscript") {
      auto const& c = args.value("canonical", Json());
      body = c.is_string() ? c : Json(c.dump());
    } else if (step.action == "edit" && !body.contains("base_revision")) {
      auto current = call(Side::kDoc, "GET", path.substr(0, path.rfind('/')), Json(), token);
      if (current.status != 200) return finish(current);
      body["base_revision"] = current.json().at("revision");
    } else if (step.action == "follow_sso") {
      if (!body.contains("token")) {
        auto it = invitations_.find(normalize_email(step.actor));
        body["token"] = it == invitations_.end() ? std::string() : it->second;
      }
      auto r = call(Side::kDoc, spec.method, path, body, {});
      if (r.status == 200) sessions_[0][step.actor] = r.json().at("token").get<std::string>();
      return finish(r);
    }
    return finish(call(spec.side, spec.method, path, body, token));
  }

  void bind(std::size_t index, Step const& step, Json const& body) {
    for (auto const& [var, pointer] : step.bind) {
      auto const ptr = Json::json_pointer(pointer);
      if (body.contains(ptr)) {
        vars_[var] = body.at(ptr);
      } else {
        report_.failures.push_back("step " + std::to_string(index) + ": bind " + var + " -> " +
                                   pointer + " not found in response");
      }
    }
  }

  void verify(std::size_t index, Step const& step, StepOutcome& out) {
    for (auto const& [pointer, expected] : step.check) {
      auto const ptr = Json::json_pointer(pointer);
      Json const actual = out.body.contains(ptr) ? out.body.at(ptr) : Json();
      if (actual != substitute(expected, vars_)) {
        out.passed = false;
        report_.failures.push_back("step " + std::to_string(index) + ": " + pointer +
                                   " is " + actual.dump() + ", expected " + expected.dump());
      }
    }
  }

  void drain_outbox() {
    auto r = call(Side::kReview, "GET", "/outbox", Json(), {});
    if (r.status != 200) {
      if (!outbox_warned_) {
        report_.failures.push_back("review service does not expose its outbox");
        outbox_warned_ = true;
      }
      return;
    }
    for (auto const& m : r.json()) {
      if (m.value("kind", "") == "ReviewerInvited") {
        invitations_[m.value("recipient_email", "")] = m.value("sso_token", "");
      }
      report_.outbox.push_back(m);
    }
  }

  Json fetch(Side side, char const* path) {
    auto r = call(side, "GET", path, Json(), {});
    if (r.status != 200) {
      report_.failures.push_back(std::string("cannot read ") + path + ": " + outcome_of(r));
      return Json();
    }
    return r.json();
  }

  void collect() {
    report_.doc_events = fetch(Side::kDoc, "/events");
    report_.review_events = fetch(Side::kReview, "/events");
    report_.doc_state = fetch(Side::kDoc, "/state");
    report_.review_state = fetch(Side::kReview, "/state");
    if (report_.review_state.is_object()) {
      for (auto const& s : report_.review_state.value("submissions", Json::array())) {
        report_.terminal_states[s.at("submission_id").get<std::string>()] =
            s.at("label").get<std::string>();
      }
    }
    for (auto const& [key, expected] : script_.expect_terminal) {
      std::string id = key;
      if (key.rfind('$', 0) == 0) {
        auto it = vars_.find(key.substr(1));
        id = it == vars_.end() || !it->second.is_string() ? key : it->second.get<std::string>();
      }
      auto it = report_.terminal_states.find(id);
      auto const actual = it == report_.terminal_states.end() ? "absent" : it->second;
      if (actual != expected) {
        report_.failures.push_back("terminal state of " + key + ": expected " + expected +
                                   ", got " + actual);
      }
    }
  }

  ScenarioScript const& script_;
  RunOptions const& options_;
  Environment& env_;
  RunReport& report_;
  std::map<std::string, Json> vars_;
  std::map<std::string, std::string> sessions_[2];  // doc, review
  std::map<std::string, std::string> invitations_;  // email -> latest SSO token
  bool outbox_warned_ = false;
};

}  // namespace

RunReport run_scenario(ScenarioScript const& script, RunOptions const& options) {
  RunReport report;
  report.scenario = script.name;
  report.seed = options.seed.value_or(script.seed);
  report.mode = options.live ? "live" : "in-process";
  auto const& faults = options.faults ? *options.faults : script.faults;
  for (auto const& f : faults) {
    if (f.step >= script.steps.size()) script_error("fault step out of range");
  }

  std::unique_ptr<Environment> env;
  if (options.live) {
    if (!faults.empty()) script_error("fault injection needs an in-process run");
    env = std::make_unique<Live>(*options.live);
    // Fail early, before any step, when either endpoint is down.
    env->review().handle(api::Request{"GET", "/journals", {}, {}, {}});
    env->doc().handle(api::Request{"GET", "/documents", {}, {}, {}});
  } else {
    env = std::make_unique<InProcess>(script, report.seed, report.deliveries,
                                      options.step_advance);
  }
  Runner(script, options, *env, report).run();
  return report;
}

Json to_json(RunReport const& r) {
  Json steps = Json::array();
  for (auto const& s : r.steps) {
    steps.push_back(Json{{"index", s.index},
                         {"actor", s.actor},
                         {"action", s.action},
                         {"expect", s.expect},
                         {"outcome", s.outcome},
                         {"status", s.status},
                         {"passed", s.passed},
                         {"body", s.body}});
  }
  Json deliveries = Json::array();
  for (auto const& d : r.deliveries) {
    deliveries.push_back(
        Json{{"step", d.step}, {"path", d.path}, {"fault", d.fault}, {"status", d.status}});
  }
  Json j{{"scenario", r.scenario},
         {"seed", r.seed},
         {"mode", r.mode},
         {"passed", r.passed()},
         {"failures", r.failures},
         {"steps", steps},
         {"terminal_states", r.terminal_states},
         {"doc_events", r.doc_events},
         {"review_events", r.review_events},
         {"outbox", r.outbox},
         {"doc_state", r.doc_state},
         {"review_state", r.review_state},
         {"deliveries", deliveries}};
  j["golden"] = r.golden_match ? Json(*r.golden_match ? "match" : "mismatch") : Json();
  return j;
}

std::string golden_text(RunReport const& r) {
  return Json{{"doc_events", r.doc_events}, {"review_events", r.review_events}}.dump(2) + "\n";
}

// --- diffing ------------------------------------------------------------------

std::set<std::string> default_ignore() {
  return {"timestamp",  "created_at", "granted_at", "opened_at", "issued_at",
          "expires_at", "token",      "sso_token",  "delivery",  "duplicate"};
}

namespace {

class Normalizer {
 public:
  explicit Normalizer(std::set<std::string> const& ignore) : ignore_(ignore) {}

  Json operator()(Json const& j) {
    if (j.is_object()) {
      Json out = Json::object();
      for (auto const& [k, v] : j.items()) {
        if (ignore_.count(k)) continue;
        out[text(k)] = (*this)(v);
      }
      return out;
    }
    if (j.is_array()) {
      Json out = Json::array();
      for (auto const& v : j) out.push_back((*this)(v));
      return out;
    }
    if (j.is_string()) return text(j.get<std::string>());
    return j;
  }

 private:
  std::string text(std::string const& s) {
    static std::regex const ids(R"(\b(du|doc|cm|ru|sub|asg|msg)-(\d+)\b)");
    static std::regex const sso(R"(token=[0-9a-f.]+)");
    auto const tokens_masked = std::regex_replace(s, sso, "token=<token>");
    std::string out;
    auto last = tokens_masked.cbegin();
    for (std::sregex_iterator it(tokens_masked.begin(), tokens_masked.end(), ids), end;
         it != end; ++it) {
      out.append(last, (*it)[0].first);
      auto const prefix = (*it)[1].str();
      auto [pos, fresh] = ids_.try_emplace((*it)[0].str(), 0);
      if (fresh) pos->second = ++counters_[prefix];
      out += prefix + "#" + std::to_string(pos->second);
      last = (*it)[0].second;
    }
    out.append(last, tokens_masked.cend());
    return out;
  }

  std::set<std::string> const& ignore_;
  std::map<std::string, int> ids_;
  std::map<std::string, int> counters_;
};

Json comparable(RunReport const& r, std::set<std::string> const& ignore) {
  auto j = to_json(r);
  for (auto const* k : {"mode", "passed", "failures", "golden", "deliveries", "seed"}) {
    j.erase(k);
  }
  return Normalizer(ignore)(j);
}

void diff_json(Json const& a, Json const& b, std::string const& path,
               std::vector<std::string>& out) {
  if (a.type() != b.type()) {
    out.push_back(path + ": " + a.dump() + " != " + b.dump());
    return;
  }
  if (a.is_object()) {
    std::set<std::string> keys;
    for (auto const& [k, v] : a.items()) keys.insert(k);
    for (auto const& [k, v] : b.items()) keys.insert(k);
    for (auto const& k : keys) {
      auto const p = path + "/" + k;
      if (!a.contains(k)) {
        out.push_back(p + ": missing on the left");
      } else if (!b.contains(k)) {
        out.push_back(p + ": missing on the right");
      } else {
        diff_json(a[k], b[k], p, out);
      }
    }
  } else if (a.is_array()) {
    if (a.size() != b.size()) {
      out.push_back(path + ": length " + std::to_string(a.size()) +
                    " != " + std::to_string(b.size()));
    }
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      diff_json(a[i], b[i], path + "/" + std::to_string(i), out);
    }
  } else if (a != b) {
    out.push_back(path + ": " + a.dump() + " != " + b.dump());
  }
}

}  // namespace

std::vector<std::string> diff_state(RunReport const& a, RunReport const& b,
                                    std::set<std::string> const& ignore) {
  std::vector<std::string> out;
  diff_json(comparable(a, ignore), comparable(b, ignore), "", out);
  return out;
}

std::vector<Fault> random_faults(ScenarioScript const& script, std::uint64_t seed) {
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    if (actions().at(script.steps[i].action).crosses_bridge) targets.push_back(i);
  }
  if (targets.empty()) {
    for (std::size_t i = 0; i < script.steps.size(); ++i) targets.push_back(i);
  }
  std::vector<Fault> out;
  if (targets.empty()) return out;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, targets.size()));
  std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::int64_t> delay(1, 5'000);
  for (auto n = count(rng); n > 0; --n) {
    Fault f;
    f.step = targets[pick(rng)];
    f.kind = static_cast<Fault::Kind>(kind(rng));
    if (f.kind == Fault::Kind::kDelay) f.delay = std::chrono::milliseconds(delay(rng));
    out.push_back(f);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](Fault const& x, Fault const& y) { return x.step < y.step; });
  return out;
}

}  // namespace revbridge::harness
