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

#include "revbridge/http.hpp"

#include <mutex>
#include <regex>

#include "httplib.h"

namespace revbridge::http {
namespace {

api::Request from_httplib(httplib::Request const& req) {
  api::Request out;
  out.method = req.method;
  out.path = req.path;
  out.body = req.body;
  for (auto const& [k, v] : req.params) out.query.emplace(k, v);
  for (auto const& [k, v] : req.headers) {
    std::string key = k;
    for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.headers.emplace(std::move(key), v);
  }
  return out;
}

std::string query_string(std::map<std::string, std::string> const& query) {
  if (query.empty()) return {};
  httplib::Params params(query.begin(), query.end());
  return "?" + httplib::detail::params_to_query_str(params);
}

}  // namespace

struct Server::Impl {
  explicit Impl(api::Handler& h) : handler(h) {}
  api::Handler& handler;
  httplib::Server server;
};

Server::Server(api::Handler& handler) : impl_(std::make_unique<Impl>(handler)) {
  auto route = [this](httplib::Request const& req, httplib::Response& res) {
    auto const response = impl_->handler.handle(from_httplib(req));
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  // SO_REUSEADDR only: a second instance on the same port must fail to bind.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<char const*>(&yes),
               sizeof(yes));
  });
  impl_->server.Get(".*", route);
  impl_->server.Post(".*", route);
  impl_->server.Put(".*", route);
  impl_->server.Delete(".*", route);
}

Server::~Server() { stop(); }

int Server::start(std::string const& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) {
    throw Error(ErrorCode::kEndpointUnreachable,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void Server::wait() {
  if (thread_.joinable()) thread_.join();
}

void Server::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

struct Client::Impl {
  Impl(std::string const& url, std::chrono::milliseconds timeout) : client(url) {
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
  }
  std::mutex mu;
  httplib::Client client;
};

Client::Client(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), impl_(std::make_unique<Impl>(base_url_, timeout)) {
  static std::regex const url(R"(^https?://[A-Za-z0-9._\-]+(:[0-9]{1,5})?/?$)");
  if (!std::regex_match(base_url_, url) || !impl_->client.is_valid()) {
    throw Error(ErrorCode::kEndpointUnreachable, "invalid base URL " + base_url_);
  }
}

Client::~Client() = default;

api::Response Client::handle(api::Request const& request) {
  httplib::Headers headers;
  for (auto const& [k, v] : request.headers) headers.emplace(k, v);
  auto const target = request.path + query_string(request.query);
  auto const content_type = request.header("content-type").empty()
                                ? std::string("application/json")
                                : request.header("content-type");

  std::lock_guard lock(impl_->mu);
  httplib::Result result{nullptr, httplib::Error::Unknown};
  if (request.method == "GET") {
    result = impl_->client.Get(target, headers);
  } else if (request.method == "POST") {
    result = impl_->client.Post(target, headers, request.body, content_type);
  } else if (request.method == "PUT") {
    result = impl_->client.Put(target, headers, request.body, content_type);
  } else if (request.method == "DELETE") {
    result = impl_->client.Delete(target, headers, request.body, content_type);
  } else {
    throw Error(ErrorCode::kBadRequest, "unsupported method " + request.method);
  }
  if (!result) {
    throw Error(ErrorCode::kEndpointUnreachable,
                base_url_ + target + ": " + httplib::to_string(result.error()));
  }
  auto const ct = result->get_header_value("Content-Type");
  return api::Response{result->status, result->body,
                       ct.empty() ? std::string("application/json") : ct};
}

bridge::WireResponse Transport::post(bridge::WireRequest const& request) {
  api::Request r;
  r.method = "POST";
  r.path = request.path;
  r.body = request.body;
  r.headers["content-type"] = "application/json";
  r.headers[bridge::kSignatureHeader] = request.signature;
  r.headers[bridge::kIdempotencyHeader] = request.idempotency_key;
  try {
    auto const response = client_.handle(r);
    return bridge::WireResponse{response.status, response.body};
  } catch (Error const& e) {
    if (e.code() != ErrorCode::kEndpointUnreachable) throw;
    return bridge::WireResponse{0, e.detail()};
  }
}

}  // namespace revbridge::http
