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
#include <memory>
#include <string>
#include <thread>

#include "revbridge/api.hpp"
#include "revbridge/bridge.hpp"

namespace revbridge::http {

/// Serves an api::Handler over HTTP on a background thread.
class Server {
 public:
  explicit Server(api::Handler& handler);
  ~Server();

  Server(Server const&) = delete;
  Server& operator=(Server const&) = delete;

  /// Binds and starts listening. Port 0 picks a free port. Throws
  /// EndpointUnreachable if the socket cannot be bound.
  int start(std::string const& host, int port);
  int port() const { return port_; }
  /// Blocks the calling thread until stop() is called elsewhere.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

/// An api::Handler that forwards each request to a remote base URL.
/// Connection failures surface as EndpointUnreachable.
class Client final : public api::Handler {
 public:
  explicit Client(std::string base_url,
                  std::chrono::milliseconds timeout = std::chrono::seconds(5));
  ~Client() override;

  api::Response handle(api::Request const& request) override;
  std::string const& base_url() const { return base_url_; }

 private:
  struct Impl;
  std::string base_url_;
  std::unique_ptr<Impl> impl_;
};

/// Bridge transport over HTTP. Connection failures become status 0 so the
/// delivery loop retries them.
class Transport final : public bridge::Transport {
 public:
  explicit Transport(std::string base_url,
                     std::chrono::milliseconds timeout = std::chrono::seconds(5))
      : client_(std::move(base_url), timeout) {}

  bridge::WireResponse post(bridge::WireRequest const& request) override;

 private:
  Client client_;
};

}  // namespace revbridge::http
