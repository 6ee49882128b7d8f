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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <thread>

namespace revbridge {

/// Milliseconds since the Unix epoch.
using Timestamp = std::int64_t;

/// Injected time source. Everything that reads the time or waits goes
/// through one of these so scripted runs stay deterministic.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  }
  void sleep_for(std::chrono::milliseconds d) override {
    std::this_thread::sleep_for(d);
  }
};

/// Manually advanced clock; sleeping advances it instead of blocking.
class ScriptedClock final : public Clock {
 public:
  static constexpr Timestamp kDefaultEpoch = 1'767'225'600'000;  // 2026-01-01Z

  explicit ScriptedClock(Timestamp start = kDefaultEpoch) : now_(start) {}

  Timestamp now() const override { return now_.load(); }
  void sleep_for(std::chrono::milliseconds d) override { advance(d); }
  void advance(std::chrono::milliseconds d) { now_ += d.count(); }
  void set(Timestamp t) { now_ = t; }

 private:
  std::atomic<Timestamp> now_;
};

}  // namespace revbridge
