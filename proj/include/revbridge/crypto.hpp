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
#include <random>
#include <string>
#include <string_view>

#include "json.hpp"

namespace revbridge {

std::string to_hex(std::string_view bytes);
/// Returns false on odd length or non-hex characters.
bool from_hex(std::string_view hex, std::string& out);

std::string sha256_hex(std::string_view data);
std::string hmac_sha256_hex(std::string_view key, std::string_view data);

/// Comparison whose duration does not depend on where the inputs differ.
bool constant_time_equal(std::string_view a, std::string_view b);

/// UTF-8 JSON, lexicographically sorted keys, no insignificant whitespace.
/// This is the exact byte string that gets signed and hashed.
std::string canonical_json(nlohmann::json const& value);

/// 128 random bits as 32 lowercase hex digits.
std::string random_hex128(std::mt19937_64& rng);

}  // namespace revbridge
