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

#include <random>
#include <string>
#include <vector>

#include "revbridge/manuscript.hpp"

namespace revbridge::testing {

/// Text drawn from ASCII, JSON-hostile characters and multi-byte UTF-8.
inline std::string random_text(std::mt19937_64& rng, std::size_t max_pieces) {
  static char const* const kPieces[] = {
      "a", "Z", "0", " ", "letters", "\"", "\\", "/", "\n", "\t", "\x01", "\x1f",
      "\xc3\xa9",          // e acute
      "\xe2\x82\xac",      // euro sign
      "\xe6\x96\x87",      // CJK
      "\xf0\x9f\x93\x9c",  // scroll emoji
      "{}", "[]", ":", ",", "<b>", "&amp;",
  };
  std::uniform_int_distribution<std::size_t> n(0, max_pieces);
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kPieces) - 1);
  std::string out;
  for (auto k = n(rng); k > 0; --k) out += kPieces[pick(rng)];
  return out;
}

inline std::vector<Block> random_blocks(std::mt19937_64& rng, std::size_t max_blocks) {
  static BlockKind const kKinds[] = {BlockKind::kHeading,  BlockKind::kParagraph,
                                     BlockKind::kFigurePlaceholder, BlockKind::kTable,
                                     BlockKind::kFormula,  BlockKind::kCitationRef};
  std::uniform_int_distribution<std::size_t> count(0, max_blocks);
  std::vector<Block> blocks;
  for (auto i = count(rng); i > 0; --i) {
    Block b;
    b.block_id = "b" + std::to_string(blocks.size()) + "-" + std::to_string(rng() % 1000);
    b.kind = kKinds[rng() % std::size(kKinds)];
    b.level = b.kind == BlockKind::kHeading ? static_cast<int>(1 + rng() % 3) : 0;
    b.text = random_text(rng, 12);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

inline std::string random_title(std::mt19937_64& rng) {
  auto t = random_text(rng, 6);
  return t.empty() ? std::string("Untitled") : "T " + t;
}

}  // namespace revbridge::testing
