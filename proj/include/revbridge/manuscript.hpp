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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revbridge/core.hpp"

namespace revbridge {

enum class BlockKind {
  kHeading,
  kParagraph,
  kFigurePlaceholder,
  kTable,
  kFormula,
  kCitationRef,
};

std::string_view to_string(BlockKind kind);
BlockKind block_kind_from_string(std::string_view name);

struct Block {
  std::string block_id;
  BlockKind kind = BlockKind::kParagraph;
  int level = 0;  // 1..3 for headings, 0 otherwise
  std::string text;

  friend bool operator==(Block const&, Block const&) = default;
};

/// Throws BadRequest for an empty id or a heading level outside 1..3.
void validate_block(Block const& block);

/// Length in Unicode code points; anchors are measured in these.
std::size_t text_length(std::string_view utf8);

struct Manuscript {
  std::string document_id;
  std::string title;
  std::vector<Block> blocks;
  std::uint64_t revision = 0;
  std::string owner;

  Block const* find_block(std::string_view block_id) const;
};

struct BlockOp {
  enum class Kind { kInsert, kReplace, kDelete };

  Kind kind = Kind::kInsert;
  std::optional<std::size_t> index;  // insert position; default is the end
  std::string block_id;              // replace/delete target
  Block block;                       // insert/replace content

  static BlockOp insert(Block b, std::optional<std::size_t> at = std::nullopt) {
    return {Kind::kInsert, at, {}, std::move(b)};
  }
  static BlockOp replace(std::string id, Block b) {
    return {Kind::kReplace, std::nullopt, std::move(id), std::move(b)};
  }
  static BlockOp remove(std::string id) {
    return {Kind::kDelete, std::nullopt, std::move(id), {}};
  }
};

/// Applies all ops to a copy and returns it; `blocks` is untouched when any
/// op fails. Replace keeps the target's id.
std::vector<Block> apply_block_ops(std::vector<Block> const& blocks,
                                   std::vector<BlockOp> const& ops);

void to_json(Json& j, Block const& b);
void from_json(Json const& j, Block& b);
void to_json(Json& j, BlockOp const& op);
void from_json(Json const& j, BlockOp& op);

struct Snapshot {
  std::string document_id;
  std::uint64_t revision = 0;
  std::string canonical;     // exact bytes
  std::string content_hash;  // SHA-256 hex of `canonical`
};

/// Canonical manuscript bytes: {"title","revision","blocks":[{"id","kind",
/// "level"?,"text"}]} with keys in exactly that order, no whitespace.
std::string serialize_canonical(std::string const& title, std::uint64_t revision,
                                std::vector<Block> const& blocks);

Snapshot make_snapshot(Manuscript const& doc);

struct ParsedManuscript {
  std::string title;
  std::uint64_t revision = 0;
  std::vector<Block> blocks;
};

/// Throws ParseError; the message names a byte offset for syntax errors and
/// a JSON pointer for structural ones.
ParsedManuscript parse_canonical(std::string_view bytes);

}  // namespace revbridge
