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

#include "revbridge/manuscript.hpp"

#include <algorithm>
#include <set>

#include "revbridge/crypto.hpp"
#include "revbridge/error.hpp"

namespace revbridge {
namespace {

struct KindName {
  BlockKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {BlockKind::kHeading, "heading"},
    {BlockKind::kParagraph, "paragraph"},
    {BlockKind::kFigurePlaceholder, "figure_placeholder"},
    {BlockKind::kTable, "table"},
    {BlockKind::kFormula, "formula"},
    {BlockKind::kCitationRef, "citation_ref"},
};

[[noreturn]] void parse_fail(std::string const& where, std::string const& what) {
  throw Error(ErrorCode::kParseError, "at " + where + ": " + what);
}

}  // namespace

std::string_view to_string(BlockKind kind) {
  for (auto const& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

BlockKind block_kind_from_string(std::string_view name) {
  for (auto const& k : kKindNames) {
    if (k.name == name) return k.kind;
  }
  throw Error(ErrorCode::kBadRequest, "unknown block kind '" + std::string(name) + "'");
}

void validate_block(Block const& block) {
  if (block.block_id.empty()) throw Error(ErrorCode::kBadRequest, "block id is empty");
  if (block.kind == BlockKind::kHeading) {
    if (block.level < 1 || block.level > 3) {
      throw Error(ErrorCode::kBadRequest, "heading level must be 1..3");
    }
  } else if (block.level != 0) {
    throw Error(ErrorCode::kBadRequest, "only headings carry a level");
  }
}

std::size_t text_length(std::string_view utf8) {
  return static_cast<std::size_t>(std::count_if(utf8.begin(), utf8.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

Block const* Manuscript::find_block(std::string_view block_id) const {
  auto it = std::find_if(blocks.begin(), blocks.end(),
                         [&](Block const& b) { return b.block_id == block_id; });
  return it == blocks.end() ? nullptr : &*it;
}

std::vector<Block> apply_block_ops(std::vector<Block> const& blocks,
                                   std::vector<BlockOp> const& ops) {
  std::vector<Block> out = blocks;
  auto locate = [&](std::string const& id) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](Block const& b) { return b.block_id == id; });
    if (it == out.end()) throw Error(ErrorCode::kNotFound, "no block '" + id + "'");
    return it;
  };

  for (auto const& op : ops) {
    switch (op.kind) {
      case BlockOp::Kind::kInsert: {
        validate_block(op.block);
        if (std::any_of(out.begin(), out.end(), [&](Block const& b) {
              return b.block_id == op.block.block_id;
            })) {
          throw Error(ErrorCode::kBadRequest, "duplicate block id '" + op.block.block_id + "'");
        }
        auto const at = std::min(op.index.value_or(out.size()), out.size());
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), op.block);
        break;
      }
      case BlockOp::Kind::kReplace: {
        auto it = locate(op.block_id);
        Block replacement = op.block;
        replacement.block_id = op.block_id;
        validate_block(replacement);
        *it = std::move(replacement);
        break;
      }
      case BlockOp::Kind::kDelete:
        out.erase(locate(op.block_id));
        break;
    }
  }
  return out;
}

void to_json(Json& j, Block const& b) {
  j = Json{{"id", b.block_id}, {"kind", to_string(b.kind)}, {"text", b.text}};
  if (b.kind == BlockKind::kHeading) j["level"] = b.level;
}

void from_json(Json const& j, Block& b) {
  j.at("id").get_to(b.block_id);
  b.kind = block_kind_from_string(j.at("kind").get<std::string>());
  b.level = j.value("level", 0);
  b.text = j.value("text", "");
}

void to_json(Json& j, BlockOp const& op) {
  switch (op.kind) {
    case BlockOp::Kind::kInsert:
      j = Json{{"op", "insert"}, {"block", op.block}};
      if (op.index) j["index"] = *op.index;
      break;
    case BlockOp::Kind::kReplace:
      j = Json{{"op", "replace"}, {"block_id", op.block_id}, {"block", op.block}};
      break;
    case BlockOp::Kind::kDelete:
      j = Json{{"op", "delete"}, {"block_id", op.block_id}};
      break;
  }
}

void from_json(Json const& j, BlockOp& op) {
  auto const name = j.at("op").get<std::string>();
  if (name == "insert") {
    op = BlockOp::insert(j.at("block").get<Block>());
    if (j.contains("index")) op.index = j.at("index").get<std::size_t>();
  } else if (name == "replace") {
    Json block = j.at("block");
    block["id"] = j.at("block_id");
    op = BlockOp::replace(j.at("block_id").get<std::string>(), block.get<Block>());
  } else if (name == "delete") {
    op = BlockOp::remove(j.at("block_id").get<std::string>());
  } else {
    throw Error(ErrorCode::kBadRequest, "unknown block op '" + name + "'");
  }
}

std::string serialize_canonical(std::string const& title, std::uint64_t revision,
                                std::vector<Block> const& blocks) {
  using Ordered = nlohmann::ordered_json;
  Ordered out;
  out["title"] = title;
  out["revision"] = revision;
  Ordered arr = Ordered::array();
  for (auto const& b : blocks) {
    Ordered jb;
    jb["id"] = b.block_id;
    jb["kind"] = to_string(b.kind);
    if (b.kind == BlockKind::kHeading) jb["level"] = b.level;
    jb["text"] = b.text;
    arr.push_back(std::move(jb));
  }
  out["blocks"] = std::move(arr);
  return out.dump();
}

Snapshot make_snapshot(Manuscript const& doc) {
  Snapshot s;
  s.document_id = doc.document_id;
  s.revision = doc.revision;
  s.canonical = serialize_canonical(doc.title, doc.revision, doc.blocks);
  s.content_hash = sha256_hex(s.canonical);
  return s;
}

ParsedManuscript parse_canonical(std::string_view bytes) {
  Json root;
  try {
    root = Json::parse(bytes);
  } catch (Json::parse_error const& e) {
    parse_fail("byte " + std::to_string(e.byte), e.what());
  }
  if (!root.is_object()) parse_fail("/", "expected an object");
  for (auto const& [key, value] : root.items()) {
    if (key != "title" && key != "revision" && key != "blocks") {
      parse_fail("/" + key, "unexpected field");
    }
  }

  ParsedManuscript out;
  auto const title = root.find("title");
  if (title == root.end() || !title->is_string() || title->get<std::string>().empty()) {
    parse_fail("/title", "expected a non-empty string");
  }
  out.title = title->get<std::string>();

  auto const revision = root.find("revision");
  if (revision == root.end() || !revision->is_number_unsigned()) {
    parse_fail("/revision", "expected a non-negative integer");
  }
  out.revision = revision->get<std::uint64_t>();

  auto const blocks = root.find("blocks");
  if (blocks == root.end() || !blocks->is_array()) parse_fail("/blocks", "expected an array");

  std::set<std::string> seen;
  for (std::size_t i = 0; i < blocks->size(); ++i) {
    auto const& jb = (*blocks)[i];
    std::string const where = "/blocks/" + std::to_string(i);
    if (!jb.is_object()) parse_fail(where, "expected an object");
    for (auto const& [key, value] : jb.items()) {
      if (key != "id" && key != "kind" && key != "level" && key != "text") {
        parse_fail(where + "/" + key, "unexpected field");
      }
    }
    Block b;
    if (!jb.contains("id") || !jb["id"].is_string()) parse_fail(where + "/id", "expected a string");
    if (!jb.contains("kind") || !jb["kind"].is_string()) {
      parse_fail(where + "/kind", "expected a string");
    }
    if (!jb.contains("text") || !jb["text"].is_string()) {
      parse_fail(where + "/text", "expected a string");
    }
    b.block_id = jb["id"].get<std::string>();
    try {
      b.kind = block_kind_from_string(jb["kind"].get<std::string>());
    } catch (Error const& e) {
      parse_fail(where + "/kind", e.detail());
    }
    if (jb.contains("level")) {
      if (!jb["level"].is_number_integer()) parse_fail(where + "/level", "expected an integer");
      b.level = jb["level"].get<int>();
    }
    b.text = jb["text"].get<std::string>();
    try {
      validate_block(b);
    } catch (Error const& e) {
      parse_fail(where, e.detail());
    }
    if (!seen.insert(b.block_id).second) parse_fail(where + "/id", "duplicate block id");
    out.blocks.push_back(std::move(b));
  }
  return out;
}

}  // namespace revbridge
