// Copyright 2026 The colt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "colt/outline.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace colt {

std::string_view diagnostic_kind_name(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kLevelSkip: return "LevelSkip";
    case DiagnosticKind::kDuplicateIndex: return "DuplicateIndex";
    case DiagnosticKind::kRenumbered: return "Renumbered";
    case DiagnosticKind::kForeignRoot: return "ForeignRoot";
    case DiagnosticKind::kOrphanLine: return "OrphanLine";
    case DiagnosticKind::kDuplicateEntity: return "DuplicateEntity";
  }
  return "Unknown";
}

std::string format_index(const std::vector<int>& index) {
  std::string out;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(index[i]);
  }
  return out;
}

namespace {

struct RawLine {
  std::size_t line_no;
  std::vector<int> index;
  std::string surface;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Accepts "1.", "1.2", "1.2." followed by whitespace and a non-empty name.
std::optional<RawLine> match_line(std::string_view line, std::size_t line_no) {
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  RawLine out{line_no, {}, {}};
  while (true) {
    std::size_t start = i;
    while (i < line.size() && is_digit(line[i])) ++i;
    std::size_t len = i - start;
    if (len == 0 || len > 6) return std::nullopt;
    int value = std::stoi(std::string(line.substr(start, len)));
    if (value <= 0) return std::nullopt;
    out.index.push_back(value);
    if (i < line.size() && line[i] == '.') {
      ++i;
      if (i < line.size() && is_digit(line[i])) continue;
    }
    break;
  }
  if (i >= line.size() || !is_space(line[i])) return std::nullopt;
  while (i < line.size() && is_space(line[i])) ++i;
  std::size_t end = line.size();
  while (end > i && is_space(line[end - 1])) --end;
  if (end <= i) return std::nullopt;
  out.surface = std::string(line.substr(i, end - i));
  return out;
}

}  // namespace

ParsedOutline parse_outline(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), is_space)) {
    throw Error(ErrorCode::kEmptyInput, "outline text is empty");
  }

  ParsedOutline result;
  auto& lines = result.outline.lines;
  auto& diags = result.diagnostics;
  std::map<std::vector<int>, int> by_source_index;
  std::set<std::vector<int>> used;
  std::vector<int> max_child;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw_text = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    auto raw = match_line(raw_text, line_no);
    if (!raw) continue;
    const auto& idx = raw->index;
    const std::string label = format_index(idx);

    if (idx.front() != 1) {
      diags.push_back({DiagnosticKind::kForeignRoot, line_no,
                       "index " + label + " is outside the single root family"});
      continue;
    }
    if (by_source_index.count(idx)) {
      diags.push_back({DiagnosticKind::kDuplicateIndex, line_no,
                       "index " + label + " repeated; keeping first"});
      continue;
    }
    if (idx.size() == 1) {
      lines.push_back({{1}, raw->surface});
      by_source_index[idx] = static_cast<int>(lines.size()) - 1;
      used.insert({1});
      max_child.push_back(0);
      continue;
    }
    if (lines.empty()) {
      diags.push_back({DiagnosticKind::kOrphanLine, line_no,
                       "line " + label + " precedes the root line"});
      continue;
    }

    int parent = -1;
    bool skipped = false;
    for (std::size_t len = idx.size() - 1; len >= 1; --len) {
      std::vector<int> prefix(idx.begin(), idx.begin() + len);
      auto it = by_source_index.find(prefix);
      if (it != by_source_index.end()) {
        parent = it->second;
        skipped = len != idx.size() - 1;
        break;
      }
    }
    if (parent < 0) {
      diags.push_back({DiagnosticKind::kOrphanLine, line_no,
                       "line " + label + " has no known ancestor"});
      continue;
    }

    std::vector<int> out_index = lines[parent].index;
    out_index.push_back(idx.back());
    if (skipped || used.count(out_index)) {
      out_index.back() = max_child[parent] + 1;
      if (skipped) {
        diags.push_back({DiagnosticKind::kLevelSkip, line_no,
                         "index " + label + " skips a level; placed as " +
                             format_index(out_index)});
      } else {
        diags.push_back({DiagnosticKind::kRenumbered, line_no,
                         "index " + label + " renumbered to " +
                             format_index(out_index)});
      }
    }
    max_child[parent] = std::max(max_child[parent], out_index.back());
    used.insert(out_index);
    lines.push_back({out_index, raw->surface});
    max_child.push_back(0);
    by_source_index[idx] = static_cast<int>(lines.size()) - 1;
  }

  if (lines.empty()) {
    throw Error(ErrorCode::kNoRootLine, "no line indexed as 1.");
  }
  return result;
}

std::vector<int> outline_parents(const Outline& outline) {
  std::map<std::vector<int>, int> position;
  std::vector<int> parents;
  parents.reserve(outline.lines.size());
  for (std::size_t i = 0; i < outline.lines.size(); ++i) {
    const auto& idx = outline.lines[i].index;
    int parent = -1;
    if (idx.size() > 1) {
      std::vector<int> prefix(idx.begin(), idx.end() - 1);
      auto it = position.find(prefix);
      if (it == position.end()) {
        throw Error(ErrorCode::kPrecondition,
                    "outline line " + format_index(idx) +
                        " appears before its parent");
      }
      parent = it->second;
    } else if (i != 0) {
      throw Error(ErrorCode::kPrecondition, "outline has a second root line");
    }
    position[idx] = static_cast<int>(i);
    parents.push_back(parent);
  }
  return parents;
}

Taxonomy outline_to_taxonomy(const Outline& outline, bool lenient,
                             std::vector<Diagnostic>* diagnostics) {
  if (outline.lines.empty()) {
    throw Error(ErrorCode::kNoRootLine, "outline has no lines");
  }
  const auto parents = outline_parents(outline);
  const Entity root(outline.lines.front().surface);

  if (!lenient) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < outline.lines.size(); ++i) {
      edges.push_back({Entity(outline.lines[parents[i]].surface),
                       Entity(outline.lines[i].surface)});
    }
    return Taxonomy::build(root, edges);
  }

  Taxonomy t(root);
  // Key each line resolved to; repeats resolve to the first occurrence.
  std::vector<std::string> resolved(outline.lines.size());
  resolved[0] = root.key();
  for (std::size_t i = 1; i < outline.lines.size(); ++i) {
    Entity e(outline.lines[i].surface);
    resolved[i] = e.key();
    if (t.contains(e)) {
      if (diagnostics) {
        diagnostics->push_back(
            {DiagnosticKind::kDuplicateEntity, 0,
             "'" + e.key() + "' at " + format_index(outline.lines[i].index) +
                 " already placed; later occurrence dropped"});
      }
      continue;
    }
    t.add_leaf(*t.find(resolved[parents[i]]), e);
  }
  return t;
}

std::string render_outline(const Taxonomy& t) {
  std::string out = "1. " + t.root().surface();
  // (entity, index) in preorder
  std::vector<std::pair<Entity, std::vector<int>>> stack;
  auto push_children = [&](const Entity& e, const std::vector<int>& idx) {
    auto kids = t.children_of(e);
    for (int i = static_cast<int>(kids.size()) - 1; i >= 0; --i) {
      auto child_idx = idx;
      child_idx.push_back(i + 1);
      stack.emplace_back(kids[i], std::move(child_idx));
    }
  };
  push_children(t.root(), {1});
  while (!stack.empty()) {
    auto [e, idx] = std::move(stack.back());
    stack.pop_back();
    out += "\n" + format_index(idx) + " " + e.surface();
    push_children(e, idx);
  }
  return out;
}

}  // namespace colt
