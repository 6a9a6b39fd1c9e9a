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

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "colt/harness.h"
#include "json.hpp"

namespace colt {

using nlohmann::json;

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "test";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev" || name == "valid" || name == "validation") {
    return Split::kDev;
  }
  if (name == "test") return Split::kTest;
  throw Error(ErrorCode::kParseError,
              "unknown split '" + std::string(name) + "'");
}

DatasetRecord make_record(std::string name, const Entity& root,
                          std::vector<Entity> entities,
                          std::span<const Edge> edges, Split split) {
  std::set<std::string> keys;
  std::vector<Entity> unique;
  for (auto& e : entities) {
    if (keys.insert(e.key()).second) unique.push_back(std::move(e));
  }
  if (!keys.count(root.key())) {
    throw Error(ErrorCode::kInvariantViolation,
                name + ": root '" + root.surface() + "' not in entities",
                {root.key()});
  }
  std::optional<Taxonomy> gold;
  try {
    gold = Taxonomy::build(root, edges, unique);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvariantViolation, name + ": " + e.what(),
                e.entities());
  }
  if (gold->root() != root) {
    throw Error(ErrorCode::kInvariantViolation,
                name + ": gold root is '" + gold->root().surface() + "'");
  }
  std::vector<std::string> missing;
  for (const auto& n : gold->nodes()) {
    if (!keys.count(n.key())) missing.push_back(n.key());
  }
  if (!missing.empty() || gold->size() != unique.size()) {
    throw Error(ErrorCode::kInvariantViolation,
                name + ": entity list and gold nodes differ", missing);
  }
  return DatasetRecord{std::move(name), root, std::move(unique),
                       std::move(*gold), split};
}

DatasetRecord record_from_taxonomy(std::string name, const Taxonomy& t,
                                   Split split) {
  return DatasetRecord{std::move(name), t.root(), t.nodes(), t, split};
}

namespace {

DatasetRecord record_from_json(const json& j, const std::string& where) {
  auto fail = [&](const std::string& msg) {
    return Error(ErrorCode::kParseError, where + ": " + msg);
  };
  if (!j.is_object()) throw fail("record is not an object");
  for (const char* field : {"name", "root", "entities", "edges"}) {
    if (!j.contains(field)) throw fail(std::string("missing '") + field + "'");
  }
  try {
    std::string name = j.at("name").get<std::string>();
    Entity root(j.at("root").get<std::string>());
    std::vector<Entity> entities;
    for (const auto& e : j.at("entities")) {
      entities.emplace_back(e.get<std::string>());
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw fail("edge must be a [parent, child] pair");
      }
      edges.push_back({Entity(e[0].get<std::string>()),
                       Entity(e[1].get<std::string>())});
    }
    Split split = Split::kTest;
    if (j.contains("split")) split = parse_split(j.at("split").get<std::string>());
    return make_record(std::move(name), root, std::move(entities), edges,
                       split);
  } catch (const json::exception& e) {
    throw fail(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvariantViolation) {
      throw Error(e.code(), where + ": " + e.what(), e.entities());
    }
    if (e.code() == ErrorCode::kParseError) throw;
    throw fail(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json record_json(const DatasetRecord& r) {
  json entities = json::array();
  for (const auto& e : r.entities) entities.push_back(e.surface());
  json edges = json::array();
  for (const auto& e : r.gold.edges()) {
    edges.push_back({e.parent.surface(), e.child.surface()});
  }
  json j;
  j["name"] = r.name;
  j["root"] = r.root.surface();
  j["entities"] = std::move(entities);
  j["edges"] = std::move(edges);
  j["split"] = std::string(split_name(r.split));
  return j;
}

}  // namespace

std::vector<DatasetRecord> parse_dataset(std::string_view text,
                                         std::string_view source) {
  const std::string src(source);
  std::vector<DatasetRecord> out;
  json doc = json::parse(text, nullptr, false);
  if (!doc.is_discarded()) {
    if (doc.is_object() && doc.contains("records")) doc = doc["records"];
    if (doc.is_array()) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        out.push_back(
            record_from_json(doc[i], src + ": record " + std::to_string(i + 1)));
      }
    } else {
      out.push_back(record_from_json(doc, src));
    }
    return out;
  }
  // JSONL
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = src + ":" + std::to_string(line_no);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kParseError, where + ": invalid JSON");
    out.push_back(record_from_json(j, where));
  }
  if (out.empty()) throw Error(ErrorCode::kParseError, src + ": no records");
  return out;
}

DatasetRecord record_from_edge_list(std::string_view text, std::string name,
                                    Split split) {
  std::vector<Edge> edges;
  std::vector<Entity> entities;
  std::set<std::string> seen;
  std::set<std::string> children;
  auto note = [&](const Entity& e) {
    if (seen.insert(e.key()).second) entities.push_back(e);
  };
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  name + ":" + std::to_string(line_no) + ": expected parent<TAB>child");
    }
    try {
      Edge e{Entity(line.substr(0, tab)), Entity(line.substr(tab + 1))};
      note(e.parent);
      note(e.child);
      children.insert(e.child.key());
      edges.push_back(std::move(e));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError,
                  name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<Entity> roots;
  for (const auto& e : entities) {
    if (!children.count(e.key())) roots.push_back(e);
  }
  if (roots.size() != 1) {
    throw Error(ErrorCode::kInvariantViolation,
                name + ": expected one root, found " + std::to_string(roots.size()));
  }
  return make_record(std::move(name), roots.front(), std::move(entities),
                     edges, split);
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
  const std::string text = read_file(path);
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".tsv") || ends_with(".txt")) {
    std::string stem = path.substr(path.find_last_of('/') + 1);
    stem = stem.substr(0, stem.find_last_of('.'));
    std::vector<DatasetRecord> out;
    out.push_back(record_from_edge_list(text, stem));
    return out;
  }
  return parse_dataset(text, path);
}

std::string record_to_json(const DatasetRecord& r) {
  return record_json(r).dump(2) + "\n";
}

std::string dataset_to_json(std::span<const DatasetRecord> records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_json(r));
  return arr.dump(2) + "\n";
}

void save_dataset(const std::string& path,
                  std::span<const DatasetRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << (records.size() == 1 ? record_to_json(records.front())
                              : dataset_to_json(records));
}

}  // namespace colt
