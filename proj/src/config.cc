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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "colt/harness.h"
#include "json.hpp"
#include "toml.hpp"

namespace colt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view section,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidConfig,
                "'" + std::string(section) + "' must be a table");
  }
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "unknown key '" + key + "' in " + std::string(section));
    }
  }
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("bad value for '") + key + "'");
  }
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, bool toml,
                                         const std::string& base_dir) {
  json j;
  if (toml) {
    try {
      toml::table tbl = toml::parse(text);
      std::ostringstream ss;
      ss << toml::json_formatter{tbl};
      j = json::parse(ss.str());
    } catch (const toml::parse_error& e) {
      std::ostringstream ss;
      ss << "line " << e.source().begin.line << ": " << e.description();
      throw Error(ErrorCode::kParseError, ss.str());
    }
  } else {
    j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kParseError, "invalid JSON config");
  }
  check_keys(j, "config",
             {"name", "datasets", "demos", "shots", "cells", "out_dir",
              "workers", "timestamps", "averaging", "transcript_dir",
              "induction", "backend", "scorer"});

  ExperimentConfig c;
  take(j, "name", c.name);
  take(j, "datasets", c.datasets);
  for (auto& d : c.datasets) d = resolve(base_dir, d);
  take(j, "demos", c.demos_path);
  c.demos_path = resolve(base_dir, c.demos_path);
  take(j, "shots", c.shots);
  if (j.contains("cells")) {
    std::vector<std::string> cells;
    take(j, "cells", cells);
    c.cells.clear();
    for (const auto& s : cells) {
      if (s == "ablation") {
        for (const auto& a : ablation_cells()) c.cells.push_back(a);
      } else {
        c.cells.push_back(parse_cell(s));
      }
    }
  }
  take(j, "out_dir", c.out_dir);
  c.out_dir = resolve(base_dir, c.out_dir);
  take(j, "workers", c.workers);
  take(j, "timestamps", c.timestamps);
  take(j, "transcript_dir", c.transcript_dir);
  c.transcript_dir = resolve(base_dir, c.transcript_dir);
  if (j.contains("averaging")) {
    std::string a;
    take(j, "averaging", a);
    if (a == "macro") {
      c.averaging = Averaging::kMacro;
    } else if (a == "micro") {
      c.averaging = Averaging::kMicro;
    } else {
      throw Error(ErrorCode::kInvalidConfig, "averaging must be macro or micro");
    }
  }
  if (c.shots == 0) c.induction.strict_entity_set = false;

  if (j.contains("induction")) {
    const json& s = j["induction"];
    check_keys(s, "induction",
               {"top_k", "max_iterations", "stall_limit", "strict_entities",
                "honor_model_completion", "model", "temperature",
                "max_output_tokens", "candidate_pool", "templates"});
    auto& ic = c.induction;
    take(s, "top_k", ic.top_k);
    take(s, "max_iterations", ic.max_iterations);
    take(s, "stall_limit", ic.stall_limit);
    take(s, "strict_entities", ic.strict_entity_set);
    take(s, "honor_model_completion", ic.honor_model_completion);
    take(s, "model", ic.model);
    take(s, "temperature", ic.temperature);
    take(s, "max_output_tokens", ic.max_output_tokens);
    take(s, "templates", ic.templates);
    if (s.contains("candidate_pool")) {
      std::string p;
      take(s, "candidate_pool", p);
      if (p == "all") {
        ic.candidate_pool = CandidatePool::kAllEntities;
      } else if (p == "placed") {
        ic.candidate_pool = CandidatePool::kPlacedNodes;
      } else {
        throw Error(ErrorCode::kInvalidConfig, "candidate_pool must be all or placed");
      }
    }
  }
  if (j.contains("backend")) {
    const json& s = j["backend"];
    check_keys(s, "backend",
               {"kind", "endpoint_url", "api_key_env", "timeout_seconds",
                "retry_count", "backoff_base_seconds", "max_in_flight",
                "script_mode"});
    auto& b = c.backend;
    std::string kind = "scripted";
    take(s, "kind", kind);
    if (kind == "http") {
      b.kind = BackendKind::kHttp;
    } else if (kind == "scripted") {
      b.kind = BackendKind::kScripted;
    } else {
      throw Error(ErrorCode::kInvalidConfig, "backend kind must be http or scripted");
    }
    take(s, "endpoint_url", b.endpoint_url);
    take(s, "api_key_env", b.api_key_env);
    take(s, "timeout_seconds", b.timeout_seconds);
    take(s, "retry_count", b.retry_count);
    take(s, "backoff_base_seconds", b.backoff_base_seconds);
    take(s, "max_in_flight", b.max_in_flight);
    if (s.contains("script_mode")) {
      std::string m;
      take(s, "script_mode", m);
      if (m == "digest") {
        b.script_mode = ScriptMode::kDigest;
      } else if (m == "position") {
        b.script_mode = ScriptMode::kPosition;
      } else {
        throw Error(ErrorCode::kInvalidConfig, "script_mode must be digest or position");
      }
    }
    if (b.kind == BackendKind::kHttp) b.validate();
  }
  if (j.contains("scorer")) {
    const json& s = j["scorer"];
    check_keys(s, "scorer",
               {"kind", "endpoint_url", "timeout_seconds", "retry_count",
                "backoff_base_seconds"});
    std::string kind = "lexical";
    take(s, "kind", kind);
    if (kind == "lexical") {
      c.scorer = ScorerKind::kLexical;
    } else if (kind == "remote") {
      c.scorer = ScorerKind::kRemote;
    } else {
      throw Error(ErrorCode::kInvalidConfig, "scorer kind must be lexical or remote");
    }
    take(s, "endpoint_url", c.remote_scorer.endpoint_url);
    take(s, "timeout_seconds", c.remote_scorer.timeout_seconds);
    take(s, "retry_count", c.remote_scorer.retry_count);
    take(s, "backoff_base_seconds", c.remote_scorer.backoff_base_seconds);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const bool toml = fs::path(path).extension() == ".toml";
  const std::string base = fs::path(path).parent_path().string();
  return parse_experiment_config(ss.str(), toml, base.empty() ? "." : base);
}

}  // namespace colt
