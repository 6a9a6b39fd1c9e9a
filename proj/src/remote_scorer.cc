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

#include <unordered_map>

#include "colt/rank_filter.h"
#include "http_util.h"
#include "httplib.h"
#include "json.hpp"

namespace colt {

using json = nlohmann::json;

RemoteMlmScorer::RemoteMlmScorer(RemoteScorerConfig config)
    : config_(std::move(config)) {
  if (config_.retry_count < 0 || config_.retry_count > 5) {
    throw Error(ErrorCode::kInvalidConfig, "retry_count must be in [0, 5]");
  }
  if (!(config_.timeout_seconds > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "timeout_seconds must be positive");
  }
  internal::split_url(config_.endpoint_url);
}

std::string RemoteMlmScorer::describe() const {
  return "remote:" + config_.endpoint_url;
}

RankMap RemoteMlmScorer::rank(const Entity& query,
                              std::span<const Entity> candidates,
                              std::string_view tmpl) {
  TemplateSet one({std::string(tmpl)});
  return rank_all(query, candidates, one).front();
}

std::vector<RankMap> RemoteMlmScorer::rank_all(
    const Entity& query, std::span<const Entity> candidates,
    const TemplateSet& templates) {
  json names = json::array();
  std::unordered_map<std::string, std::string> key_of;
  for (const auto& c : candidates) {
    names.push_back(c.surface());
    key_of[c.surface()] = c.key();
  }
  json body = {{"query", query.surface()},
               {"candidates", names},
               {"templates", templates.templates()}};
  const std::string payload = body.dump();

  auto url = internal::split_url(config_.endpoint_url);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>(
      (config_.timeout_seconds - static_cast<double>(secs)) * 1e6);

  std::string last_failure;
  for (int attempt = 0; attempt <= config_.retry_count; ++attempt) {
    if (attempt > 0) {
      internal::backoff_sleep(config_.backoff_base_seconds, attempt - 1);
    }
    httplib::Client client(url.base);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    auto res = client.Post(url.path, payload, "application/json");
    if (!res) {
      last_failure = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 503 || res->status == 429 || res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status == 422 || res->status == 400) {
      throw Error(ErrorCode::kPrecondition,
                  "ranking service rejected the request (HTTP " +
                      std::to_string(res->status) + "): " +
                      res->body.substr(0, 200));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kMalformedResponse,
                  "unexpected HTTP " + std::to_string(res->status));
    }
    try {
      json reply = json::parse(res->body);
      const auto& per_template = reply.at("per_template_ranks");
      std::vector<RankMap> out;
      for (const auto& t : templates.templates()) {
        RankMap ranks;
        for (const auto& [name, r] : per_template.at(t).items()) {
          auto it = key_of.find(name);
          if (it == key_of.end()) {
            throw Error(ErrorCode::kMalformedResponse,
                        "ranking service returned unknown candidate '" + name +
                            "'");
          }
          ranks[it->second] = r.get<int>();
        }
        out.push_back(std::move(ranks));
      }
      return out;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedResponse,
                  std::string("cannot read per_template_ranks: ") + e.what());
    }
  }
  throw Error(ErrorCode::kScorerUnavailable,
              "ranking service unavailable (" + last_failure + ") after " +
                  std::to_string(config_.retry_count + 1) + " attempts");
}

}  // namespace colt
