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

#include "colt/gateway.h"

#include <cstdlib>
#include <fstream>
#include <semaphore>
#include <sstream>

#include "http_util.h"
#include "httplib.h"
#include "json.hpp"

namespace colt {

using json = nlohmann::json;

void ChatRequest::validate() const {
  if (messages.empty()) {
    throw Error(ErrorCode::kPrecondition, "chat request has no messages");
  }
  if (messages.front().role != Role::kSystem) {
    throw Error(ErrorCode::kPrecondition,
                "chat request must start with the system message");
  }
  if (temperature < 0.0 || temperature > 2.0) {
    throw Error(ErrorCode::kPrecondition, "temperature must be in [0, 2]");
  }
  if (max_output_tokens <= 0) {
    throw Error(ErrorCode::kPrecondition, "max_output_tokens must be positive");
  }
}

void BackendConfig::validate() const {
  if (retry_count < 0 || retry_count > 5) {
    throw Error(ErrorCode::kInvalidConfig, "retry_count must be in [0, 5]");
  }
  if (!(timeout_seconds > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "timeout_seconds must be positive");
  }
  if (max_in_flight < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_in_flight must be at least 1");
  }
  if (kind == BackendKind::kHttp && endpoint_url.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "http backend needs endpoint_url");
  }
  if (kind == BackendKind::kScripted && transcript_path.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "scripted backend needs transcript_path");
  }
}

std::string transcript_to_ndjson(std::span<const TranscriptRecord> records) {
  std::string out;
  for (const auto& r : records) {
    json line = {{"digest", r.digest}, {"reply", r.reply}};
    out += line.dump() + "\n";
  }
  return out;
}

std::vector<TranscriptRecord> transcript_from_ndjson(std::string_view text) {
  std::vector<TranscriptRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      TranscriptRecord r;
      if (j.contains("digest") && !j["digest"].is_null()) {
        r.digest = j.at("digest").get<std::string>();
      }
      r.reply = j.at("reply").get<std::string>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError, "transcript line " +
                                              std::to_string(line_no) + ": " +
                                              e.what());
    }
  }
  return out;
}

std::vector<TranscriptRecord> read_transcript(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open transcript " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return transcript_from_ndjson(buf.str());
}

void write_transcript(const std::string& path,
                      std::span<const TranscriptRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write transcript " + path);
  out << transcript_to_ndjson(records);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

ScriptedBackend::ScriptedBackend(std::vector<TranscriptRecord> records,
                                 ScriptMode mode)
    : records_(std::move(records)), mode_(mode), used_(records_.size(), false) {}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(
    const std::string& path, ScriptMode mode) {
  return std::make_unique<ScriptedBackend>(read_transcript(path), mode);
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_replies(
    std::vector<std::string> replies) {
  std::vector<TranscriptRecord> records;
  for (auto& r : replies) records.push_back({"", std::move(r)});
  return std::make_unique<ScriptedBackend>(std::move(records),
                                           ScriptMode::kPosition);
}

std::string ScriptedBackend::complete(const ChatRequest& request) {
  request.validate();
  std::lock_guard<std::mutex> lock(mu_);
  ++calls_;
  if (mode_ == ScriptMode::kDigest) {
    const std::string digest = request_digest(request.messages);
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (!used_[i] && records_[i].digest == digest) {
        used_[i] = true;
        cursor_ = i + 1;
        return records_[i].reply;
      }
    }
  }
  while (cursor_ < records_.size() && used_[cursor_]) ++cursor_;
  if (cursor_ >= records_.size()) {
    throw Error(ErrorCode::kScriptExhausted,
                "script has no reply for call " + std::to_string(calls_));
  }
  if (mode_ == ScriptMode::kDigest) {
    diagnostics_.push_back("call " + std::to_string(calls_) +
                           ": digest miss, served record " +
                           std::to_string(cursor_ + 1) + " by position");
  }
  used_[cursor_] = true;
  return records_[cursor_++].reply;
}

std::string ScriptedBackend::describe() const {
  return std::string("scripted:") +
         (mode_ == ScriptMode::kDigest ? "digest" : "position") + ":" +
         std::to_string(records_.size());
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

std::vector<std::string> ScriptedBackend::diagnostics() const {
  std::lock_guard<std::mutex> lock(mu_);
  return diagnostics_;
}

class HttpChatBackend::Limiter {
 public:
  explicit Limiter(int n) : sem_(n) {}
  void acquire() { sem_.acquire(); }
  void release() { sem_.release(); }

 private:
  std::counting_semaphore<1024> sem_;
};

HttpChatBackend::HttpChatBackend(BackendConfig config)
    : config_(std::move(config)) {
  config_.kind = BackendKind::kHttp;
  config_.validate();
  limiter_ = std::make_unique<Limiter>(std::min(config_.max_in_flight, 1024));
}

HttpChatBackend::~HttpChatBackend() = default;

std::string HttpChatBackend::describe() const {
  return "http:" + config_.endpoint_url;
}

std::string HttpChatBackend::complete(const ChatRequest& request) {
  request.validate();

  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  json body = {{"model", request.model},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_output_tokens}};
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str());
        key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  auto url = internal::split_url(config_.endpoint_url);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>(
      (config_.timeout_seconds - static_cast<double>(secs)) * 1e6);

  struct Release {
    Limiter* l;
    ~Release() { l->release(); }
  };
  limiter_->acquire();
  Release release{limiter_.get()};

  ErrorCode last_code = ErrorCode::kTimeout;
  std::string last_message;
  for (int attempt = 0; attempt <= config_.retry_count; ++attempt) {
    if (attempt > 0) internal::backoff_sleep(config_.backoff_base_seconds, attempt - 1);

    httplib::Client client(url.base);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    auto res = client.Post(url.path, headers, payload, "application/json");
    if (!res) {
      last_code = ErrorCode::kTimeout;
      last_message = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorCode::kAuthError,
                  "endpoint rejected credentials (HTTP " +
                      std::to_string(res->status) + ")");
    }
    if (res->status == 429) {
      last_code = ErrorCode::kRateLimited;
      last_message = "HTTP 429";
      continue;
    }
    if (res->status >= 500) {
      last_code = ErrorCode::kServerError;
      last_message = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kMalformedResponse,
                  "unexpected HTTP " + std::to_string(res->status) + ": " +
                      res->body.substr(0, 200));
    }
    try {
      json reply = json::parse(res->body);
      if (reply.contains("usage") && reply["usage"].contains("total_tokens")) {
        tokens_used_ += reply["usage"]["total_tokens"].get<long long>();
      }
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedResponse,
                  std::string("cannot read choices[0].message.content: ") +
                      e.what());
    }
  }
  throw Error(last_code, last_message + " after " +
                             std::to_string(config_.retry_count + 1) +
                             " attempts");
}

std::string RecordingBackend::complete(const ChatRequest& request) {
  std::string reply = inner_.complete(request);
  std::lock_guard<std::mutex> lock(mu_);
  records_.push_back({request_digest(request.messages), reply});
  return reply;
}

std::string RecordingBackend::describe() const {
  return "recording(" + inner_.describe() + ")";
}

std::vector<TranscriptRecord> RecordingBackend::records() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

void RecordingBackend::save(const std::string& path) const {
  write_transcript(path, records());
}

std::unique_ptr<ChatBackend> make_backend(const BackendConfig& config) {
  config.validate();
  if (config.kind == BackendKind::kHttp) {
    return std::make_unique<HttpChatBackend>(config);
  }
  return ScriptedBackend::from_file(config.transcript_path, config.script_mode);
}

std::string complete(const ChatRequest& request, const BackendConfig& config) {
  return make_backend(config)->complete(request);
}

}  // namespace colt
