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

#ifndef COLT_GATEWAY_H_
#define COLT_GATEWAY_H_

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colt/prompts.h"

namespace colt {

struct ChatRequest {
  ChatTranscript messages;
  std::string model = "gpt-4-1106-preview";
  double temperature = 0.0;
  int max_output_tokens = 4096;

  // Non-empty, first message is the system message, temperature in [0, 2].
  void validate() const;
};

enum class BackendKind { kHttp, kScripted };

// How a scripted backend picks the reply for a request.
enum class ScriptMode {
  kDigest,    // match the request digest, fall back to the next record
  kPosition,  // the i-th call gets the i-th record
};

struct BackendConfig {
  BackendKind kind = BackendKind::kScripted;
  // http
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 60.0;
  int retry_count = 3;
  double backoff_base_seconds = 1.0;
  int max_in_flight = 4;
  // scripted
  std::string transcript_path;
  ScriptMode script_mode = ScriptMode::kDigest;

  // retry_count in [0, 5], timeout > 0, and the fields the kind needs.
  void validate() const;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // Returns the assistant reply text for the request.
  virtual std::string complete(const ChatRequest& request) = 0;
  virtual std::string describe() const = 0;
};

// One line of a transcript file: {"digest": ..., "reply": ...}.
struct TranscriptRecord {
  std::string digest;
  std::string reply;

  friend bool operator==(const TranscriptRecord&, const TranscriptRecord&) = default;
};

// Hex SHA-256 over role and content of every message.
std::string request_digest(const ChatTranscript& messages);

std::string transcript_to_ndjson(std::span<const TranscriptRecord> records);
std::vector<TranscriptRecord> transcript_from_ndjson(std::string_view text);
std::vector<TranscriptRecord> read_transcript(const std::string& path);
void write_transcript(const std::string& path,
                      std::span<const TranscriptRecord> records);

// Replays recorded replies. Thread-safe; calls are served in arrival order.
class ScriptedBackend : public ChatBackend {
 public:
  ScriptedBackend(std::vector<TranscriptRecord> records, ScriptMode mode);
  static std::unique_ptr<ScriptedBackend> from_file(const std::string& path,
                                                    ScriptMode mode);
  // Positional script from bare replies.
  static std::unique_ptr<ScriptedBackend> from_replies(
      std::vector<std::string> replies);

  std::string complete(const ChatRequest& request) override;
  std::string describe() const override;

  std::size_t calls() const;
  // Digest misses served positionally.
  std::vector<std::string> diagnostics() const;

 private:
  std::vector<TranscriptRecord> records_;
  ScriptMode mode_;
  mutable std::mutex mu_;
  std::vector<bool> used_;
  std::size_t cursor_ = 0;
  std::size_t calls_ = 0;
  std::vector<std::string> diagnostics_;
};

// OpenAI-compatible chat-completions client with retry and backoff.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(BackendConfig config);
  ~HttpChatBackend() override;

  std::string complete(const ChatRequest& request) override;
  std::string describe() const override;
  long long tokens_used() const { return tokens_used_.load(); }

 private:
  class Limiter;
  BackendConfig config_;
  std::unique_ptr<Limiter> limiter_;
  std::atomic<long long> tokens_used_{0};
};

// Forwards to another backend and keeps (digest, reply) records for replay.
class RecordingBackend : public ChatBackend {
 public:
  explicit RecordingBackend(ChatBackend& inner) : inner_(inner) {}

  std::string complete(const ChatRequest& request) override;
  std::string describe() const override;

  std::vector<TranscriptRecord> records() const;
  void save(const std::string& path) const;

 private:
  ChatBackend& inner_;
  mutable std::mutex mu_;
  std::vector<TranscriptRecord> records_;
};

std::unique_ptr<ChatBackend> make_backend(const BackendConfig& config);

// One-off completion through a freshly made backend.
std::string complete(const ChatRequest& request, const BackendConfig& config);

}  // namespace colt

#endif  // COLT_GATEWAY_H_
